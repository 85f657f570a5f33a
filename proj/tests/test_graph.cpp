#include "doctest.h"
#include "fixtures.hpp"
#include "random_graph.hpp"

#include "pathcert/errors.hpp"

#include <functional>
#include <set>

using namespace pathcert;
using testing_support::load;

namespace {

std::vector<std::string> labels(const StagedGraph& g, const std::vector<EdgeRef>& es) {
    std::vector<std::string> out;
    for (const EdgeRef& e : es) out.push_back(g.label(e));
    return out;
}

// Independent cycle search on a materialized slice.
bool slice_has_cycle(const FiniteGraphSlice& s) {
    std::map<VertexRef, int> color;
    std::function<bool(const VertexRef&)> dfs = [&](const VertexRef& v) {
        color[v] = 1;
        if (auto it = s.incoming.find(v); it != s.incoming.end()) {
            for (const EdgeRef& e : it->second) {
                const VertexRef u = s.source_of.at(e);
                if (color[u] == 1) return true;
                if (color[u] == 0 && dfs(u)) return true;
            }
        }
        color[v] = 2;
        return false;
    };
    for (const VertexRef& v : s.vertices) {
        if (color[v] == 0 && dfs(v)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("fixtures parse") {
    for (const char* f : {"ladder2.graph", "alt23.graph", "fork.graph", "loop1.graph", "exp2.graph", "ladderk2.graph",
                          "ladderk3.graph", "ladderk4.graph", "ladderk5.graph"}) {
        CAPTURE(f);
        Document d = load(f);
        CHECK(d.graph.period() >= 1);
    }
}

TEST_CASE("LADDER2 structure") {
    const StagedGraph g = load("ladder2.graph").graph;
    CHECK(g.period() == 1);
    CHECK(g.base_count() == 0);
    const BlockTemplate& b = g.block(1);
    CHECK(b.vertices == std::vector<std::string>{"v", "w"});
    REQUIRE(b.edges.size() == 2);
    CHECK(b.edges[0].id == "f1");
    CHECK(b.edges[1].id == "f2");
    CHECK(b.vertices[b.edges[0].range] == "v");
    CHECK(b.vertices[b.edges[0].source] == "w");
    REQUIRE(b.rays.size() == 1);
    CHECK(b.vertices[b.rays[0].attach] == "w");
    REQUIRE(g.cross(1) != nullptr);
    CHECK(g.cross(1)->edges.size() == 1);
}

TEST_CASE("ALT23 has period 2 with 2 and 3 parallel edges") {
    const StagedGraph g = load("alt23.graph").graph;
    CHECK(g.period() == 2);
    CHECK(g.block(1).edges.size() == 2);
    CHECK(g.block(2).edges.size() == 3);
    CHECK(g.block(3).edges.size() == 2);
}

TEST_CASE("parse errors") {
    SUBCASE("undeclared vertex") {
        const char* text = "graph G { repeat { block A { vertex v; edge e range v source q; } } }";
        try {
            parse_graph_dsl(text);
            FAIL("expected ResolutionError");
        } catch (const ResolutionError& e) {
            CHECK(std::string(e.what()).find("q") != std::string::npos);
        }
    }
    SUBCASE("duplicate id") {
        const char* text = "graph G { repeat { block A { vertex v, v; } } }";
        CHECK_THROWS_AS(parse_graph_dsl(text), DuplicateIdError);
    }
    SUBCASE("syntax error position") {
        const char* text = "graph G {\n  repeat {\n    block A { vertex v edge; }\n  }\n}";
        try {
            parse_graph_dsl(text);
            FAIL("expected SyntaxError");
        } catch (const SyntaxError& e) {
            CHECK(e.line() == 3);
            CHECK(e.column() > 1);
        }
    }
    SUBCASE("missing repeat section") {
        CHECK_THROWS_AS(parse_graph_dsl("graph G { }"), SyntaxError);
    }
}

TEST_CASE("validate_graph") {
    CHECK(validate_graph(load("ladder2.graph").graph.spec()).empty());
    CHECK(validate_graph(load("fork.graph").graph.spec()).empty());

    GraphSpec bad = parse_graph_spec(
        "graph G { repeat { block A { vertex v; } } cross A -> A { edge c range v source nope; } }");
    const auto vs = validate_graph(bad);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].kind == Violation::Kind::Resolution);
    CHECK(vs[0].message.find("nope") != std::string::npos);
    CHECK_THROWS_AS(StagedGraph::from_spec(bad), InvalidGraph);
}

TEST_CASE("principality") {
    for (const char* f : {"ladder2.graph", "ladderk2.graph", "ladderk3.graph", "ladderk4.graph", "ladderk5.graph",
                          "alt23.graph", "fork.graph", "exp2.graph"}) {
        CAPTURE(f);
        CHECK(is_principal(load(f).graph).principal);
    }
    const StagedGraph loop = load("loop1.graph").graph;
    const PrincipalityReport r = is_principal(loop);
    CHECK_FALSE(r.principal);
    CHECK(labels(loop, r.cycle) == std::vector<std::string>{"e@1"});
}

TEST_CASE("incoming_edges examples") {
    const StagedGraph g = load("ladder2.graph").graph;
    const auto in = incoming_edges(g, g.resolve_vertex("v", 1));
    CHECK(labels(g, in) == std::vector<std::string>{"f1@1", "f2@1", "spine@1"});

    const auto ray_in = incoming_edges(g, VertexRef::ray(3, 0, 5));
    REQUIRE(ray_in.size() == 1);
    CHECK(ray_in[0] == EdgeRef::ray(3, 0, 6));
    CHECK(g.source(ray_in[0]) == VertexRef::ray(3, 0, 6));

    const StagedGraph fork = load("fork.graph").graph;
    CHECK(labels(fork, incoming_edges(fork, fork.resolve_vertex("u", 2))) ==
          std::vector<std::string>{"f1@2", "f2@2"});

    CHECK_THROWS_AS(incoming_edges(g, VertexRef::block(1, 7)), UnknownVertex);
    CHECK_THROWS_AS(incoming_edges(g, VertexRef::ray(1, 0, 0)), UnknownVertex);
}

TEST_CASE("realize_slice counts") {
    const StagedGraph g = load("ladder2.graph").graph;
    const FiniteGraphSlice s = realize_slice(g, 2, 1);
    CHECK(s.vertices.size() == 6);
    CHECK(s.edges.size() == 7);

    // Two periods of ALT23: per stage 2 block vertices and 2 ray vertices;
    // edges 2 + 2 rays (A), 3 + 2 rays (B), plus 3 spines.
    const StagedGraph alt = load("alt23.graph").graph;
    const FiniteGraphSlice a = realize_slice(alt, 4, 2);
    CHECK(a.vertices.size() == 16);
    CHECK(a.edges.size() == 21);

    CHECK_THROWS_AS(realize_slice(g, 0, 1), BoundsError);
    CHECK_THROWS_AS(realize_slice(g, 2, 0), BoundsError);
    CHECK(std::is_sorted(a.vertices.begin(), a.vertices.end()));
}

TEST_CASE("property: slice incoming agrees with lazy incoming") {
    std::mt19937_64 rng(11);
    testing_support::RandomOptions opt;
    opt.allow_base = true;
    for (int trial = 0; trial < 60; ++trial) {
        const StagedGraph g = StagedGraph::from_spec(testing_support::random_spec(rng, opt));
        const FiniteGraphSlice s = realize_slice(g, 5, 3);
        for (const VertexRef& v : s.vertices) {
            std::vector<EdgeRef> lazy;
            for (const EdgeRef& e : g.incoming_edges(v)) {
                if (s.contains(e)) lazy.push_back(e);
            }
            std::vector<EdgeRef> mat;
            if (auto it = s.incoming.find(v); it != s.incoming.end()) mat = it->second;
            std::sort(lazy.begin(), lazy.end());
            std::sort(mat.begin(), mat.end());
            CHECK(lazy == mat);
        }
        for (const EdgeRef& e : s.edges) {
            CHECK(s.contains(g.range(e)));
            CHECK(s.contains(g.source(e)));
        }
    }
}

TEST_CASE("property: principality matches slice cycle search") {
    std::mt19937_64 rng(12);
    testing_support::RandomOptions opt;
    opt.allow_cycles = true;
    opt.allow_base = true;
    int cyclic = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const StagedGraph g = StagedGraph::from_spec(testing_support::random_spec(rng, opt));
        const PrincipalityReport r = is_principal(g);
        // A slice sees every template once it spans the base and one period.
        const std::int64_t full = g.base_count() + g.period();
        for (std::int64_t H : {full, full + 3, std::int64_t{8}}) {
            CHECK(r.principal == !slice_has_cycle(realize_slice(g, H, 4)));
        }
        if (!r.principal) {
            ++cyclic;
            REQUIRE_FALSE(r.cycle.empty());
            for (std::size_t i = 0; i < r.cycle.size(); ++i) {
                const EdgeRef& e = r.cycle[i];
                const EdgeRef& next = r.cycle[(i + 1) % r.cycle.size()];
                CHECK(g.source(e) == g.range(next));
            }
        }
    }
    CHECK(cyclic > 10);
}

TEST_CASE("property: render then parse is the identity") {
    for (const char* f : {"ladder2.graph", "alt23.graph", "fork.graph", "loop1.graph", "exp2.graph"}) {
        const GraphSpec s = load(f).graph.spec();
        CHECK(parse_graph_spec(render(s)) == s);
    }
    std::mt19937_64 rng(13);
    testing_support::RandomOptions opt;
    opt.allow_cycles = true;
    opt.allow_base = true;
    for (int trial = 0; trial < 200; ++trial) {
        const GraphSpec s = testing_support::random_spec(rng, opt);
        const StagedGraph g = parse_graph_dsl(render(s));
        CHECK(g.spec() == s);
        CHECK(render(g.spec()) == render(s));
    }
}
