#include "doctest.h"
#include "fixtures.hpp"

#include "pathcert/errors.hpp"
#include "pathcert/oracle.hpp"

using namespace pathcert;
using testing_support::load;
using testing_support::prefix_cylinder;

namespace {

// Moves the first tail edge into the prefix; the canonical form must undo it.
InfinitePath reencode(const StagedGraph& g, const InfinitePath& x) {
    FinitePath p = x.prefix();
    p.edges.push_back(x.edge(p.size() + 1));
    if (const auto* r = std::get_if<RayTail>(&x.tail())) {
        return InfinitePath::make(g, p, RayTail{r->stage, r->ray, r->entry_depth + 1});
    }
    DescentTail d = std::get<DescentTail>(x.tail());
    std::rotate(d.pattern.begin(), d.pattern.begin() + 1, d.pattern.end());
    d.pattern.back() = d.pattern.back().shifted(d.shift);
    return InfinitePath::make(g, p, d);
}

}  // namespace

TEST_CASE("concat") {
    const StagedGraph g = load("ladder2.graph").graph;
    const EdgeRef spine = g.resolve_edge("spine", 1);
    const EdgeRef f1_2 = g.resolve_edge("f1", 2);
    const FinitePath beta = make_finite_path(g, {f1_2});
    CHECK(concat(g, FinitePath{g.range(f1_2), {}}, beta) == beta);

    const FinitePath ab = concat(g, make_finite_path(g, {spine}), beta);
    CHECK(ab.size() == 2);
    CHECK(ab.range() == g.resolve_vertex("v", 1));
    CHECK(ab.source(g) == g.resolve_vertex("w", 2));

    CHECK_THROWS_AS(concat(g, make_finite_path(g, {g.resolve_edge("f1", 1)}), beta), CompositionMismatch);
    CHECK_THROWS_AS(make_finite_path(g, {f1_2, spine}), CompositionMismatch);
}

TEST_CASE("concat_infinite and canonical merging") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    const InfinitePath& z = d.path("z");
    CHECK(concat_infinite(g, FinitePath{z.range(), {}}, z) == z);
    CHECK(concat_infinite(g, prefix_cylinder(z, 1), shift(g, z, 1)) == z);
    CHECK(z.prefix().empty());

    const StagedGraph fork = load("fork.graph").graph;
    const InfinitePath below_u =
        InfinitePath::make(fork, make_finite_path(fork, {fork.resolve_edge("f1", 1)}), RayTail{1, 0, 0});
    const InfinitePath y =
        concat_infinite(fork, make_finite_path(fork, {fork.resolve_edge("av", 1)}), below_u);
    CHECK(y.range() == fork.resolve_vertex("v", 1));
    CHECK(y.prefix().size() == 2);
    CHECK_THROWS_AS(concat_infinite(fork, make_finite_path(fork, {fork.resolve_edge("aw", 2)}), below_u),
                    CompositionMismatch);
}

TEST_CASE("materialize and shift") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    const PathFamily& F = d.family("x");

    const InfinitePath x1 = materialize(g, F, 1);
    CHECK(x1.prefix().edges == std::vector<EdgeRef>{g.resolve_edge("f1", 1)});
    CHECK(std::get<RayTail>(x1.tail()) == RayTail{1, 0, 0});
    CHECK(x1 == d.path("x1"));

    const InfinitePath x3 = materialize(g, F, 3);
    CHECK(x3.prefix().edges ==
          std::vector<EdgeRef>{g.resolve_edge("spine", 1), g.resolve_edge("spine", 2), g.resolve_edge("f1", 3)});
    CHECK(std::get<RayTail>(x3.tail()) == RayTail{3, 0, 0});
    CHECK_THROWS_AS(materialize(g, F, 0), IndexBelowMin);

    CHECK(shift(g, x3, 0) == x3);
    const InfinitePath s3 = shift(g, x3, 3);
    CHECK(s3.prefix().empty());
    CHECK(s3.prefix().anchor == g.resolve_vertex("w", 3));
    CHECK(std::get<RayTail>(s3.tail()) == RayTail{3, 0, 0});

    const InfinitePath& z = d.path("z");
    const InfinitePath z1 = shift(g, z, 1);
    CHECK(z1.prefix().empty());
    CHECK(std::get<DescentTail>(z1.tail()).pattern == std::vector<EdgeRef>{g.resolve_edge("spine", 2)});

    const Document alt = load("alt23.graph");
    const InfinitePath a2 = materialize(alt.graph, alt.family("x"), 2);
    CHECK(a2.prefix().edges.back() == alt.graph.resolve_edge("f1", 2));
    CHECK(alt.graph.block(2).edges.size() == 3);
}

TEST_CASE("vertex_at and in_cylinder") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    const InfinitePath& z = d.path("z");
    const PathFamily& F = d.family("x");
    CHECK(vertex_at(g, z, 0) == VertexRef::block(1, 0));
    CHECK(vertex_at(g, materialize(g, F, 2), 2) == g.resolve_vertex("w", 2));
    CHECK(vertex_at(g, z, 5) == VertexRef::block(6, 0));
    CHECK(vertex_at(g, materialize(g, F, 2), 4) == VertexRef::ray(2, 0, 2));

    for (const InfinitePath& x : {z, materialize(g, F, 4)}) CHECK(in_cylinder(x, FinitePath{x.range(), {}}));
    for (std::int64_t n = 2; n <= 8; ++n) {
        for (std::size_t m = 1; m < static_cast<std::size_t>(n); ++m) {
            CHECK(in_cylinder(materialize(g, F, n), prefix_cylinder(z, m)));
        }
        CHECK_FALSE(in_cylinder(materialize(g, F, n), prefix_cylinder(z, static_cast<std::size_t>(n))));
    }
    CHECK_FALSE(in_cylinder(materialize(g, F, 1), prefix_cylinder(z, 1)));
}

TEST_CASE("shift_lag examples") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    const InfinitePath& z = d.path("z");
    const PathFamily& F = d.family("x");
    for (std::int64_t n = 1; n <= 6; ++n) {
        const InfinitePath xn = materialize(g, F, n);
        CHECK(shift_lag(g, xn, xn) == 0);
        const InfinitePath other = unique_path(g, g.resolve_vertex("v", 1), g.resolve_edge("f2", n));
        CHECK(shift_lag(g, other, xn) == 0);
        CHECK_FALSE(shift_lag(g, z, xn).has_value());
        CHECK(shift_lag(g, shift(g, xn, 2), xn) == 2);
        CHECK(shift_lag(g, xn, shift(g, xn, 2)) == -2);
    }
    CHECK(shift_lag(g, z, shift(g, z, 3)) == -3);

    const StagedGraph loop = load("loop1.graph").graph;
    const InfinitePath down = InfinitePath::make(loop, FinitePath{VertexRef::block(1, 0), {}},
                                                 resolve_descent(loop, VertexRef::block(1, 0), {"down"}));
    CHECK_THROWS_AS(shift_lag(loop, down, down), NotPrincipal);
}

TEST_CASE("unique_path") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    for (std::int64_t n = 1; n <= 6; ++n) {
        CHECK(unique_path(g, g.resolve_vertex("v", 1), g.resolve_edge("f1", n)) == materialize(g, d.family("x"), n));
    }
    CHECK_THROWS_AS(unique_path(g, g.resolve_vertex("v", 1), g.resolve_edge("spine", 1)), NotUnique);
    CHECK_THROWS_AS(unique_path(g, g.resolve_vertex("v", 3), g.resolve_edge("f1", 1)), NoPath);

    const Document f = load("fork.graph");
    const StagedGraph& fg = f.graph;
    for (std::int64_t n = 1; n <= 5; ++n) {
        const InfinitePath p = unique_path(fg, fg.resolve_vertex("w", 1), fg.resolve_edge("f1", n));
        CHECK(p.range() == fg.resolve_vertex("w", 1));
        CHECK(p.prefix().size() == static_cast<std::size_t>(n + 1));
        CHECK(fg.edge_id(p.prefix().edges[n - 1]) == "aw");
        CHECK(shift_lag(fg, p, materialize(fg, f.family("seq"), n)) == 0);
    }
}

TEST_CASE("family_converges_pointwise") {
    const Document d = load("ladder2.graph");
    const ConvergenceTable t = family_converges_pointwise(d.graph, d.family("x"), d.path("z"), 6);
    CHECK(t.converges);
    CHECK(t.first_agreement == std::vector<std::int64_t>{2, 3, 4, 5, 6, 7});
    CHECK_FALSE(family_converges_pointwise(d.graph, d.family("x"), d.path("x1"), 4).converges);

    const Document f = load("fork.graph");
    CHECK(family_converges_pointwise(f.graph, f.family("seq"), f.path("x"), 4).converges);
    CHECK_FALSE(family_converges_pointwise(f.graph, f.family("seq"), f.path("y"), 4).converges);
}

TEST_CASE("property: lag laws, nestedness and canonical form on fixtures") {
    for (const char* file : {"ladder2.graph", "alt23.graph", "fork.graph", "exp2.graph", "ladderk3.graph"}) {
        CAPTURE(file);
        const Document d = load(file);
        const StagedGraph& g = d.graph;
        const PathFamily& F = d.families.front();
        std::vector<InfinitePath> pool;
        for (const NamedPath& np : d.paths) pool.push_back(np.path);
        for (std::int64_t n = 1; n <= 8; ++n) {
            const InfinitePath xn = materialize(g, F, n);
            for (std::size_t j : {0, 1, 3}) pool.push_back(shift(g, xn, j));
        }
        for (const InfinitePath& x : pool) {
            CHECK(shift_lag(g, x, x) == 0);
            CHECK(reencode(g, x) == x);
            for (std::size_t m = 0; m < 6; ++m) {
                if (in_cylinder(x, FinitePath{x.range(), x.head(m + 1)})) {
                    CHECK(in_cylinder(x, FinitePath{x.range(), x.head(m)}));
                }
            }
        }
        for (const InfinitePath& x : pool) {
            for (const InfinitePath& y : pool) {
                const auto k = shift_lag(g, x, y);
                const auto back = shift_lag(g, y, x);
                CHECK(k.has_value() == back.has_value());
                if (k && back) CHECK(*k == -*back);
                if (!k) continue;
                for (const InfinitePath& w : pool) {
                    if (const auto l = shift_lag(g, y, w)) CHECK(shift_lag(g, x, w) == *k + *l);
                }
            }
        }
    }
}

TEST_CASE("property: shift_lag agrees with the window oracle") {
    for (const char* file : {"ladder2.graph", "alt23.graph", "fork.graph", "ladderk4.graph"}) {
        CAPTURE(file);
        const Document d = load(file);
        const StagedGraph& g = d.graph;
        const FiniteGraphSlice slice = realize_slice(g, 12, 12);
        std::vector<InfinitePath> pool;
        for (const NamedPath& np : d.paths) pool.push_back(np.path);
        for (std::int64_t n = 1; n <= 8; ++n) {
            const InfinitePath xn = materialize(g, d.families.front(), n);
            pool.push_back(xn);
            pool.push_back(shift(g, xn, 1));
        }
        // 11 edges of any pool path stay within 12 stages and depth 12.
        const std::size_t L = 11;
        for (const InfinitePath& x : pool) {
            for (const InfinitePath& y : pool) {
                const auto sym = shift_lag(g, x, y);
                const auto brute = brute_shift_lag(slice, x, y, L);
                if (sym && std::abs(*sym) <= 3) {
                    CHECK(brute == sym);
                } else if (!sym) {
                    // One-sided: a window match is only evidence, but none of
                    // these pairs share a long window.
                    CHECK_FALSE(brute.has_value());
                }
            }
        }
    }
}
