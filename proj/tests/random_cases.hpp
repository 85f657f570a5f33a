#pragma once

#include "fixtures.hpp"
#include "random_graph.hpp"

#include "pathcert/family.hpp"
#include "pathcert/groupoid.hpp"

#include <random>
#include <vector>

namespace testing_support {

/// A graph with a family converging pointwise to z, plus a pool of paths on it.
struct Scene {
    pathcert::StagedGraph g;
    pathcert::InfinitePath z;
    pathcert::PathFamily F;
    std::vector<pathcert::InfinitePath> pool;
};

inline Scene make_scene(const pathcert::Document& d, const std::string& family, const std::string& limit,
                        std::int64_t n_max = 8) {
    Scene s{d.graph, d.path(limit), d.family(family), {}};
    s.pool.push_back(s.z);
    for (std::int64_t n = s.F.n_min; n <= n_max; ++n) {
        const pathcert::InfinitePath x = pathcert::materialize(s.g, s.F, n);
        s.pool.push_back(x);
        s.pool.push_back(pathcert::shift(s.g, x, 1));
    }
    return s;
}

/// Walks up to `steps` edges upwards (against edge direction) from u and
/// returns the path read from its range end down to u.
inline pathcert::FinitePath random_path_into(std::mt19937_64& rng, const pathcert::StagedGraph& g,
                                             pathcert::VertexRef u, int steps) {
    std::vector<pathcert::EdgeRef> rev;
    for (int i = 0; i < steps; ++i) {
        const auto out = g.outgoing_edges(u);
        if (out.empty()) break;
        const pathcert::EdgeRef e = out[uniform(rng, 0, static_cast<int>(out.size()) - 1)];
        rev.push_back(e);
        u = g.range(e);
    }
    return pathcert::FinitePath{u, {rev.rbegin(), rev.rend()}};
}

/// Z(alpha, beta) with beta a prefix of y (so y is a source of the set) and
/// alpha a random path into s(beta).
inline pathcert::BasicSet random_basic_set_over(std::mt19937_64& rng, const pathcert::StagedGraph& g,
                                                const pathcert::InfinitePath& y) {
    const std::size_t m = static_cast<std::size_t>(uniform(rng, 0, 4));
    pathcert::FinitePath beta{y.range(), y.head(m)};
    pathcert::FinitePath alpha = random_path_into(rng, g, beta.source(g), uniform(rng, 0, 4));
    return pathcert::make_basic_set(g, std::move(alpha), std::move(beta));
}

/// Random element with source in the pool.
inline pathcert::GroupoidElement random_element(std::mt19937_64& rng, const Scene& s) {
    const auto& y = s.pool[uniform(rng, 0, static_cast<int>(s.pool.size()) - 1)];
    return *pathcert::element_at_source(s.g, random_basic_set_over(rng, s.g, y), y);
}

/// 1..4 basic sets, each anchored on a path drawn from `anchors`.
inline pathcert::CompactSet random_compact(std::mt19937_64& rng, const pathcert::StagedGraph& g,
                                           const std::vector<pathcert::InfinitePath>& anchors) {
    std::vector<pathcert::BasicSet> parts;
    const int n = uniform(rng, 1, 4);
    for (int i = 0; i < n; ++i) {
        const auto& y = anchors[uniform(rng, 0, static_cast<int>(anchors.size()) - 1)];
        pathcert::BasicSet B = random_basic_set_over(rng, g, y);
        if (coin(rng, 0.3)) std::swap(B.alpha, B.beta);
        parts.push_back(std::move(B));
    }
    return pathcert::CompactSet::of(std::move(parts));
}

/// Fixture scenes plus random staged graphs with their spine family.
inline std::vector<Scene> scenes(std::mt19937_64& rng, int random_count) {
    std::vector<Scene> out;
    out.push_back(make_scene(load("ladder2.graph"), "x", "z"));
    out.push_back(make_scene(load("alt23.graph"), "x", "z"));
    out.push_back(make_scene(load("fork.graph"), "seq", "x"));
    out.push_back(make_scene(load("exp2.graph"), "x", "z"));
    out.push_back(make_scene(load("ladderk4.graph"), "x", "z"));
    for (int i = 0; i < random_count; ++i) {
        out.push_back(make_scene(pathcert::parse_document(random_document(random_spec(rng))), "x", "z"));
    }
    return out;
}

}  // namespace testing_support
