#pragma once

// Random staged graphs for property sweeps and the randomized audit.

#include "pathcert/dsl.hpp"

#include <random>
#include <string>

namespace pathcert::random_graphs {

struct RandomOptions {
    int max_period = 2;
    int max_local = 3;     // block vertices, spine included
    int max_parallel = 3;  // parallel copies of one within edge
    bool allow_cycles = false;
    bool allow_base = false;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Block with spine vertex "v" and 1..max_local-1 further vertices. The last
/// vertex always carries ray "t" and at least one edge into "v". Within
/// edges point from later to earlier vertices unless cycles are allowed.
inline pathcert::BlockSpec random_block(std::mt19937_64& rng, const std::string& name, const RandomOptions& o) {
    static const char* names[] = {"v", "a", "b", "c"};
    pathcert::BlockSpec b;
    b.name = name;
    const int n = uniform(rng, 2, std::max(2, o.max_local));
    for (int i = 0; i < n; ++i) b.vertices.push_back(names[i]);
    int next_id = 0;
    auto add = [&](int range, int source, int copies) {
        for (int c = 0; c < copies; ++c) {
            b.edges.push_back({"e" + std::to_string(next_id++), b.vertices[range], b.vertices[source], {}});
        }
    };
    add(0, n - 1, uniform(rng, 1, o.max_parallel));
    for (int r = 0; r < n; ++r) {
        for (int s = r + 1; s < n; ++s) {
            if (r == 0 && s == n - 1) continue;
            if (coin(rng, 0.5)) add(r, s, uniform(rng, 1, o.max_parallel));
        }
    }
    if (o.allow_cycles) {
        for (int r = 0; r < n; ++r) {
            for (int s = 0; s <= r; ++s) {
                if (coin(rng, 0.15)) add(r, s, 1);
            }
        }
    }
    b.rays.push_back({"t", b.vertices[n - 1], {}});
    for (int i = 1; i + 1 < n; ++i) {
        if (coin(rng, 0.3)) b.rays.push_back({"r" + std::to_string(i), b.vertices[i], {}});
    }
    return b;
}

/// Cross edges never have the spine vertex as source apart from the spine
/// itself, so nothing rejoins the spine and orbit counts of the spine stay
/// finite.
inline pathcert::CrossSpec random_cross(std::mt19937_64& rng, const pathcert::BlockSpec& up,
                                        const pathcert::BlockSpec& lo) {
    pathcert::CrossSpec c;
    c.upper = up.name;
    c.lower = lo.name;
    c.edges.push_back({"spine", "v", "v", {}});
    int next_id = 0;
    for (std::size_t r = 0; r < up.vertices.size(); ++r) {
        for (std::size_t s = 1; s < lo.vertices.size(); ++s) {
            if (!coin(rng, 0.2)) continue;
            const int copies = uniform(rng, 1, 2);
            for (int k = 0; k < copies; ++k) {
                c.edges.push_back({"c" + std::to_string(next_id++), up.vertices[r], lo.vertices[s], {}});
            }
        }
    }
    return c;
}

inline pathcert::GraphSpec random_spec(std::mt19937_64& rng, const RandomOptions& o = {}) {
    pathcert::GraphSpec g;
    g.name = "RND";
    const int p = uniform(rng, 1, o.max_period);
    for (int i = 0; i < p; ++i) g.repeat.push_back(random_block(rng, "R" + std::to_string(i), o));
    for (int i = 0; i < p; ++i) g.cross.push_back(random_cross(rng, g.repeat[i], g.repeat[(i + 1) % p]));
    if (o.allow_base && coin(rng, 0.5)) {
        g.base.push_back(random_block(rng, "B0", o));
        g.cross.push_back(random_cross(rng, g.base[0], g.repeat[0]));
    }
    return g;
}

/// A graph file with the spine path z and the family that leaves the spine at
/// stage n through the first edge into "v" and then runs down ray t.
inline std::string random_document(const pathcert::GraphSpec& g) {
    std::string text = pathcert::render(g);
    text += "\npath z { prefix ; tail descent [spine] from stage 1; }\n";
    text += "family x { descend z to n; pivot ";
    for (std::size_t i = 0; i < g.repeat.size(); ++i) {
        const auto& b = g.repeat[i];
        text += (i ? ", " : "") + b.edges.front().id;
    }
    text += "; tail ray t at stage n; min 1; }\n";
    return text;
}

}  // namespace pathcert::random_graphs
