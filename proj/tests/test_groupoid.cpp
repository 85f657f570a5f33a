#include "doctest.h"
#include "random_cases.hpp"

#include "pathcert/errors.hpp"

using namespace pathcert;
using namespace testing_support;

TEST_CASE("elements and composition") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    const InfinitePath x4 = materialize(g, d.family("x"), 4);
    const InfinitePath other = unique_path(g, g.resolve_vertex("v", 1), g.resolve_edge("f2", 4));

    CHECK(make_element(g, x4, x4) == unit(x4));
    const GroupoidElement gamma = make_element(g, other, x4);
    CHECK(gamma.k == 0);
    CHECK_THROWS_AS(make_element(g, d.path("z"), x4), NotEquivalent);

    CHECK(compose(gamma, unit(x4)) == gamma);
    CHECK(compose(unit(other), gamma) == gamma);
    CHECK(compose(gamma, invert(gamma)) == unit(other));
    CHECK(invert(invert(gamma)) == gamma);
    CHECK(invert(unit(x4)) == unit(x4));
    CHECK(invert(gamma).x == x4);
    CHECK_THROWS_AS(compose(gamma, gamma), NotComposable);
}

TEST_CASE("basic sets") {
    const Document d = load("ladder2.graph");
    const StagedGraph& g = d.graph;
    const InfinitePath& z = d.path("z");
    for (std::int64_t n = 2; n <= 6; ++n) {
        const InfinitePath xn = materialize(g, d.family("x"), n);
        const InfinitePath other = unique_path(g, g.resolve_vertex("v", 1), g.resolve_edge("f2", n));
        const GroupoidElement gamma2 = make_element(g, other, xn);
        const FinitePath own = prefix_cylinder(xn, static_cast<std::size_t>(n));
        // Same alpha and beta would force f2 = f1 at stage n.
        CHECK_FALSE(basic_contains(g, BasicSet{own, own}, gamma2));
        CHECK(basic_contains(g, BasicSet{prefix_cylinder(other, n), own}, gamma2));
        CHECK_FALSE(basic_contains(g, BasicSet{prefix_cylinder(other, n), prefix_cylinder(xn, n - 1)}, gamma2));
        CHECK(basic_contains(g, BasicSet{own, own}, unit(xn)));

        for (std::size_t m = 1; m < static_cast<std::size_t>(n); ++m) {
            const CompactSet K = CompactSet::of({BasicSet{prefix_cylinder(z, m), prefix_cylinder(xn, m)}});
            CHECK(count_at_source(g, xn, K) == 1);
        }
    }
    const InfinitePath x5 = materialize(g, d.family("x"), 5);
    const BasicSet B{prefix_cylinder(x5, 2), prefix_cylinder(x5, 2)};
    CHECK(count_at_source(g, x5, CompactSet::of({B})) == 1);
    CHECK(count_at_source(g, x5, CompactSet::of({B, BasicSet{prefix_cylinder(x5, 3), prefix_cylinder(x5, 3)}})) == 1);
    CHECK(count_at_source(g, d.path("x1"), CompactSet::of({B})) == 0);
    CHECK_THROWS_AS(make_basic_set(g, prefix_cylinder(x5, 2), prefix_cylinder(x5, 3)), CompositionMismatch);
}

TEST_CASE("property: groupoid laws") {
    std::mt19937_64 rng(21);
    for (const Scene& s : scenes(rng, 10)) {
        for (int trial = 0; trial < 40; ++trial) {
            const GroupoidElement a = random_element(rng, s);
            CHECK(shift_lag(s.g, a.x, a.y) == a.k);
            CHECK(compose(a, invert(a)) == unit(a.x));
            CHECK(compose(invert(a), a) == unit(a.y));
            CHECK(compose(unit(a.x), a) == a);
            CHECK(compose(a, unit(a.y)) == a);
            // Build b, c composable with a: sources in the orbit of a.y.
            const BasicSet Bb = random_basic_set_over(rng, s.g, a.y);
            const GroupoidElement b0 = *element_at_source(s.g, Bb, a.y);
            const GroupoidElement b = invert(b0);  // range a.y
            const BasicSet Bc = random_basic_set_over(rng, s.g, b.y);
            const GroupoidElement c = invert(*element_at_source(s.g, Bc, b.y));
            CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        }
    }
}

TEST_CASE("property: basic sets are bisections") {
    std::mt19937_64 rng(22);
    for (const Scene& s : scenes(rng, 10)) {
        for (int trial = 0; trial < 60; ++trial) {
            const BasicSet B = random_compact(rng, s.g, s.pool).parts.front();
            for (const InfinitePath& x : s.pool) {
                const std::size_t c = count_at_source(s.g, x, CompactSet::of({B}));
                CHECK(c <= 1);
                CHECK((c == 1) == in_cylinder(x, B.beta));
                if (auto e = element_at_source(s.g, B, x)) CHECK(basic_contains(s.g, B, *e));
            }
            CHECK(invert_set(invert_set(CompactSet::of({B}))) == CompactSet::of({B}));
        }
    }
}

TEST_CASE("property: Haar invariance and semicontinuity (sample)") {
    std::mt19937_64 rng(23);
    for (const Scene& s : scenes(rng, 10)) {
        for (int trial = 0; trial < 20; ++trial) {
            const GroupoidElement gamma = random_element(rng, s);
            std::vector<InfinitePath> anchors = s.pool;
            anchors.push_back(gamma.x);
            const CompactSet K = random_compact(rng, s.g, anchors);
            const auto moved = translate_set(s.g, K, gamma);
            CHECK(moved.size() == count_at_source(s.g, gamma.x, K));
            for (const GroupoidElement& e : moved) {
                CHECK(e.y == gamma.y);
                const GroupoidElement back = compose(e, invert(gamma));
                bool in_k = false;
                for (const BasicSet& B : K.parts) in_k = in_k || basic_contains(s.g, B, back);
                CHECK(in_k);
            }
        }
    }
}
