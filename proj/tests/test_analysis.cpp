#include "doctest.h"
#include "random_cases.hpp"

#include "pathcert/analysis.hpp"
#include "pathcert/errors.hpp"

using namespace pathcert;
using namespace testing_support;

namespace {

Extended fin(long v) { return Extended::finite(BigInt(v)); }

}  // namespace

TEST_CASE("LADDER2 has strength 2 on both sides") {
    const Document d = load("ladder2.graph");
    const AnalysisOptions opt;
    const Profile p = measure_profile(d.graph, d.family("x"), d.path("z"), opt);
    CHECK(p.proved());
    REQUIRE(p.rows.size() == 5);
    for (const ProfileRow& r : p.rows) {
        CAPTURE(r.m);
        CHECK(r.lambda_z == 1);
        CHECK(r.liminf == fin(2));
        CHECK(r.limsup == fin(2));
        CHECK(r.stabilization == Stabilization::ProvedPeriodic);
        for (std::int64_t n = 1; n <= 12; ++n) {
            CHECK(*r.counts[static_cast<std::size_t>(n - 1)] == fin(n > r.m ? 2 : 0));
        }
    }
    const StrengthVerdict lo = lower_from_profile(p);
    const StrengthVerdict up = upper_from_profile(d.graph, d.family("x"), p);
    CHECK(lo.k == fin(2));
    CHECK(up.k == fin(2));
    REQUIRE(up.subsequence);
    CHECK(up.subsequence->describe() == "all n");
    const MultiplicityReport mr = multiplicity_from_profile(d.graph, d.family("x"), p);
    CHECK(mr.ml.lo == fin(2));
    CHECK(mr.ml.hi == fin(2));
    CHECK(mr.mu.lo == fin(2));
    CHECK(mr.mu.hi == fin(2));
    CHECK(mr.consistent());
}

TEST_CASE("LADDERK strength equals the number of parallel edges") {
    for (int k = 2; k <= 5; ++k) {
        CAPTURE(k);
        const Document d = load("ladderk" + std::to_string(k) + ".graph");
        CHECK(lower_strength(d.graph, d.family("x"), d.path("z"), {}).k == fin(k));
        CHECK(upper_strength(d.graph, d.family("x"), d.path("z"), {}).k == fin(k));
    }
}

TEST_CASE("ALT23 splits into a subsequence") {
    const Document d = load("alt23.graph");
    const AnalysisOptions opt;
    const Profile p = measure_profile(d.graph, d.family("x"), d.path("z"), opt);
    CHECK(p.period == 2);
    CHECK(p.proved());
    const StrengthVerdict lo = lower_from_profile(p);
    const StrengthVerdict up = upper_from_profile(d.graph, d.family("x"), p);
    CHECK(lo.k == fin(2));
    CHECK(up.k == fin(3));
    REQUIRE(up.subsequence);
    CHECK(up.subsequence->describe() == "even n");
    REQUIRE(up.subsequence->family);
    // The subsequence family on its own has strength 3.
    const PathFamily& sub = *up.subsequence->family;
    CHECK(materialize(d.graph, sub, sub.n_min) == materialize(d.graph, d.family("x"), 2));
    CHECK(lower_strength(d.graph, sub, d.path("z"), opt).k == fin(3));
    const MultiplicityReport mr = multiplicity_from_profile(d.graph, d.family("x"), p);
    CHECK(mr.ml.lo == fin(2));
    CHECK(mr.ml.hi == fin(2));
    CHECK(mr.mu.lo == fin(3));
    CHECK(mr.mu.hi == fin(3));
}

TEST_CASE("FORK converges to both spines") {
    const Document d = load("fork.graph");
    const AnalysisOptions opt;
    const HausdorffReport h = hausdorff_probe(d.graph, d.family("seq"), {d.path("x"), d.path("y")}, opt);
    REQUIRE(h.per_limit.size() == 2);
    CHECK(h.per_limit[0].k == fin(2));
    CHECK(h.per_limit[1].k == fin(2));
    CHECK(h.non_hausdorff);
    for (const char* limit : {"x", "y"}) {
        CAPTURE(limit);
        const InfinitePath& z = d.path(limit);
        const auto ws = construct_witnesses(d.graph, d.family("seq"), z, 2, opt);
        REQUIRE(ws.size() == 2);
        const WitnessCheck c = verify_witnesses(d.graph, ws, d.family("seq"), z, opt);
        CHECK(c.passed());
        CHECK_THROWS_AS(construct_witnesses(d.graph, d.family("seq"), z, 3, opt), StrengthNotCertified);
    }
}

TEST_CASE("EXP2 has infinite multiplicity") {
    const Document d = load("exp2.graph");
    const InfiniteProbe pr = infinite_multiplicity_probe(d.graph, d.family("x"), d.path("z"), {});
    CHECK(pr.kind == InfiniteProbe::Kind::Infinite);
    CHECK(lower_strength(d.graph, d.family("x"), d.path("z"), {}).k.is_infinite());
}

TEST_CASE("LOOP1 is refused") {
    const Document d = parse_document(read_file(fixture_path("loop1.graph")) +
                                      "path z { prefix ; tail descent [down] from stage 1; }\n"
                                      "family x { descend z to n; pivot e; tail descent [down] from stage n; min 1; }\n");
    CHECK_THROWS_AS(measure_profile(d.graph, d.family("x"), d.path("z"), {}), NotPrincipal);
}

TEST_CASE("witness verification rejects broken families") {
    const Document d = load("ladder2.graph");
    const AnalysisOptions opt;
    const PathFamily& F = d.family("x");
    const InfinitePath& z = d.path("z");
    const auto ws = construct_witnesses(d.graph, F, z, 2, opt);
    REQUIRE(ws.size() == 2);
    CHECK(verify_witnesses(d.graph, ws, F, z, opt).passed());
    // The first witness is the unit at x^(n), the second swaps the pivot edge.
    CHECK(ws[0].shapes[0].rule.chain == std::vector<std::string>{"f1"});
    CHECK(ws[1].shapes[0].rule.chain == std::vector<std::string>{"f2"});
    CHECK(ws[0].start[0] == 6);
    CHECK(ws[0].at(d.graph, 7).x == materialize(d.graph, F, 7));
    CHECK(ws[0].at(d.graph, 7).y == materialize(d.graph, F, 7));

    SUBCASE("identical families do not diverge") {
        auto bad = ws;
        bad[1].shapes = bad[0].shapes;
        const WitnessCheck c = verify_witnesses(d.graph, bad, F, z, opt);
        CHECK(c.sources);
        CHECK(c.ranges);
        CHECK_FALSE(c.divergence);
    }
    SUBCASE("wrong lag") {
        auto bad = ws;
        bad[1].shapes[0].lag = 1;
        CHECK_FALSE(verify_witnesses(d.graph, bad, F, z, opt).sources);
    }
    SUBCASE("wrong source family") {
        auto bad = ws;
        bad[1].source.pivots[0].chain = {"f2"};
        CHECK_FALSE(verify_witnesses(d.graph, bad, F, z, opt).sources);
    }
    SUBCASE("ranges converging elsewhere") {
        const Document fork = load("fork.graph");
        const auto fx = construct_witnesses(fork.graph, fork.family("seq"), fork.path("x"), 2, opt);
        const WitnessCheck c = verify_witnesses(fork.graph, fx, fork.family("seq"), fork.path("y"), opt);
        CHECK_FALSE(c.ranges);
    }
    CHECK_THROWS_AS(construct_witnesses(d.graph, F, z, 3, opt), StrengthNotCertified);
}

TEST_CASE("divergent quotients meet each basic set at most once on LADDER2") {
    const Document d = load("ladder2.graph");
    const auto ws = construct_witnesses(d.graph, d.family("x"), d.path("z"), 2, {});
    const DivergenceReport r = divergence_check(d.graph, ws[0], ws[1], CompactExhaustion{6});
    CHECK(r.divergent);
    CHECK(r.slope == std::vector<std::int64_t>{1});
    CHECK(r.max_occupancy == 1);
    CHECK(r.sets_hit > 0);
}

TEST_CASE("empirical profiles refuse closed-form witnesses") {
    const Document d = load("ladder2.graph");
    AnalysisOptions opt;
    opt.budget = Budget{1, 1};
    const Profile p = measure_profile(d.graph, d.family("x"), d.path("z"), opt);
    if (!p.proved()) CHECK_THROWS_AS(construct_witnesses(d.graph, d.family("x"), d.path("z"), 1, opt), EmpiricalOnly);
}

TEST_CASE("property: proved class values match direct counts") {
    std::mt19937_64 rng(41);
    AnalysisOptions opt;
    opt.ladder = 3;
    int proved = 0;
    int growing = 0;
    for (const Scene& s : scenes(rng, 60)) {
        const Profile p = measure_profile(s.g, s.F, s.z, opt);
        for (const ProfileRow& row : p.rows) {
            const FinitePath W = ladder_cylinder(s.z, static_cast<std::size_t>(row.m));
            CHECK(orbit_count(s.g, s.z, W).count == row.lambda_z);
            for (const ClassLimit& c : row.classes) {
                auto at = [&](int j) {
                    const CountResult got = orbit_count(s.g, materialize(s.g, s.F, c.from + j * p.period), W);
                    return got.exact() ? Extended::finite(got.count) : Extended::infinity();
                };
                if (c.proof == ClassProof::Periodic) {
                    ++proved;
                    for (int j = 0; j < 6; ++j) CHECK(at(j) == c.value);
                } else if (c.proof == ClassProof::Growth) {
                    ++growing;
                    // Every certificate gives at least +1 per two periods.
                    const Extended first = at(0);
                    if (!first.is_infinite()) {
                        for (int j = 2; j <= 6; j += 2) CHECK(Extended::finite(*first.value + j / 2) <= at(j));
                    }
                }
            }
        }
    }
    CHECK(proved > 100);
    CHECK(growing > 10);
    MESSAGE("periodic classes: " << proved << ", growth classes: " << growing);
}

TEST_CASE("property: strength and multiplicity invariants") {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (const Scene& s : scenes(rng, 40)) {
        AnalysisOptions opt;
        opt.ladder = 4;
        const Profile p = measure_profile(s.g, s.F, s.z, opt);
        const StrengthVerdict lo = lower_from_profile(p);
        try {
            const StrengthVerdict up = upper_from_profile(s.g, s.F, p);
            CHECK(lo.k <= up.k);
            if (up.subsequence && up.subsequence->family && !up.k.is_infinite()) {
                // The subsequence reaches the upper strength from below.
                const StrengthVerdict sub = lower_strength(s.g, *up.subsequence->family, s.z, opt);
                CHECK(up.k <= sub.k);
            }
        } catch (const NoOrbitConvergence&) {
            CHECK(lo.k == Extended::finite(0));
        }
        const bool unit_lambda =
            std::all_of(p.rows.begin(), p.rows.end(), [](const ProfileRow& r) { return r.lambda_z == 1; });
        if (unit_lambda) CHECK(multiplicity_from_profile(s.g, s.F, p).consistent());
        // Shortening the ladder can only raise the lower strength.
        opt.ladder = 2;
        CHECK(lo.k <= lower_strength(s.g, s.F, s.z, opt).k);
        ++checked;
    }
    CHECK(checked == 45);
}

TEST_CASE("property: the three strength routes agree") {
    std::mt19937_64 rng(43);
    AnalysisOptions opt;
    opt.ladder = 3;
    int conclusive = 0;
    for (const Scene& s : scenes(rng, 25)) {
        const Profile p = measure_profile(s.g, s.F, s.z, opt);
        if (!p.proved()) continue;
        const Extended k0 = lower_from_profile(p).k;
        const std::size_t base = k0.is_infinite() ? 3 : static_cast<std::size_t>(*k0.value);
        for (std::size_t k : {base, base + 1}) {
            if (k == 0) continue;
            const AuditReport a = audit_from_profile(s.g, s.F, s.z, k, p, opt);
            CAPTURE(k);
            CAPTURE(a.evidence);
            CHECK(a.agreement());
            ++conclusive;
        }
    }
    CHECK(conclusive > 30);
}

TEST_CASE("a limit outside the family's orbit closure gives liminf 0") {
    const Document d = load("ladder2.graph");
    const InfinitePath x1 = materialize(d.graph, d.family("x"), 1);
    const Profile p = measure_profile(d.graph, d.family("x"), x1, {});
    CHECK(p.proved());
    for (const ProfileRow& r : p.rows) CHECK(r.liminf == fin(0));
    CHECK(lower_from_profile(p).k == fin(0));
    CHECK(upper_from_profile(d.graph, d.family("x"), p).k == fin(0));
    Subsequence s;
    s.modulus = 3;
    s.residues = {1};
    CHECK(s.describe() == "n ≡ 1 mod 3");
}

TEST_CASE("single-limit Hausdorff probe and the uniform bound probe") {
    const Document d = load("ladder2.graph");
    const HausdorffReport h = hausdorff_probe(d.graph, d.family("x"), {d.path("z")}, {});
    CHECK_FALSE(h.non_hausdorff);
    CHECK_FALSE(h.pair);

    const FinitePath W = ladder_cylinder(d.path("z"), 1);
    std::vector<InfinitePath> sample{d.path("z")};
    for (std::int64_t n = 2; n <= 9; ++n) sample.push_back(materialize(d.graph, d.family("x"), n));
    const UniformBoundReport u = uniform_bound_probe(d.graph, W, sample);
    CHECK(u.all_exact);
    REQUIRE(u.sup);
    CHECK(*u.sup == 2);
    CHECK(u.counts.size() == sample.size());

    const Document e = load("exp2.graph");
    std::vector<InfinitePath> spread;
    for (std::int64_t n = 2; n <= 9; ++n) spread.push_back(materialize(e.graph, e.family("x"), n));
    CHECK(*uniform_bound_probe(e.graph, ladder_cylinder(e.path("z"), 1), spread).sup == 510);
}
