#pragma once

#include "pathcert/bigint.hpp"
#include "pathcert/family.hpp"
#include "pathcert/groupoid.hpp"
#include "pathcert/orbit.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pathcert {

struct Window {
    std::int64_t lo = 1;
    std::int64_t hi = 12;
};

struct AnalysisOptions {
    std::int64_t ladder = 5;  // M: cylinders W_1 .. W_M of the limit
    Window window;
    Budget budget;
};

/// W_m = Z(z_1 ... z_m).
FinitePath ladder_cylinder(const InfinitePath& z, std::size_t m);

// ---------------------------------------------------------------------------
// Measure profile
// ---------------------------------------------------------------------------

/// How the eventual behaviour of c_n(W_m) on one residue class was settled.
enum class ClassProof {
    Periodic,   // reach vectors repeat one n-period apart: c_n constant from `from` on
    Growth,     // reach vectors grow monotonically with growing increments: c_n -> inf
    Empirical,  // neither; only window values are available
};

struct ClassLimit {
    std::int64_t residue = 0;  // n mod period
    std::int64_t from = 0;     // first n of the class covered by the proof
    Extended value;            // eventual value (inf for Growth)
    ClassProof proof = ClassProof::Empirical;
    std::string note;
};

enum class Stabilization { ProvedPeriodic, ProvedGrowth, EmpiricalWindow };
const char* stabilization_name(Stabilization s);

struct ProfileRow {
    std::int64_t m = 0;
    BigInt lambda_z;
    std::vector<std::optional<Extended>> counts;  // one per window index; empty below the family minimum
    Extended liminf;
    Extended limsup;
    Stabilization stabilization = Stabilization::EmpiricalWindow;
    std::vector<ClassLimit> classes;

    bool proved() const { return stabilization != Stabilization::EmpiricalWindow; }
};

struct Profile {
    std::int64_t period = 1;  // n-period of the family
    Window window;
    std::vector<ProfileRow> rows;

    bool proved() const;
};

/// c_n(W_m) = #([x^(n)] cap W_m) against lambda_z(G^{W_m}) for m = 1..M.
/// Throws NotPrincipal, DenominatorNotExact, NonExactCount.
Profile measure_profile(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, const AnalysisOptions& opt);

// ---------------------------------------------------------------------------
// Strength and multiplicity
// ---------------------------------------------------------------------------

/// A subsequence made of residue classes n = r (mod modulus).
struct Subsequence {
    std::int64_t modulus = 1;
    std::vector<std::int64_t> residues;
    /// The subsequence as its own family (first listed residue).
    std::optional<PathFamily> family;

    bool all() const { return static_cast<std::int64_t>(residues.size()) == modulus; }
    std::string describe() const;
};

struct StrengthVerdict {
    Extended k;
    bool certified = false;             // every row proved
    std::vector<Extended> k_by_depth;   // largest k passing the test at each m
    std::string route;
    std::optional<Subsequence> subsequence;  // upper strength only
};

/// Largest k with liminf_n c_n(W_m) > (k-1) lambda_z(W_m) for all m <= M.
StrengthVerdict lower_from_profile(const Profile& p);
/// Same with limsup, plus the residue classes realizing it. Throws
/// NoOrbitConvergence when the limsup test passes for k = 1 but the liminf
/// test does not.
StrengthVerdict upper_from_profile(const StagedGraph& g, const PathFamily& F, const Profile& p);

StrengthVerdict lower_strength(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                               const AnalysisOptions& opt);
StrengthVerdict upper_strength(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                               const AnalysisOptions& opt);

struct Bound {
    Extended lo;
    Extended hi;
    bool pinched() const { return lo == hi; }
};

struct MultiplicityReport {
    Bound ml;
    Bound mu;
    bool certified = false;
    std::vector<std::string> evidence;  // one line per bound, citing the theorem item

    /// The ordering invariants between the four bounds.
    bool consistent() const;
};

MultiplicityReport multiplicity_from_profile(const StagedGraph& g, const PathFamily& F, const Profile& p);
MultiplicityReport multiplicity_bounds(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                       const AnalysisOptions& opt);

struct InfiniteProbe {
    enum class Kind { Infinite, Finite, Unknown };
    Kind kind = Kind::Unknown;
    Extended bound;  // Finite: upper bound on M_L
    std::string evidence;
};

InfiniteProbe infinite_from_profile(const Profile& p);
InfiniteProbe infinite_multiplicity_probe(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                          const AnalysisOptions& opt);

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// gamma_n = (y^(n), lag, x^(n)) where y^(n) follows the limit down to stage
/// target(n) - rule.back, then rule.chain, then rule.tail.
struct WitnessShape {
    PivotRule rule;
    std::int64_t lag = 0;
    bool operator==(const WitnessShape&) const = default;
};

/// One witness sequence, given per residue class of n modulo `modulus`.
struct WitnessFamily {
    std::size_t index = 0;
    PathFamily source;
    InfinitePath limit;
    std::int64_t modulus = 1;
    std::vector<std::int64_t> start;   // first n covered, per residue
    std::vector<WitnessShape> shapes;  // per residue

    std::int64_t residue(std::int64_t n) const { return ((n % modulus) + modulus) % modulus; }
    /// The ranges y^(n), n = modulus * n' + r, as a family indexed by n'.
    PathFamily range_family(std::int64_t r) const;
    /// gamma_n; throws IndexBelowMin before the class start.
    GroupoidElement at(const StagedGraph& g, std::int64_t n) const;
};

/// Picks, per residue class, the first k orbit members of x^(n) inside W_M in
/// the order (pivot distance back from target(n), chain ids). Does not check
/// that k is certified. Throws NonUniformFamily when the picks do not settle
/// into one shape per class.
std::vector<WitnessFamily> greedy_witnesses(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                            std::size_t k, const Profile& p, const AnalysisOptions& opt);

/// Throws StrengthNotCertified when k exceeds the lower strength and
/// EmpiricalOnly when the profile is not proved.
std::vector<WitnessFamily> construct_witnesses(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                               std::size_t k, const AnalysisOptions& opt);

/// K_m: all Z(alpha, beta) with |alpha|, |beta| <= depth whose edges lie in
/// stages and ray depths <= depth.
struct CompactExhaustion {
    std::int64_t depth = 4;
    bool admits(const BasicSet& B) const;
};

struct DivergenceReport {
    bool divergent = false;
    /// Per residue: growth of the last disagreement index per period step, and the lag.
    std::vector<std::int64_t> slope;
    std::vector<std::int64_t> lag;
    std::size_t sets_hit = 0;       // basic sets of E met by some quotient
    std::size_t max_occupancy = 0;  // most quotients in one basic set (divergent case)
    std::string note;
};

/// Whether gamma^(j)_n (gamma^(i)_n)^{-1} leaves every compact set. Throws
/// NonUniformFamily when the quotients do not move affinely in n.
DivergenceReport divergence_check(const StagedGraph& g, const WitnessFamily& wi, const WitnessFamily& wj,
                                  const CompactExhaustion& E);

struct WitnessCheck {
    bool sources = true;     // (i)
    bool ranges = true;      // (ii)
    bool divergence = true;  // (iii)
    std::vector<std::string> evidence;
    bool passed() const { return sources && ranges && divergence; }
};

WitnessCheck verify_witnesses(const StagedGraph& g, const std::vector<WitnessFamily>& ws, const PathFamily& F,
                              const InfinitePath& z, const AnalysisOptions& opt);

// ---------------------------------------------------------------------------
// Probes and audit
// ---------------------------------------------------------------------------

struct HausdorffReport {
    std::vector<StrengthVerdict> per_limit;
    bool non_hausdorff = false;
    std::optional<std::pair<std::size_t, std::size_t>> pair;  // indices of two inequivalent certified limits
};

HausdorffReport hausdorff_probe(const StagedGraph& g, const PathFamily& F, const std::vector<InfinitePath>& limits,
                                const AnalysisOptions& opt);

struct UniformBoundReport {
    std::optional<BigInt> sup;  // over the Exact counts; empty for an empty sample
    bool all_exact = true;
    std::vector<CountResult> counts;
};

/// Sampling probe for sup_{x in V} lambda_x(G^V); a semi-decision only.
UniformBoundReport uniform_bound_probe(const StagedGraph& g, const FinitePath& Z, const std::vector<InfinitePath>& sample,
                                       Budget budget = {});

struct AuditReport {
    std::size_t k = 0;
    bool liminf_route = false;   // item (5)
    bool ratio_route = false;    // item (3) on the ladder
    bool witness_route = false;  // item (1) through constructed witnesses
    bool conclusive = false;     // profile proved
    std::vector<std::string> evidence;

    bool agreement() const { return liminf_route == ratio_route && ratio_route == witness_route; }
};

AuditReport consistency_audit(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, std::size_t k,
                              const AnalysisOptions& opt);
AuditReport audit_from_profile(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, std::size_t k,
                               const Profile& p, const AnalysisOptions& opt);

}  // namespace pathcert
