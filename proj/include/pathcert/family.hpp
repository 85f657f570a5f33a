#pragma once

#include "pathcert/path.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pathcert {

/// How a family member continues after its pivot chain.
struct TailTemplate {
    enum class Kind { Ray, Descent };
    Kind kind = Kind::Ray;
    std::string ray;                   // Kind::Ray: ray id attached at the chain end
    std::vector<std::string> pattern;  // Kind::Descent: cyclic template ids
    /// When set, the chain must end at stage target(n) + stage_offset.
    std::optional<std::int64_t> stage_offset;
    bool operator==(const TailTemplate&) const = default;
};

/// Deviation taken by x^(n): follow the family descent until it first reaches
/// stage target(n) - back, then walk `chain` (template ids), then the tail.
struct PivotRule {
    std::int64_t back = 0;
    std::vector<std::string> chain;
    TailTemplate tail;
    bool operator==(const PivotRule&) const = default;
};

/// A sequence {x^(n)} given uniformly in n. target(n) = stride * n + offset;
/// the rule used for x^(n) is pivots[(target(n) - 1) mod |pivots|], so a
/// pivot list written in repeat-block order picks the block of stage target(n).
struct PathFamily {
    std::string name;
    InfinitePath descent;
    std::int64_t stride = 1;
    std::int64_t offset = 0;
    std::vector<PivotRule> pivots;
    std::int64_t n_min = 1;

    std::int64_t target(std::int64_t n) const { return stride * n + offset; }
    const PivotRule& rule(std::int64_t n) const;
    /// Period in n after which the family repeats up to a stage shift.
    std::int64_t n_period(const StagedGraph& g) const;
};

/// x^(n). Throws IndexBelowMin for n < n_min and ResolutionError when the
/// templates do not resolve at that stage.
InfinitePath materialize(const StagedGraph& g, const PathFamily& F, std::int64_t n);

/// Index of x^(n)'s first edge after the descent (= number of descent edges used).
std::size_t arrival_index(const StagedGraph& g, const PathFamily& F, std::int64_t n);

struct ConvergenceTable {
    bool converges = false;
    /// first_agreement[m-1] = N(m): x^(n) in Z(z_1..z_m) for all n >= N(m).
    std::vector<std::int64_t> first_agreement;
};

/// Pointwise convergence x^(n) -> z in the cylinder topology, decided
/// structurally (the family descent must equal z).
ConvergenceTable family_converges_pointwise(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                            std::size_t depth);

}  // namespace pathcert
