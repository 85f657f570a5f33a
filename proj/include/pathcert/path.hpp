#pragma once

#include "pathcert/graph.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace pathcert {

/// A finite path. Edges are listed from the range end: s(e_j) = r(e_{j+1}).
/// The anchor is the range of the path (and its only vertex when empty).
struct FinitePath {
    VertexRef anchor;
    std::vector<EdgeRef> edges;

    std::size_t size() const { return edges.size(); }
    bool empty() const { return edges.empty(); }
    VertexRef range() const { return anchor; }
    VertexRef source(const StagedGraph& g) const { return edges.empty() ? anchor : g.source(edges.back()); }
    auto operator<=>(const FinitePath&) const = default;
};

/// Checks composability; throws CompositionMismatch.
FinitePath make_finite_path(const StagedGraph& g, VertexRef anchor, std::vector<EdgeRef> edges);
/// Non-empty edge list, anchored at the first edge's range.
FinitePath make_finite_path(const StagedGraph& g, std::vector<EdgeRef> edges);

FinitePath concat(const StagedGraph& g, const FinitePath& alpha, const FinitePath& beta);

/// Continue down ray `ray` of `stage` from depth `entry_depth` forever.
struct RayTail {
    std::int64_t stage = 0;
    std::int32_t ray = 0;
    std::int64_t entry_depth = 0;
    auto operator<=>(const RayTail&) const = default;
};

/// Repeat `pattern` forever; instance i is the pattern moved down by i * shift
/// stages. `shift` is a positive multiple of the repeat period and the pattern
/// is primitive (not a power of a shorter pattern).
struct DescentTail {
    std::vector<EdgeRef> pattern;
    std::int64_t shift = 0;
    auto operator<=>(const DescentTail&) const = default;
};

using TailSpec = std::variant<RayTail, DescentTail>;

/// An infinite path: canonical shortest prefix followed by a tail.
class InfinitePath {
public:
    InfinitePath() = default;

    /// Validates composability and returns the canonical form.
    static InfinitePath make(const StagedGraph& g, FinitePath prefix, TailSpec tail);

    const FinitePath& prefix() const { return prefix_; }
    const TailSpec& tail() const { return tail_; }
    bool ray_tail() const { return std::holds_alternative<RayTail>(tail_); }
    bool descent_tail() const { return std::holds_alternative<DescentTail>(tail_); }

    /// x_i for i >= 1.
    EdgeRef edge(std::size_t i) const;
    /// First i edges.
    std::vector<EdgeRef> head(std::size_t i) const;
    VertexRef range() const { return prefix_.anchor; }
    /// Number of tail edges per tail period (1 for rays).
    std::size_t tail_period() const;

    auto operator<=>(const InfinitePath&) const = default;

private:
    FinitePath prefix_;
    TailSpec tail_;
};

InfinitePath concat_infinite(const StagedGraph& g, const FinitePath& alpha, const InfinitePath& x);
InfinitePath shift(const StagedGraph& g, const InfinitePath& x, std::size_t m);
/// r(x_{m+1}).
VertexRef vertex_at(const StagedGraph& g, const InfinitePath& x, std::size_t m);
bool in_cylinder(const InfinitePath& x, const FinitePath& alpha);

/// Some(k) iff x_i = y_{i+k} for all large i. Throws NotPrincipal when two
/// lags are found.
std::optional<std::int64_t> shift_lag(const StagedGraph& g, const InfinitePath& x, const InfinitePath& y);

/// The unique infinite path with range v through edge f. Throws NoPath,
/// NotUnique, or NotPrincipal.
InfinitePath unique_path(const StagedGraph& g, const VertexRef& v, const EdgeRef& f);

/// The unique edge with template id `id` and range `at` (within or cross).
/// Throws ResolutionError.
EdgeRef step_from(const StagedGraph& g, const VertexRef& at, std::string_view id);

/// Resolves a cyclic list of template ids walked from `start` into a primitive
/// descent. Throws ResolutionError when the walk never returns to the start
/// vertex class one or more periods lower.
DescentTail resolve_descent(const StagedGraph& g, const VertexRef& start, const std::vector<std::string>& ids);

std::string describe(const StagedGraph& g, const FinitePath& p);
std::string describe(const StagedGraph& g, const InfinitePath& x);

}  // namespace pathcert
