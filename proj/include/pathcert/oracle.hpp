#pragma once

#include "pathcert/groupoid.hpp"

#include <optional>
#include <vector>

namespace pathcert {

/// Brute-force references on finite truncations. Exponential in L by design;
/// used to cross-check the symbolic engines.

/// A slice large enough for the truncations used by the functions below.
FiniteGraphSlice oracle_slice(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha, std::size_t L);

/// Number of length-L paths in Z(alpha) whose last edge lies on x (x read to
/// 2L + |prefix| edges). Each such truncation extends along x to a distinct
/// member of [x] cap Z(alpha). Throws SliceTooSmall.
std::size_t brute_orbit_count(const FiniteGraphSlice& slice, const InfinitePath& x, const FinitePath& alpha,
                              std::size_t L);

/// Lag k with x_i = y_{i+k} on the window i in [ceil(L/2), L]; refutation is
/// only complete up to L. Throws SliceTooSmall.
std::optional<std::int64_t> brute_shift_lag(const FiniteGraphSlice& slice, const InfinitePath& x,
                                            const InfinitePath& y, std::size_t L);

/// The elements (y, k, source) behind brute_orbit_count, sorted.
std::vector<GroupoidElement> brute_element_enum(const StagedGraph& g, const FiniteGraphSlice& slice,
                                                const InfinitePath& source, const FinitePath& W, std::size_t L);

}  // namespace pathcert
