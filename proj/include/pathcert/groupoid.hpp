#pragma once

#include "pathcert/path.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace pathcert {

/// (x, k, y) with x ~_k y. x is the range, y the source.
struct GroupoidElement {
    InfinitePath x;
    std::int64_t k = 0;
    InfinitePath y;
    auto operator<=>(const GroupoidElement&) const = default;
};

/// Throws NotEquivalent when x and y are not shift equivalent.
GroupoidElement make_element(const StagedGraph& g, const InfinitePath& x, const InfinitePath& y);
GroupoidElement unit(const InfinitePath& x);
/// (x, k, y)(y, l, w) = (x, k + l, w). Throws NotComposable.
GroupoidElement compose(const GroupoidElement& a, const GroupoidElement& b);
GroupoidElement invert(const GroupoidElement& a);

/// Z(alpha, beta) with s(alpha) = s(beta).
struct BasicSet {
    FinitePath alpha;
    FinitePath beta;
    std::int64_t lag() const {
        return static_cast<std::int64_t>(beta.size()) - static_cast<std::int64_t>(alpha.size());
    }
    auto operator<=>(const BasicSet&) const = default;
};

/// Throws CompositionMismatch when the sources differ.
BasicSet make_basic_set(const StagedGraph& g, FinitePath alpha, FinitePath beta);

/// Finite union of basic sets, kept sorted and free of duplicates.
struct CompactSet {
    std::vector<BasicSet> parts;
    static CompactSet of(std::vector<BasicSet> parts);
    bool operator==(const CompactSet&) const = default;
};

bool basic_contains(const StagedGraph& g, const BasicSet& B, const GroupoidElement& gamma);

/// The unique element of Z(alpha, beta) with source x, if any.
std::optional<GroupoidElement> element_at_source(const StagedGraph& g, const BasicSet& B, const InfinitePath& x);

/// Distinct elements of K with source x.
std::vector<GroupoidElement> elements_at_source(const StagedGraph& g, const InfinitePath& x, const CompactSet& K);

/// lambda_x(K) for the counting-measure Haar system.
std::size_t count_at_source(const StagedGraph& g, const InfinitePath& x, const CompactSet& K);

CompactSet invert_set(const CompactSet& K);

/// {delta * gamma : delta in K, s(delta) = r(gamma)}: the elements of K gamma.
std::vector<GroupoidElement> translate_set(const StagedGraph& g, const CompactSet& K, const GroupoidElement& gamma);

}  // namespace pathcert
