#include "pathcert/groupoid.hpp"

#include "pathcert/errors.hpp"

#include <algorithm>
#include <set>

namespace pathcert {

GroupoidElement make_element(const StagedGraph& g, const InfinitePath& x, const InfinitePath& y) {
    auto k = shift_lag(g, x, y);
    if (!k) throw NotEquivalent("paths are not shift equivalent: " + describe(g, x) + " | " + describe(g, y));
    return GroupoidElement{x, *k, y};
}

GroupoidElement unit(const InfinitePath& x) { return GroupoidElement{x, 0, x}; }

GroupoidElement compose(const GroupoidElement& a, const GroupoidElement& b) {
    if (a.y != b.x) throw NotComposable("source of the left factor differs from range of the right factor");
    return GroupoidElement{a.x, a.k + b.k, b.y};
}

GroupoidElement invert(const GroupoidElement& a) { return GroupoidElement{a.y, -a.k, a.x}; }

BasicSet make_basic_set(const StagedGraph& g, FinitePath alpha, FinitePath beta) {
    if (alpha.source(g) != beta.source(g)) throw CompositionMismatch("basic set needs s(alpha) = s(beta)");
    return BasicSet{std::move(alpha), std::move(beta)};
}

CompactSet CompactSet::of(std::vector<BasicSet> parts) {
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    return CompactSet{std::move(parts)};
}

bool basic_contains(const StagedGraph& g, const BasicSet& B, const GroupoidElement& gamma) {
    if (gamma.k != B.lag()) return false;
    if (!in_cylinder(gamma.x, B.alpha) || !in_cylinder(gamma.y, B.beta)) return false;
    return shift(g, gamma.x, B.alpha.size()) == shift(g, gamma.y, B.beta.size());
}

std::optional<GroupoidElement> element_at_source(const StagedGraph& g, const BasicSet& B, const InfinitePath& x) {
    if (!in_cylinder(x, B.beta)) return std::nullopt;
    InfinitePath r = concat_infinite(g, B.alpha, shift(g, x, B.beta.size()));
    return GroupoidElement{std::move(r), B.lag(), x};
}

std::vector<GroupoidElement> elements_at_source(const StagedGraph& g, const InfinitePath& x, const CompactSet& K) {
    std::set<GroupoidElement> seen;
    for (const auto& B : K.parts) {
        if (auto e = element_at_source(g, B, x)) seen.insert(std::move(*e));
    }
    return {seen.begin(), seen.end()};
}

std::size_t count_at_source(const StagedGraph& g, const InfinitePath& x, const CompactSet& K) {
    return elements_at_source(g, x, K).size();
}

CompactSet invert_set(const CompactSet& K) {
    std::vector<BasicSet> parts;
    for (const auto& B : K.parts) parts.push_back(BasicSet{B.beta, B.alpha});
    return CompactSet::of(std::move(parts));
}

std::vector<GroupoidElement> translate_set(const StagedGraph& g, const CompactSet& K, const GroupoidElement& gamma) {
    std::set<GroupoidElement> out;
    for (const auto& delta : elements_at_source(g, gamma.x, K)) out.insert(compose(delta, gamma));
    return {out.begin(), out.end()};
}

}  // namespace pathcert
