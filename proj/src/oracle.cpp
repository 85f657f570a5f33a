#include "pathcert/oracle.hpp"

#include "pathcert/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace pathcert {

namespace {

std::size_t reach_of(const InfinitePath& x, std::size_t L) { return 2 * L + x.prefix().size(); }

std::map<EdgeRef, std::size_t> truncation_index(const FiniteGraphSlice& slice, const InfinitePath& x, std::size_t len) {
    std::map<EdgeRef, std::size_t> idx;
    for (std::size_t i = 1; i <= len; ++i) {
        const EdgeRef e = x.edge(i);
        if (!slice.contains(e)) throw SliceTooSmall("path leaves the slice at edge " + std::to_string(i));
        idx.emplace(e, i);
    }
    return idx;
}

bool on_boundary(const FiniteGraphSlice& slice, const VertexRef& v) {
    return v.stage >= slice.max_stage || (!v.is_block() && v.depth >= slice.max_depth);
}

// Visits every length-L path in Z(alpha) within the slice.
void enumerate(const FiniteGraphSlice& slice, const FinitePath& alpha, std::size_t L,
               const std::function<void(const std::vector<EdgeRef>&)>& visit) {
    if (alpha.size() > L) throw SliceTooSmall("truncation shorter than the cylinder");
    for (const EdgeRef& e : alpha.edges) {
        if (!slice.contains(e)) throw SliceTooSmall("cylinder leaves the slice");
    }
    std::vector<EdgeRef> path = alpha.edges;
    VertexRef start = alpha.edges.empty() ? alpha.anchor : slice.source_of.at(alpha.edges.back());
    std::function<void(const VertexRef&)> walk = [&](const VertexRef& v) {
        if (path.size() == L) {
            visit(path);
            return;
        }
        if (on_boundary(slice, v)) throw SliceTooSmall("enumeration reached the slice boundary");
        auto it = slice.incoming.find(v);
        if (it == slice.incoming.end()) return;
        for (const EdgeRef& e : it->second) {
            path.push_back(e);
            walk(slice.source_of.at(e));
            path.pop_back();
        }
    };
    walk(start);
}

}  // namespace

FiniteGraphSlice oracle_slice(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha, std::size_t L) {
    std::int64_t max_stage = alpha.source(g).stage + static_cast<std::int64_t>(L);
    std::int64_t max_depth = static_cast<std::int64_t>(L);
    const VertexRef sa = alpha.source(g);
    if (!sa.is_block()) max_depth = sa.depth + static_cast<std::int64_t>(L);
    for (std::size_t i = 1; i <= reach_of(x, L); ++i) {
        const VertexRef s = g.source(x.edge(i));
        max_stage = std::max(max_stage, s.stage);
        max_depth = std::max(max_depth, s.depth);
    }
    return realize_slice(g, max_stage - g.first_stage() + 2, max_depth + 1);
}

std::size_t brute_orbit_count(const FiniteGraphSlice& slice, const InfinitePath& x, const FinitePath& alpha,
                              std::size_t L) {
    const auto idx = truncation_index(slice, x, reach_of(x, L));
    std::size_t count = 0;
    enumerate(slice, alpha, L, [&](const std::vector<EdgeRef>& p) { count += idx.count(p.back()); });
    return count;
}

std::optional<std::int64_t> brute_shift_lag(const FiniteGraphSlice& slice, const InfinitePath& x,
                                            const InfinitePath& y, std::size_t L) {
    truncation_index(slice, x, L);
    truncation_index(slice, y, L);
    const auto half = static_cast<std::int64_t>((L + 1) / 2);
    const auto len = static_cast<std::int64_t>(L);
    for (std::int64_t k = 0; k <= half; ++k) {
        for (std::int64_t cand : {k, -k}) {
            if (k == 0 && cand != 0) continue;
            std::int64_t compared = 0;
            bool same = true;
            for (std::int64_t i = half; i <= len && same; ++i) {
                const std::int64_t j = i + cand;
                if (j < 1 || j > len) continue;
                same = x.edge(static_cast<std::size_t>(i)) == y.edge(static_cast<std::size_t>(j));
                ++compared;
            }
            if (same && compared >= len / 4) return cand;
        }
    }
    return std::nullopt;
}

std::vector<GroupoidElement> brute_element_enum(const StagedGraph& g, const FiniteGraphSlice& slice,
                                                const InfinitePath& source, const FinitePath& W, std::size_t L) {
    const auto idx = truncation_index(slice, source, reach_of(source, L));
    std::vector<GroupoidElement> out;
    enumerate(slice, W, L, [&](const std::vector<EdgeRef>& p) {
        auto it = idx.find(p.back());
        if (it == idx.end()) return;
        FinitePath q{W.anchor, p};
        InfinitePath y = concat_infinite(g, q, shift(g, source, it->second));
        out.push_back(GroupoidElement{std::move(y), static_cast<std::int64_t>(it->second) - static_cast<std::int64_t>(L),
                                      source});
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pathcert
