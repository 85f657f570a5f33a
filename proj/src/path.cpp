#include "pathcert/path.hpp"

#include "pathcert/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace pathcert {

FinitePath make_finite_path(const StagedGraph& g, VertexRef anchor, std::vector<EdgeRef> edges) {
    if (!g.contains(anchor)) throw CompositionMismatch("path anchor is not a vertex of the graph");
    VertexRef at = anchor;
    for (const EdgeRef& e : edges) {
        if (!g.contains(e)) throw CompositionMismatch("path edge is not an edge of the graph");
        if (g.range(e) != at) {
            throw CompositionMismatch("edge " + g.label(e) + " does not start at " + g.label(at));
        }
        at = g.source(e);
    }
    return FinitePath{anchor, std::move(edges)};
}

FinitePath make_finite_path(const StagedGraph& g, std::vector<EdgeRef> edges) {
    if (edges.empty()) throw CompositionMismatch("empty edge list needs an explicit anchor");
    if (!g.contains(edges.front())) throw CompositionMismatch("path edge is not an edge of the graph");
    VertexRef anchor = g.range(edges.front());
    return make_finite_path(g, anchor, std::move(edges));
}

FinitePath concat(const StagedGraph& g, const FinitePath& alpha, const FinitePath& beta) {
    if (alpha.source(g) != beta.anchor) {
        throw CompositionMismatch("cannot concatenate: " + g.label(alpha.source(g)) + " vs " + g.label(beta.anchor));
    }
    FinitePath out = alpha;
    out.edges.insert(out.edges.end(), beta.edges.begin(), beta.edges.end());
    return out;
}

namespace {

EdgeRef tail_edge(const TailSpec& t, std::size_t j) {
    if (const auto* r = std::get_if<RayTail>(&t)) {
        return EdgeRef::ray(r->stage, r->ray, r->entry_depth + 1 + static_cast<std::int64_t>(j));
    }
    const auto& d = std::get<DescentTail>(t);
    const std::size_t l = d.pattern.size();
    return d.pattern[j % l].shifted(static_cast<std::int64_t>(j / l) * d.shift);
}

VertexRef tail_range(const StagedGraph& g, const TailSpec& t) { return g.range(tail_edge(t, 0)); }

void check_tail(const StagedGraph& g, const TailSpec& t) {
    if (const auto* r = std::get_if<RayTail>(&t)) {
        if (r->stage < g.first_stage() || r->entry_depth < 0 ||
            !g.contains(EdgeRef::ray(r->stage, r->ray, r->entry_depth + 1))) {
            throw CompositionMismatch("ray tail does not resolve");
        }
        return;
    }
    const auto& d = std::get<DescentTail>(t);
    if (d.pattern.empty()) throw CompositionMismatch("descent pattern is empty");
    if (d.shift <= 0 || d.shift % g.period() != 0) {
        throw CompositionMismatch("descent must move down a positive multiple of the period");
    }
    if (d.pattern.front().stage < 1) throw CompositionMismatch("descent must start in the repeating stages");
    for (const EdgeRef& e : d.pattern) {
        if (e.kind == EdgeKind::Ray || !g.contains(e)) throw CompositionMismatch("descent pattern edge is invalid");
    }
    for (std::size_t i = 0; i < d.pattern.size(); ++i) {
        EdgeRef next = i + 1 < d.pattern.size() ? d.pattern[i + 1] : d.pattern.front().shifted(d.shift);
        if (g.source(d.pattern[i]) != g.range(next)) throw CompositionMismatch("descent pattern is not composable");
    }
}

// Shortest period of the pattern compatible with the repeat period.
DescentTail primitive(const StagedGraph& g, DescentTail d) {
    const std::size_t l = d.pattern.size();
    for (std::size_t q = 1; q < l; ++q) {
        if (l % q != 0) continue;
        std::int64_t step = d.pattern[q].stage - d.pattern[0].stage;
        if (step <= 0 || step % g.period() != 0 || step * static_cast<std::int64_t>(l / q) != d.shift) continue;
        bool ok = true;
        for (std::size_t i = q; i < l && ok; ++i) {
            ok = d.pattern[i] == d.pattern[i % q].shifted(static_cast<std::int64_t>(i / q) * step);
        }
        if (ok) {
            d.pattern.resize(q);
            d.shift = step;
            return d;
        }
    }
    return d;
}

}  // namespace

InfinitePath InfinitePath::make(const StagedGraph& g, FinitePath prefix, TailSpec tail) {
    check_tail(g, tail);
    make_finite_path(g, prefix.anchor, prefix.edges);  // composability
    if (prefix.source(g) != tail_range(g, tail)) {
        throw CompositionMismatch("prefix ends at " + g.label(prefix.source(g)) + " but tail starts at " +
                                  g.label(tail_range(g, tail)));
    }
    if (auto* r = std::get_if<RayTail>(&tail)) {
        while (!prefix.edges.empty() && r->entry_depth >= 1 &&
               prefix.edges.back() == EdgeRef::ray(r->stage, r->ray, r->entry_depth)) {
            prefix.edges.pop_back();
            --r->entry_depth;
        }
    } else {
        auto& d = std::get<DescentTail>(tail);
        d = primitive(g, std::move(d));
        while (!prefix.edges.empty()) {
            EdgeRef back = d.pattern.back().shifted(-d.shift);
            if (back.stage < 1 || prefix.edges.back() != back) break;
            prefix.edges.pop_back();
            d.pattern.pop_back();
            d.pattern.insert(d.pattern.begin(), back);
        }
    }
    InfinitePath x;
    x.prefix_ = std::move(prefix);
    x.tail_ = std::move(tail);
    return x;
}

EdgeRef InfinitePath::edge(std::size_t i) const {
    if (i <= prefix_.edges.size()) return prefix_.edges[i - 1];
    return tail_edge(tail_, i - prefix_.edges.size() - 1);
}

std::vector<EdgeRef> InfinitePath::head(std::size_t i) const {
    std::vector<EdgeRef> out;
    out.reserve(i);
    for (std::size_t k = 1; k <= i; ++k) out.push_back(edge(k));
    return out;
}

std::size_t InfinitePath::tail_period() const {
    if (const auto* d = std::get_if<DescentTail>(&tail_)) return d->pattern.size();
    return 1;
}

InfinitePath concat_infinite(const StagedGraph& g, const FinitePath& alpha, const InfinitePath& x) {
    if (alpha.source(g) != x.range()) {
        throw CompositionMismatch("cannot prepend: " + g.label(alpha.source(g)) + " vs " + g.label(x.range()));
    }
    FinitePath p = alpha;
    p.edges.insert(p.edges.end(), x.prefix().edges.begin(), x.prefix().edges.end());
    return InfinitePath::make(g, std::move(p), x.tail());
}

InfinitePath shift(const StagedGraph& g, const InfinitePath& x, std::size_t m) {
    if (m == 0) return x;
    const auto& pre = x.prefix().edges;
    if (m < pre.size()) {
        FinitePath p{g.range(pre[m]), std::vector<EdgeRef>(pre.begin() + static_cast<std::ptrdiff_t>(m), pre.end())};
        return InfinitePath::make(g, std::move(p), x.tail());
    }
    const std::size_t j = m - pre.size();
    TailSpec t = x.tail();
    if (auto* r = std::get_if<RayTail>(&t)) {
        r->entry_depth += static_cast<std::int64_t>(j);
    } else {
        auto& d = std::get<DescentTail>(t);
        const std::size_t l = d.pattern.size();
        std::vector<EdgeRef> rotated;
        for (std::size_t i = 0; i < l; ++i) rotated.push_back(tail_edge(x.tail(), j + i));
        d.pattern = std::move(rotated);
    }
    FinitePath p{tail_range(g, t), {}};
    return InfinitePath::make(g, std::move(p), std::move(t));
}

VertexRef vertex_at(const StagedGraph& g, const InfinitePath& x, std::size_t m) { return g.range(x.edge(m + 1)); }

bool in_cylinder(const InfinitePath& x, const FinitePath& alpha) {
    if (alpha.anchor != x.range()) return false;
    for (std::size_t i = 0; i < alpha.edges.size(); ++i) {
        if (x.edge(i + 1) != alpha.edges[i]) return false;
    }
    return true;
}

std::optional<std::int64_t> shift_lag(const StagedGraph& g, const InfinitePath& x, const InfinitePath& y) {
    if (!g.principality().principal) throw NotPrincipal("shift lags are only unique on graphs without cycles");
    const auto px = static_cast<std::int64_t>(x.prefix().size());
    const auto py = static_cast<std::int64_t>(y.prefix().size());
    if (const auto* rx = std::get_if<RayTail>(&x.tail())) {
        const auto* ry = std::get_if<RayTail>(&y.tail());
        if (!ry || rx->stage != ry->stage || rx->ray != ry->ray) return std::nullopt;
        return (rx->entry_depth - px) - (ry->entry_depth - py);
    }
    if (!y.descent_tail()) return std::nullopt;
    // Align a tail edge of x deep enough to lie in both periodic parts.
    const std::size_t lx = x.tail_period();
    const std::size_t ly = y.tail_period();
    std::size_t i0 = static_cast<std::size_t>(px) + 1;
    const std::int64_t y_start = y.edge(static_cast<std::size_t>(py) + 1).stage;
    while (x.edge(i0).stage <= y_start) i0 += lx;
    const EdgeRef target = x.edge(i0);
    const std::size_t window = 2 * (lx + ly);
    std::optional<std::int64_t> found;
    for (std::size_t j = static_cast<std::size_t>(py) + 1; y.edge(j).stage <= target.stage; ++j) {
        if (y.edge(j) != target) continue;
        bool same = true;
        for (std::size_t t = 1; t < window && same; ++t) same = x.edge(i0 + t) == y.edge(j + t);
        if (!same) continue;
        const std::int64_t k = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i0);
        if (found && *found != k) throw NotPrincipal("two shift lags between the same paths");
        found = k;
    }
    return found;
}

EdgeRef step_from(const StagedGraph& g, const VertexRef& at, std::string_view id) {
    if (!at.is_block()) throw ResolutionError("no template edge '" + std::string(id) + "' below a ray vertex");
    const BlockTemplate& t = g.block(at.stage);
    if (std::int32_t i = t.edge_index(id); i >= 0 && t.edges[i].range == at.local) return EdgeRef::within(at.stage, i);
    if (const CrossTemplate* c = g.cross(at.stage)) {
        if (std::int32_t i = c->edge_index(id); i >= 0 && c->edges[i].range == at.local) {
            return EdgeRef::cross(at.stage, i);
        }
    }
    if (std::int32_t r = t.ray_index(id); r >= 0 && t.rays[r].attach == at.local) return EdgeRef::ray(at.stage, r, 1);
    throw ResolutionError("no edge '" + std::string(id) + "' leaves " + g.label(at));
}

DescentTail resolve_descent(const StagedGraph& g, const VertexRef& start, const std::vector<std::string>& ids) {
    if (ids.empty()) throw ResolutionError("descent pattern is empty");
    if (start.stage < 1) throw ResolutionError("descent must start in the repeating stages");
    DescentTail d;
    VertexRef at = start;
    const std::size_t max_passes = static_cast<std::size_t>(g.period()) * 4 + 4;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
        for (const auto& id : ids) {
            EdgeRef e = step_from(g, at, id);
            if (e.kind == EdgeKind::Ray) throw ResolutionError("descent pattern may not enter a ray");
            d.pattern.push_back(e);
            at = g.source(e);
        }
        const std::int64_t moved = at.stage - start.stage;
        if (moved == 0) throw ResolutionError("descent pattern does not leave its stage");
        if (at.local == start.local && moved % g.period() == 0) {
            d.shift = moved;
            InfinitePath check = InfinitePath::make(g, FinitePath{start, {}}, d);
            return std::get<DescentTail>(check.tail());
        }
    }
    throw ResolutionError("descent pattern does not return to its start vertex");
}

namespace {

// Saturating count (0, 1, 2 = many) of finite paths from `from` to `to`.
int count_routes(const StagedGraph& g, const VertexRef& from, const VertexRef& to, std::map<VertexRef, int>& memo) {
    if (from == to) return 1;
    if (from.stage > to.stage) return 0;
    if (!from.is_block() && (to.is_block() || to.local != from.local || to.stage != from.stage || to.depth < from.depth)) {
        return 0;
    }
    if (auto it = memo.find(from); it != memo.end()) return it->second;
    int total = 0;
    for (const EdgeRef& e : g.incoming_edges(from)) {
        if (e.kind == EdgeKind::Ray && to.is_block()) continue;
        total = std::min(2, total + count_routes(g, g.source(e), to, memo));
    }
    memo[from] = total;
    return total;
}

// Vertices admitting an infinite path. Periodic stages are summarized by
// (template, local) state; this is the greatest fixed point of
// "has a ray or an edge to a live vertex".
class Liveness {
public:
    explicit Liveness(const StagedGraph& g) : g_(g) {
        const std::int32_t p = g.period();
        live_.resize(p);
        for (std::int32_t r = 0; r < p; ++r) live_[r].assign(g.block(r + 1).vertices.size(), true);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::int32_t r = 0; r < p; ++r) {
                for (std::size_t v = 0; v < live_[r].size(); ++v) {
                    if (!live_[r][v]) continue;
                    if (!periodic_live(r, static_cast<std::int32_t>(v))) {
                        live_[r][v] = false;
                        changed = true;
                    }
                }
            }
        }
        // Base stages, bottom up.
        for (std::int64_t s = 0; s >= g.first_stage(); --s) {
            const BlockTemplate& t = g.block(s);
            std::vector<bool> row(t.vertices.size(), false);
            for (std::int32_t v : t.topo) row[v] = stage_live(s, v, row);
            base_.insert(base_.begin(), row);
        }
    }

    bool live(const VertexRef& v) const {
        if (!v.is_block()) return true;
        if (v.stage >= 1) return live_[(v.stage - 1) % g_.period()][v.local];
        return base_[v.stage - g_.first_stage()][v.local];
    }

private:
    bool periodic_live(std::int32_t r, std::int32_t v) const {
        const std::int64_t s = r + 1;
        const BlockTemplate& t = g_.block(s);
        if (!t.rays_at[v].empty()) return true;
        for (std::int32_t ei : t.in_edges[v]) {
            if (live_[r][t.edges[ei].source]) return true;
        }
        if (const CrossTemplate* c = g_.cross(s)) {
            const std::int32_t next = (r + 1) % g_.period();
            for (std::int32_t ei : c->in_edges[v]) {
                if (live_[next][c->edges[ei].source]) return true;
            }
        }
        return false;
    }

    bool stage_live(std::int64_t s, std::int32_t v, const std::vector<bool>& row) const {
        const BlockTemplate& t = g_.block(s);
        if (!t.rays_at[v].empty()) return true;
        for (std::int32_t ei : t.in_edges[v]) {
            if (row[t.edges[ei].source]) return true;
        }
        if (const CrossTemplate* c = g_.cross(s)) {
            for (std::int32_t ei : c->in_edges[v]) {
                if (live(VertexRef::block(s + 1, c->edges[ei].source))) return true;
            }
        }
        return false;
    }

    const StagedGraph& g_;
    std::vector<std::vector<bool>> live_;
    std::vector<std::vector<bool>> base_;
};

}  // namespace

InfinitePath unique_path(const StagedGraph& g, const VertexRef& v, const EdgeRef& f) {
    if (!g.principality().principal) throw NotPrincipal("unique_path needs a graph without cycles");
    if (!g.contains(v) || !g.contains(f)) throw NoPath("vertex or edge is not in the graph");
    std::map<VertexRef, int> memo;
    const VertexRef target = g.range(f);
    const int routes = count_routes(g, v, target, memo);
    if (routes == 0) throw NoPath("no finite path from " + g.label(v) + " to " + g.label(target));
    if (routes > 1) throw NotUnique("at least two finite paths from " + g.label(v) + " to " + g.label(target));

    std::vector<EdgeRef> edges;
    for (VertexRef at = v; at != target;) {
        for (const EdgeRef& e : g.incoming_edges(at)) {
            if (count_routes(g, g.source(e), target, memo) == 1) {
                edges.push_back(e);
                at = g.source(e);
                break;
            }
        }
    }
    edges.push_back(f);

    Liveness live(g);
    std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> seen;  // periodic state -> edge index
    VertexRef at = g.source(f);
    if (!live.live(at)) throw NoPath("no infinite continuation below " + g.label(f));
    while (true) {
        if (!at.is_block()) {
            FinitePath p = make_finite_path(g, v, edges);
            return InfinitePath::make(g, std::move(p), RayTail{at.stage, at.local, at.depth});
        }
        if (at.stage >= 1) {
            auto key = std::make_pair(g.template_index(at.stage), at.local);
            if (auto it = seen.find(key); it != seen.end()) {
                const std::size_t from = it->second;
                DescentTail d;
                d.pattern.assign(edges.begin() + static_cast<std::ptrdiff_t>(from), edges.end());
                d.shift = at.stage - g.range(d.pattern.front()).stage;
                std::vector<EdgeRef> pre(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(from));
                return InfinitePath::make(g, FinitePath{v, std::move(pre)}, std::move(d));
            }
            seen.emplace(key, edges.size());
        }
        std::vector<EdgeRef> options;
        for (const EdgeRef& e : g.incoming_edges(at)) {
            if (live.live(g.source(e))) options.push_back(e);
        }
        if (options.size() != 1) {
            throw NotUnique("several infinite continuations below " + g.label(at));
        }
        if (options.front().kind == EdgeKind::Ray) {
            FinitePath p = make_finite_path(g, v, edges);
            return InfinitePath::make(g, std::move(p), RayTail{at.stage, options.front().index, 0});
        }
        edges.push_back(options.front());
        at = g.source(options.front());
    }
}

std::string describe(const StagedGraph& g, const FinitePath& p) {
    if (p.edges.empty()) return "(" + g.label(p.anchor) + ")";
    std::string s;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (i) s += " ";
        s += g.label(p.edges[i]);
    }
    return s;
}

std::string describe(const StagedGraph& g, const InfinitePath& x) {
    std::string s = x.prefix().edges.empty() ? "" : describe(g, x.prefix()) + " ";
    if (const auto* r = std::get_if<RayTail>(&x.tail())) {
        s += "ray " + g.block(r->stage).rays[r->ray].id + "@" + std::to_string(r->stage) + " from depth " +
             std::to_string(r->entry_depth);
    } else {
        const auto& d = std::get<DescentTail>(x.tail());
        s += "(";
        for (std::size_t i = 0; i < d.pattern.size(); ++i) {
            if (i) s += " ";
            s += g.label(d.pattern[i]);
        }
        s += ")^inf";
    }
    return s;
}

}  // namespace pathcert
