#include "pathcert/orbit.hpp"

#include "pathcert/errors.hpp"

#include <map>
#include <tuple>

namespace pathcert {

ReachCounter::ReachCounter(const StagedGraph& g, const VertexRef& source)
    : g_(&g), source_(source), first_(source.stage) {}

const std::vector<BigInt>& ReachCounter::at(std::int64_t stage) {
    if (stage < first_ || !source_.is_block()) {
        zeros_.assign(g_->block(stage).vertices.size(), BigInt(0));
        return zeros_;
    }
    while (static_cast<std::int64_t>(rows_.size()) <= stage - first_) {
        const std::int64_t s = first_ + static_cast<std::int64_t>(rows_.size());
        const BlockTemplate& t = g_->block(s);
        std::vector<BigInt> row(t.vertices.size(), BigInt(0));
        if (rows_.empty()) {
            row[source_.local] = 1;
        } else if (const CrossTemplate* c = g_->cross(s - 1)) {
            const auto& above = rows_.back();
            for (const auto& e : c->edges) row[e.source] += above[e.range];
        }
        for (std::int32_t v : t.topo) {
            if (row[v] == 0) continue;
            for (std::int32_t ei : t.in_edges[v]) row[t.edges[ei].source] += row[v];
        }
        rows_.push_back(std::move(row));
    }
    return rows_[stage - first_];
}

BigInt ReachCounter::count(const VertexRef& v) {
    if (v.is_block()) return at(v.stage)[v.local];
    if (!source_.is_block()) {
        return (v.stage == source_.stage && v.local == source_.local && v.depth >= source_.depth) ? 1 : 0;
    }
    return at(v.stage)[g_->block(v.stage).rays[v.local].attach];
}

const char* CountResult::kind_name(Kind k) {
    switch (k) {
        case Kind::Exact: return "exact";
        case Kind::AtLeast: return "at-least";
        case Kind::Infinite: return "infinite";
    }
    return "?";
}

namespace {

std::vector<bool> support(const std::vector<BigInt>& row) {
    std::vector<bool> s(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) s[i] = row[i] != 0;
    return s;
}

}  // namespace

CountResult walk_orbit(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha, Budget budget,
                       const SpliceVisitor& visit) {
    if (!g.principality().principal) throw NotPrincipal("orbit counts need a graph without cycles");
    const std::size_t A = alpha.size();
    const VertexRef sa = alpha.source(g);
    ReachCounter N(g, sa);

    std::vector<VertexRef> alpha_vertices{alpha.anchor};
    for (const EdgeRef& e : alpha.edges) alpha_vertices.push_back(g.source(e));
    const std::int64_t alpha_stage = sa.stage;

    std::int64_t alpha_ray_depth = 0;
    if (const auto* r = std::get_if<RayTail>(&x.tail())) {
        for (const VertexRef& u : alpha_vertices) {
            if (!u.is_block() && u.stage == r->stage && u.local == r->ray) alpha_ray_depth = std::max(alpha_ray_depth, u.depth);
        }
    }

    const std::size_t px = x.prefix().size();
    const std::size_t l = x.tail_period();
    using Key = std::tuple<std::int32_t, std::vector<bool>, std::vector<bool>>;
    std::map<Key, std::pair<std::size_t, BigInt>> seen;
    std::size_t m_detect = 0;
    bool detecting = false;

    CountResult out;
    BigInt& total = out.count;
    auto emit = [&](Splice s) {
        total += s.weight;
        if (visit) visit(s);
    };

    for (std::size_t m = 0;; ++m) {
        const VertexRef t = vertex_at(g, x, m);
        if (x.ray_tail() && !t.is_block() && t.depth > alpha_ray_depth) {
            out.kind = CountResult::Kind::Exact;
            out.certificate = "ray tail reached depth " + std::to_string(t.depth) + " below the cylinder";
            return out;
        }
        if (x.descent_tail() && m >= px && (m - px) % l == 0 && t.stage > alpha_stage + 1) {
            if (!detecting) {
                detecting = true;
                m_detect = m;
            }
            Key key{g.template_index(t.stage), support(N.at(t.stage - 1)), support(N.at(t.stage))};
            if (auto it = seen.find(key); it != seen.end()) {
                const BigInt diff = total - it->second.second;
                if (diff == 0) {
                    out.kind = CountResult::Kind::Exact;
                    out.certificate = "descent repeats its reachability state between stages " +
                                      std::to_string(g.range(x.edge(it->second.first + 1)).stage) + " and " +
                                      std::to_string(t.stage) + " with no deviations";
                } else {
                    out.kind = CountResult::Kind::Infinite;
                    out.certificate = "descent repeats its reachability state between stages " +
                                      std::to_string(g.range(x.edge(it->second.first + 1)).stage) + " and " +
                                      std::to_string(t.stage) + " with " + diff.str() + " deviations per cycle";
                }
                return out;
            }
            seen.emplace(std::move(key), std::make_pair(m, total));
            if (static_cast<std::int64_t>(m - m_detect) >
                budget.periods * static_cast<std::int64_t>(l) + budget.length) {
                out.kind = CountResult::Kind::AtLeast;
                out.certificate = "budget exhausted at edge " + std::to_string(m);
                return out;
            }
        }

        const bool has_prev = m >= 1;
        const EdgeRef prev = has_prev ? x.edge(m) : EdgeRef{};
        for (std::size_t j = 0; j < A; ++j) {
            if (alpha_vertices[j] != t) continue;
            if (j > 0 && has_prev && alpha.edges[j - 1] == prev) continue;
            bool follows = true;
            for (std::size_t i = 0; i + j < A && follows; ++i) follows = x.edge(m + 1 + i) == alpha.edges[j + i];
            if (follows) emit(Splice{Splice::Kind::Cylinder, m, j, {}, 1});
        }
        if (sa == t && (A == 0 || !has_prev || alpha.edges[A - 1] != prev)) {
            emit(Splice{Splice::Kind::Whole, m, A, {}, 1});
        }
        for (const EdgeRef& e : g.outgoing_edges(t)) {
            if (has_prev && e == prev) continue;
            BigInt w = N.count(g.range(e));
            if (w != 0) emit(Splice{Splice::Kind::Deviation, m, A, e, std::move(w)});
        }
    }
}

CountResult orbit_count(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha, Budget budget) {
    return walk_orbit(g, x, alpha, budget, nullptr);
}

std::vector<InfinitePath> orbit_members(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha,
                                        Budget budget, std::size_t limit) {
    std::vector<Splice> splices;
    CountResult c = walk_orbit(g, x, alpha, budget, [&](const Splice& s) { splices.push_back(s); });
    if (!c.exact()) throw NonExactCount("orbit is not exactly countable: " + c.certificate);
    if (c.count > limit) throw NonExactCount("orbit has " + c.count.str() + " members, above the limit");

    const VertexRef sa = alpha.source(g);
    ReachCounter N(g, sa);
    std::vector<InfinitePath> out;
    for (const Splice& s : splices) {
        InfinitePath rest = shift(g, x, s.m);
        if (s.kind == Splice::Kind::Cylinder) {
            FinitePath q{alpha.anchor, std::vector<EdgeRef>(alpha.edges.begin(), alpha.edges.begin() + static_cast<std::ptrdiff_t>(s.j))};
            out.push_back(concat_infinite(g, q, rest));
            continue;
        }
        if (s.kind == Splice::Kind::Whole) {
            out.push_back(concat_infinite(g, alpha, rest));
            continue;
        }
        // Every path q' from s(alpha) to r(e), built backwards from r(e).
        std::vector<EdgeRef> suffix{s.edge};
        std::function<void(const VertexRef&)> back = [&](const VertexRef& v) {
            if (v == sa) {
                FinitePath q = alpha;
                q.edges.insert(q.edges.end(), suffix.rbegin(), suffix.rend());
                out.push_back(concat_infinite(g, q, rest));
                return;
            }
            for (const EdgeRef& e : g.outgoing_edges(v)) {
                const VertexRef u = g.range(e);
                if (N.count(u) == 0) continue;
                suffix.push_back(e);
                back(u);
                suffix.pop_back();
            }
        };
        back(g.range(s.edge));
    }
    return out;
}

}  // namespace pathcert
