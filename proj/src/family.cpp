#include "pathcert/family.hpp"

#include "pathcert/errors.hpp"

#include <numeric>

namespace pathcert {

const PivotRule& PathFamily::rule(std::int64_t n) const {
    const auto L = static_cast<std::int64_t>(pivots.size());
    const std::int64_t r = ((target(n) - 1) % L + L) % L;
    return pivots[static_cast<std::size_t>(r)];
}

std::int64_t PathFamily::n_period(const StagedGraph& g) const {
    std::int64_t stages = std::lcm<std::int64_t>(g.period(), static_cast<std::int64_t>(pivots.size()));
    if (const auto* d = std::get_if<DescentTail>(&descent.tail())) stages = std::lcm(stages, d->shift);
    return stages / std::gcd(stages, stride);
}

std::size_t arrival_index(const StagedGraph& g, const PathFamily& F, std::int64_t n) {
    if (n < F.n_min) {
        throw IndexBelowMin("family " + F.name + ": index " + std::to_string(n) + " is below the minimum " +
                            std::to_string(F.n_min));
    }
    const std::int64_t stage = F.target(n) - F.rule(n).back;
    if (F.descent.range().stage > stage) {
        throw IndexBelowMin("family " + F.name + ": stage " + std::to_string(stage) + " lies above the descent start");
    }
    std::size_t i = 0;
    for (VertexRef at = F.descent.range(); at.stage < stage || !at.is_block(); at = vertex_at(g, F.descent, ++i)) {
        if (!at.is_block()) throw ResolutionError("family " + F.name + ": descent enters a ray");
    }
    return i;
}

InfinitePath materialize(const StagedGraph& g, const PathFamily& F, std::int64_t n) {
    const std::size_t i = arrival_index(g, F, n);
    const PivotRule& rule = F.rule(n);
    FinitePath prefix{F.descent.range(), F.descent.head(i)};
    VertexRef at = vertex_at(g, F.descent, i);
    for (const auto& id : rule.chain) {
        EdgeRef e = step_from(g, at, id);
        prefix.edges.push_back(e);
        at = g.source(e);
    }
    if (rule.tail.stage_offset && at.stage != F.target(n) + *rule.tail.stage_offset) {
        throw ResolutionError("family " + F.name + ": pivot chain for n=" + std::to_string(n) + " ends at stage " +
                              std::to_string(at.stage) + ", not at the declared tail stage");
    }
    if (rule.tail.kind == TailTemplate::Kind::Ray) {
        if (!at.is_block()) throw ResolutionError("family " + F.name + ": chain ends inside a ray");
        const BlockTemplate& t = g.block(at.stage);
        const std::int32_t r = t.ray_index(rule.tail.ray);
        if (r < 0 || t.rays[r].attach != at.local) {
            throw ResolutionError("family " + F.name + ": ray '" + rule.tail.ray + "' is not attached at " + g.label(at));
        }
        return InfinitePath::make(g, std::move(prefix), RayTail{at.stage, r, 0});
    }
    return InfinitePath::make(g, std::move(prefix), resolve_descent(g, at, rule.tail.pattern));
}

ConvergenceTable family_converges_pointwise(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                            std::size_t depth) {
    ConvergenceTable out;
    if (F.descent != z || F.stride <= 0) return out;
    out.converges = true;
    const std::int64_t P = F.n_period(g);
    for (std::size_t m = 1; m <= depth; ++m) {
        // Agreement only grows along each residue class once the descent part
        // alone covers m edges; scan until a full period of such indices.
        std::int64_t last_bad = F.n_min - 1;
        std::int64_t good_run = 0;
        for (std::int64_t n = F.n_min; good_run < P; ++n) {
            if (arrival_index(g, F, n) >= m) {
                ++good_run;
                continue;
            }
            good_run = 0;
            InfinitePath x = materialize(g, F, n);
            std::size_t agree = 0;
            while (agree < m && x.edge(agree + 1) == z.edge(agree + 1)) ++agree;
            if (agree < m) last_bad = n;
        }
        out.first_agreement.push_back(last_bad + 1);
    }
    return out;
}

}  // namespace pathcert
