#include "pathcert/analysis.hpp"

#include "pathcert/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace pathcert {

FinitePath ladder_cylinder(const InfinitePath& z, std::size_t m) { return FinitePath{z.range(), z.head(m)}; }

const char* stabilization_name(Stabilization s) {
    switch (s) {
        case Stabilization::ProvedPeriodic: return "proved-periodic";
        case Stabilization::ProvedGrowth: return "proved-growth";
        case Stabilization::EmpiricalWindow: return "empirical-window";
    }
    return "?";
}

bool Profile::proved() const {
    return std::all_of(rows.begin(), rows.end(), [](const ProfileRow& r) { return r.proved(); });
}

namespace {

std::int64_t residue_of(std::int64_t n, std::int64_t P) { return ((n % P) + P) % P; }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

Extended count_value(const CountResult& c, std::int64_t n, std::int64_t m) {
    if (c.kind == CountResult::Kind::Exact) return Extended::finite(c.count);
    if (c.kind == CountResult::Kind::Infinite) return Extended::infinity();
    throw NonExactCount("c_" + std::to_string(n) + "(W_" + std::to_string(m) + ") is only known to be at least " +
                        c.count.str() + ": " + c.certificate);
}

std::optional<InfinitePath> member(const StagedGraph& g, const PathFamily& F, std::int64_t n) {
    if (n < F.n_min) return std::nullopt;
    try {
        return materialize(g, F, n);
    } catch (const IndexBelowMin&) {
        return std::nullopt;
    }
}

bool dominates(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
    }
    return true;
}

std::vector<bool> support(const std::vector<BigInt>& a) {
    std::vector<bool> s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] != 0;
    return s;
}

std::vector<BigInt> minus(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    std::vector<BigInt> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

// c_n(W_m) = A_n + Phi(n). A_n collects splices up to the arrival on the
// family descent and equals the descent's own count once the arrival passes
// the descent's last positive splice. Phi(n) depends only on the reach vector
// S(n) one stage above the arrival, linearly with non-negative coefficients
// when the tail is a ray. Along a residue class S moves by a fixed
// non-negative linear map, which gives the two proofs below.
constexpr int kSettlePeriods = 8;

// Looks for a periodic or growth certificate on n0, n0 + step, ... The
// reach vector obeys S(n + step) = T S(n) with T non-negative, so every
// certificate stays valid from any later start; a few steps absorb the
// transient near alpha.
ClassLimit certify(const StagedGraph& g, const PathFamily& F, const FinitePath& alpha, ReachCounter& N,
                   std::int64_t n, std::int64_t P, const Budget& budget, std::int64_t m) {
    ClassLimit out;
    out.from = n;
    auto state = [&](std::int64_t k) { return N.at(F.target(k) - F.rule(k).back - 1); };
    auto count = [&](std::int64_t k) { return orbit_count(g, materialize(g, F, k), alpha, budget); };
    const bool ray_tail = F.rule(n).tail.kind == TailTemplate::Kind::Ray;

    std::vector<BigInt> s1 = state(n);
    for (int shift = 0; shift < kSettlePeriods; ++shift, n += P) {
        const std::vector<BigInt> s2 = state(n + P);
        if (s1 == s2) {
            const CountResult c1 = count(n);
            if (c1.kind == CountResult::Kind::AtLeast) {
                out.note = "count at n=" + std::to_string(n) + " not settled within budget";
                return out;
            }
            out.from = n;
            out.proof = ClassProof::Periodic;
            out.value = count_value(c1, n, m);
            out.note = "reach vector repeats between n=" + std::to_string(n) + " and n=" + std::to_string(n + P);
            return out;
        }
        if (ray_tail && dominates(s2, s1)) {
            const std::vector<BigInt> s3 = state(n + 2 * P);
            const std::vector<BigInt> d1 = minus(s2, s1);
            const std::vector<BigInt> d2 = minus(s3, s2);
            const CountResult c1 = count(n);
            const CountResult c2 = count(n + P);
            // Increments keep one support, and the count ignores it.
            if (support(d1) == support(d2) && c1.exact() && c2.exact() && c1.count == c2.count) {
                out.from = n;
                out.proof = ClassProof::Periodic;
                out.value = Extended::finite(c1.count);
                out.note = "reach vector grows from n=" + std::to_string(n) + " only where the count does not see it";
                return out;
            }
            if (dominates(d2, d1)) {
                if (c1.exact() && c2.exact() && c2.count > c1.count) {
                    out.from = n;
                    out.proof = ClassProof::Growth;
                    out.value = Extended::infinity();
                    out.note = "reach vector increments grow from n=" + std::to_string(n) +
                               " and the count rises from " + c1.count.str() + " to " + c2.count.str();
                    return out;
                }
            }
        }
        s1 = s2;
    }
    out.note = "reach vector changes without a growth certificate";
    return out;
}


ClassLimit settle_class(const StagedGraph& g, const PathFamily& F, const FinitePath& alpha, ReachCounter& N,
                        std::int64_t r, std::int64_t P, std::size_t last_descent, const CountResult& descent,
                        const Budget& budget, std::int64_t m) {
    ClassLimit out;
    out.residue = r;
    const std::int64_t sa_stage = alpha.source(g).stage;

    std::int64_t n = F.n_min + residue_of(r - F.n_min, P);
    for (int guard = 0;; n += P, ++guard) {
        if (guard > 100000) throw NonUniformFamily("no index of residue " + std::to_string(r) + " reaches the descent");
        if (!member(g, F, n)) continue;
        const std::int64_t a = F.target(n) - F.rule(n).back;
        if (arrival_index(g, F, n) >= last_descent && a - 1 > sa_stage) break;
    }
    out.from = n;

    if (descent.kind == CountResult::Kind::Infinite) {
        out.proof = ClassProof::Growth;
        out.value = Extended::infinity();
        out.note = "descent deviations recur with positive weight";
        return out;
    }
    if (descent.kind == CountResult::Kind::AtLeast) {
        out.note = "descent count not settled within budget";
        return out;
    }

    ClassLimit c = certify(g, F, alpha, N, n, P, budget, m);
    if (c.proof == ClassProof::Empirical) {
        // Increments may alternate between coordinates; split the class in two.
        const ClassLimit even = certify(g, F, alpha, N, n, 2 * P, budget, m);
        const ClassLimit odd = certify(g, F, alpha, N, n + P, 2 * P, budget, m);
        if (even.proof != ClassProof::Empirical && odd.proof != ClassProof::Empirical && even.value == odd.value) {
            c.proof = even.proof == odd.proof ? even.proof : ClassProof::Growth;
            c.value = even.value;
            c.from = std::max(even.from, odd.from);
            c.note = "split mod " + std::to_string(2 * P) + ": " + even.note + "; " + odd.note;
        }
    }
    c.residue = r;
    return c;
}

Extended min_ext(const Extended& a, const Extended& b) { return b < a ? b : a; }
Extended max_ext(const Extended& a, const Extended& b) { return a < b ? b : a; }

// Largest k with value > (k - 1) * lambda.
Extended strength_at(const Extended& value, const BigInt& lambda) {
    if (value.is_infinite()) return Extended::infinity();
    if (*value.value == 0) return Extended::finite(0);
    return Extended::finite((*value.value - 1) / lambda + 1);
}

Extended ratio_floor(const Extended& value, const BigInt& lambda) {
    if (value.is_infinite()) return Extended::infinity();
    return Extended::finite(floor_div(*value.value, lambda));
}

bool exceeds(const Extended& value, const BigInt& bound) { return value.is_infinite() || *value.value > bound; }

}  // namespace

Profile measure_profile(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, const AnalysisOptions& opt) {
    if (!g.principality().principal) throw NotPrincipal("analysis needs a graph without cycles");
    if (opt.ladder < 1) throw BoundsError("ladder depth must be at least 1");
    if (opt.window.hi < opt.window.lo) throw BoundsError("empty window");
    Profile p;
    p.period = F.n_period(g);
    p.window = opt.window;
    for (std::int64_t m = 1; m <= opt.ladder; ++m) {
        ProfileRow row;
        row.m = m;
        const FinitePath alpha = ladder_cylinder(z, static_cast<std::size_t>(m));
        const CountResult lz = orbit_count(g, z, alpha, opt.budget);
        if (!lz.exact()) {
            throw DenominatorNotExact("lambda_z(W_" + std::to_string(m) + ") is " + CountResult::kind_name(lz.kind) +
                                      ": " + lz.certificate);
        }
        row.lambda_z = lz.count;

        std::size_t last_descent = 0;
        const CountResult descent = walk_orbit(g, F.descent, alpha, opt.budget, [&](const Splice& s) {
            if (s.weight > 0) last_descent = std::max(last_descent, s.m);
        });
        ReachCounter N(g, alpha.source(g));
        bool growth = false;
        bool proved = true;
        for (std::int64_t r = 0; r < p.period; ++r) {
            ClassLimit c = settle_class(g, F, alpha, N, r, p.period, last_descent, descent, opt.budget, m);
            proved = proved && c.proof != ClassProof::Empirical;
            growth = growth || c.proof == ClassProof::Growth;
            row.classes.push_back(std::move(c));
        }

        for (std::int64_t n = opt.window.lo; n <= opt.window.hi; ++n) {
            const auto x = member(g, F, n);
            if (!x) {
                row.counts.emplace_back();
                continue;
            }
            row.counts.emplace_back(count_value(orbit_count(g, *x, alpha, opt.budget), n, m));
        }

        if (proved) {
            row.stabilization = growth ? Stabilization::ProvedGrowth : Stabilization::ProvedPeriodic;
            row.liminf = row.classes.front().value;
            row.limsup = row.classes.front().value;
            for (const ClassLimit& c : row.classes) {
                row.liminf = min_ext(row.liminf, c.value);
                row.limsup = max_ext(row.limsup, c.value);
            }
        } else {
            // The window's last period stands in for the limits.
            row.stabilization = Stabilization::EmpiricalWindow;
            std::optional<Extended> lo, hi;
            const std::int64_t first = std::max(opt.window.lo, opt.window.hi - p.period + 1);
            for (std::int64_t n = first; n <= opt.window.hi; ++n) {
                const auto& v = row.counts[static_cast<std::size_t>(n - opt.window.lo)];
                if (!v) continue;
                lo = lo ? min_ext(*lo, *v) : *v;
                hi = hi ? max_ext(*hi, *v) : *v;
            }
            row.liminf = lo.value_or(Extended::finite(0));
            row.limsup = hi.value_or(Extended::finite(0));
        }
        p.rows.push_back(std::move(row));
    }
    return p;
}

// ---------------------------------------------------------------------------

std::string Subsequence::describe() const {
    if (all()) return "all n";
    std::string s;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (i) s += " or ";
        if (modulus == 2) {
            s += residues[i] == 0 ? "even n" : "odd n";
            continue;
        }
        s += "n ≡ " + std::to_string(residues[i]) + " mod " + std::to_string(modulus);
    }
    return s;
}

StrengthVerdict lower_from_profile(const Profile& p) {
    StrengthVerdict v;
    v.route = "liminf-criterion";
    v.certified = p.proved();
    v.k = Extended::infinity();
    for (const ProfileRow& r : p.rows) {
        v.k_by_depth.push_back(strength_at(r.liminf, r.lambda_z));
        v.k = min_ext(v.k, v.k_by_depth.back());
    }
    return v;
}

StrengthVerdict upper_from_profile(const StagedGraph& g, const PathFamily& F, const Profile& p) {
    StrengthVerdict v;
    v.route = "limsup-criterion";
    v.certified = p.proved();
    v.k = Extended::infinity();
    for (const ProfileRow& r : p.rows) {
        v.k_by_depth.push_back(strength_at(r.limsup, r.lambda_z));
        v.k = min_ext(v.k, v.k_by_depth.back());
    }
    const StrengthVerdict lower = lower_from_profile(p);
    if (Extended::finite(1) <= v.k && lower.k == Extended::finite(0)) {
        throw NoOrbitConvergence("the limsup test passes but [x_n] does not converge to [z] (liminf test fails at k=1)");
    }
    if (!v.certified) return v;

    // Residue classes whose eventual counts pass the test at every depth.
    Subsequence sub;
    sub.modulus = p.period;
    for (std::int64_t r = 0; r < p.period; ++r) {
        bool ok = true;
        for (const ProfileRow& row : p.rows) {
            const Extended& c = row.classes[static_cast<std::size_t>(r)].value;
            if (v.k.is_infinite()) {
                ok = ok && c.is_infinite();
            } else if (*v.k.value > 0) {
                ok = ok && exceeds(c, (*v.k.value - 1) * row.lambda_z);
            }
        }
        if (ok) sub.residues.push_back(r);
    }
    if (sub.residues.empty()) {
        v.subsequence = std::move(sub);
        return v;
    }
    if (sub.all()) {
        sub.family = F;
    } else {
        const std::int64_t r = sub.residues.front();
        PathFamily f = F;
        f.name = F.name + "[n=" + std::to_string(r) + " mod " + std::to_string(p.period) + "]";
        f.stride = F.stride * p.period;
        f.offset = F.stride * r + F.offset;
        f.n_min = ceil_div(F.n_min - r, p.period);
        sub.family = std::move(f);
    }
    (void)g;
    v.subsequence = std::move(sub);
    return v;
}

StrengthVerdict lower_strength(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                               const AnalysisOptions& opt) {
    return lower_from_profile(measure_profile(g, F, z, opt));
}

StrengthVerdict upper_strength(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                               const AnalysisOptions& opt) {
    return upper_from_profile(g, F, measure_profile(g, F, z, opt));
}

bool MultiplicityReport::consistent() const {
    return ml.lo <= ml.hi && mu.lo <= mu.hi && ml.hi <= mu.hi && ml.lo <= mu.lo;
}

namespace {

// Index of the deepest row achieving the minimum of f over rows.
template <class Fn>
std::size_t binding_row(const Profile& p, Fn f) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.rows.size(); ++i) {
        if (f(p.rows[i]) <= f(p.rows[best])) best = i;
    }
    return best;
}

std::string depth_note(const Profile& p, std::size_t row) {
    return "depth m=" + std::to_string(p.rows[row].m) + " of " + std::to_string(p.rows.size());
}

}  // namespace

MultiplicityReport multiplicity_from_profile(const StagedGraph& g, const PathFamily& F, const Profile& p) {
    MultiplicityReport out;
    out.certified = p.proved();
    const StrengthVerdict lower = lower_from_profile(p);
    out.ml.lo = lower.k;
    {
        const std::size_t b = binding_row(p, [](const ProfileRow& r) { return strength_at(r.liminf, r.lambda_z); });
        out.evidence.push_back("M_L >= " + lower.k.str() + ": item (5) of the liminf equivalence, " + depth_note(p, b));
    }

    out.mu.lo = Extended::finite(0);
    try {
        const StrengthVerdict upper = upper_from_profile(g, F, p);
        out.mu.lo = upper.k;
        const std::size_t b = binding_row(p, [](const ProfileRow& r) { return strength_at(r.limsup, r.lambda_z); });
        std::string line = "M_U >= " + upper.k.str() + ": item (5) of the limsup equivalence, " + depth_note(p, b);
        if (upper.subsequence && !upper.subsequence->residues.empty()) {
            line += ", subsequence " + upper.subsequence->describe();
        }
        out.evidence.push_back(line);
    } catch (const NoOrbitConvergence& e) {
        out.evidence.push_back(std::string("M_U >= 0: ") + e.what());
    }

    out.ml.hi = Extended::infinity();
    out.mu.hi = Extended::infinity();
    for (const ProfileRow& r : p.rows) {
        out.ml.hi = min_ext(out.ml.hi, ratio_floor(r.liminf, r.lambda_z));
        out.mu.hi = min_ext(out.mu.hi, ratio_floor(r.limsup, r.lambda_z));
    }
    {
        const std::size_t b = binding_row(p, [](const ProfileRow& r) { return ratio_floor(r.liminf, r.lambda_z); });
        out.evidence.push_back(out.ml.hi.is_infinite()
                                   ? "M_L <= inf: no finite frequent ratio bound, liminf is infinite at every depth"
                                   : "M_L <= " + out.ml.hi.str() + ": frequent ratio bound c_n <= " +
                                         p.rows[b].liminf.str() + "/" + p.rows[b].lambda_z.str() + " lambda_z, " +
                                         depth_note(p, b));
    }
    {
        const std::size_t b = binding_row(p, [](const ProfileRow& r) { return ratio_floor(r.limsup, r.lambda_z); });
        out.evidence.push_back(out.mu.hi.is_infinite()
                                   ? "M_U <= inf: no finite eventual ratio bound, limsup is infinite at every depth"
                                   : "M_U <= " + out.mu.hi.str() + ": eventual ratio bound c_n <= " +
                                         p.rows[b].limsup.str() + "/" + p.rows[b].lambda_z.str() + " lambda_z, " +
                                         depth_note(p, b));
    }
    if (!out.certified) out.evidence.push_back("status empirical: some rows rest on window values only");
    return out;
}

MultiplicityReport multiplicity_bounds(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                       const AnalysisOptions& opt) {
    return multiplicity_from_profile(g, F, measure_profile(g, F, z, opt));
}

InfiniteProbe infinite_from_profile(const Profile& p) {
    InfiniteProbe out;
    const bool all_infinite =
        std::all_of(p.rows.begin(), p.rows.end(), [](const ProfileRow& r) { return r.liminf.is_infinite(); });
    if (p.proved() && all_infinite) {
        out.kind = InfiniteProbe::Kind::Infinite;
        out.bound = Extended::infinity();
        out.evidence = "c_n(W_m) -> inf for m=1.." + std::to_string(p.rows.size()) +
                       " (growth proofs); M_L = inf by item (2) of the divergence corollary";
        return out;
    }
    Extended bound = Extended::infinity();
    std::int64_t at = 0;
    for (const ProfileRow& r : p.rows) {
        const Extended f = ratio_floor(r.liminf, r.lambda_z);
        if (!(bound < f)) {
            bound = f;
            at = r.m;
        }
    }
    if (!bound.is_infinite()) {
        out.kind = InfiniteProbe::Kind::Finite;
        out.bound = bound;
        out.evidence = "M_L <= " + bound.str() + " from the frequent ratio bound at depth m=" + std::to_string(at) +
                       (p.proved() ? "" : " (empirical)");
        return out;
    }
    out.evidence = "liminf is infinite on the window but growth is not proved";
    return out;
}

InfiniteProbe infinite_multiplicity_probe(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                          const AnalysisOptions& opt) {
    return infinite_from_profile(measure_profile(g, F, z, opt));
}

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

PathFamily WitnessFamily::range_family(std::int64_t r) const {
    PathFamily R;
    R.name = source.name + "/w" + std::to_string(index + 1) + "/" + std::to_string(r);
    R.descent = limit;
    R.stride = source.stride * modulus;
    R.offset = source.stride * r + source.offset;
    R.pivots = {shapes[static_cast<std::size_t>(r)].rule};
    R.n_min = ceil_div(start[static_cast<std::size_t>(r)] - r, modulus);
    return R;
}

GroupoidElement WitnessFamily::at(const StagedGraph& g, std::int64_t n) const {
    const std::int64_t r = residue(n);
    if (n < start[static_cast<std::size_t>(r)]) {
        throw IndexBelowMin("witness " + std::to_string(index + 1) + " starts at n=" +
                            std::to_string(start[static_cast<std::size_t>(r)]) + " on residue " + std::to_string(r));
    }
    InfinitePath y = materialize(g, range_family(r), (n - r) / modulus);
    return GroupoidElement{std::move(y), shapes[static_cast<std::size_t>(r)].lag, materialize(g, source, n)};
}

namespace {

// The shape of orbit member y of x = x^(n) relative to the limit z.
std::optional<WitnessShape> shape_of(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, std::int64_t n,
                                     const InfinitePath& y, const InfinitePath& x) {
    if (y == z) return std::nullopt;
    std::size_t dep = 1;
    while (y.edge(dep) == z.edge(dep)) {
        if (++dep > 1000000) return std::nullopt;
    }
    const VertexRef dv = vertex_at(g, z, dep - 1);
    if (!dv.is_block()) return std::nullopt;
    std::size_t first = 0;
    while (vertex_at(g, z, first).stage < dv.stage) ++first;
    if (!vertex_at(g, z, first).is_block()) return std::nullopt;
    const std::size_t py = y.prefix().size();
    if (py < dep) return std::nullopt;

    WitnessShape s;
    s.rule.back = F.target(n) - dv.stage;
    for (std::size_t i = first + 1; i <= py; ++i) s.rule.chain.push_back(g.edge_id(y.edge(i)));
    const VertexRef end = py == 0 ? y.range() : g.source(y.edge(py));
    s.rule.tail.stage_offset = end.stage - F.target(n);
    if (const auto* r = std::get_if<RayTail>(&y.tail())) {
        if (r->entry_depth != 0) return std::nullopt;
        s.rule.tail.kind = TailTemplate::Kind::Ray;
        s.rule.tail.ray = g.block(r->stage).rays[r->ray].id;
    } else {
        s.rule.tail.kind = TailTemplate::Kind::Descent;
        for (const EdgeRef& e : std::get<DescentTail>(y.tail()).pattern) s.rule.tail.pattern.push_back(g.edge_id(e));
    }
    const auto k = shift_lag(g, y, x);
    if (!k) return std::nullopt;
    s.lag = *k;
    return s;
}

bool shape_less(const WitnessShape& a, const WitnessShape& b) {
    return std::tie(a.rule.back, a.rule.chain, a.rule.tail.ray, a.rule.tail.pattern, a.lag) <
           std::tie(b.rule.back, b.rule.chain, b.rule.tail.ray, b.rule.tail.pattern, b.lag);
}

// First position of z at `stage`, if z reaches it on a block vertex.
std::optional<std::size_t> first_position(const StagedGraph& g, const InfinitePath& z, std::int64_t stage) {
    if (z.range().stage > stage) return std::nullopt;
    std::size_t i = 0;
    for (VertexRef v = z.range(); v.stage < stage; v = vertex_at(g, z, ++i)) {
        if (!v.is_block() || i > 1000000) return std::nullopt;
    }
    if (!vertex_at(g, z, i).is_block() || vertex_at(g, z, i).stage != stage) return std::nullopt;
    return i;
}

constexpr std::size_t kMemberLimit = 200000;

// The first k shapes at index n, in witness order.
std::vector<WitnessShape> picks(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, std::size_t k,
                                std::int64_t n, std::size_t M, const Budget& budget) {
    const InfinitePath x = materialize(g, F, n);
    const std::int64_t T = F.target(n);
    // C_B = members of W_M whose departure from z is at most B stages above target(n).
    std::optional<FinitePath> C;
    for (std::int64_t B = 0; T - B >= z.range().stage; ++B) {
        const auto pos = first_position(g, z, T - B);
        if (!pos) continue;
        if (*pos < M) break;
        C = ladder_cylinder(z, *pos);
        const CountResult c = orbit_count(g, x, *C, budget);
        if (!c.exact()) throw NonExactCount("orbit of x^(" + std::to_string(n) + ") in a witness cylinder: " + c.certificate);
        if (c.count >= k) break;
    }
    if (!C) return {};
    std::vector<WitnessShape> shapes;
    for (const InfinitePath& y : orbit_members(g, x, *C, budget, kMemberLimit)) {
        if (auto s = shape_of(g, F, z, n, y, x)) shapes.push_back(std::move(*s));
    }
    std::sort(shapes.begin(), shapes.end(), shape_less);
    if (shapes.size() > k) shapes.resize(k);
    return shapes;
}

}  // namespace

std::vector<WitnessFamily> greedy_witnesses(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                            std::size_t k, const Profile& p, const AnalysisOptions& opt) {
    const std::int64_t P = p.period;
    std::vector<WitnessFamily> ws(k);
    for (std::size_t i = 0; i < k; ++i) {
        ws[i].index = i;
        ws[i].source = F;
        ws[i].limit = z;
        ws[i].modulus = P;
        ws[i].start.assign(static_cast<std::size_t>(P), 0);
        ws[i].shapes.resize(static_cast<std::size_t>(P));
    }
    if (k == 0) return ws;
    const auto M = static_cast<std::size_t>(p.rows.size());
    for (std::int64_t r = 0; r < P; ++r) {
        std::int64_t n = F.n_min + residue_of(r - F.n_min, P);
        for (const ProfileRow& row : p.rows) n = std::max(n, row.classes[static_cast<std::size_t>(r)].from);
        bool settled = false;
        std::size_t found = 0;
        for (int attempt = 0; attempt < 8 && !settled; ++attempt, n += P) {
            const auto s0 = picks(g, F, z, k, n, M, opt.budget);
            found = s0.size();
            if (s0.size() < k) continue;
            if (s0 != picks(g, F, z, k, n + P, M, opt.budget) || s0 != picks(g, F, z, k, n + 2 * P, M, opt.budget)) {
                continue;
            }
            // Earlier indices with the same picks belong to the family too.
            std::int64_t from = n;
            while (from - P >= F.n_min) {
                const auto earlier = member(g, F, from - P) ? picks(g, F, z, k, from - P, M, opt.budget)
                                                            : std::vector<WitnessShape>{};
                if (earlier != s0) break;
                from -= P;
            }
            for (std::size_t i = 0; i < k; ++i) {
                ws[i].start[static_cast<std::size_t>(r)] = from;
                ws[i].shapes[static_cast<std::size_t>(r)] = s0[i];
            }
            settled = true;
        }
        if (!settled && found < k) {
            throw StrengthNotCertified("residue " + std::to_string(r) + " mod " + std::to_string(P) + " offers only " +
                                       std::to_string(found) + " orbit members converging to the limit, fewer than k=" +
                                       std::to_string(k));
        }
        if (!settled) {
            throw NonUniformFamily("witness picks on residue " + std::to_string(r) + " mod " + std::to_string(P) +
                                   " do not settle into one shape");
        }
    }
    return ws;
}

std::vector<WitnessFamily> construct_witnesses(const StagedGraph& g, const PathFamily& F, const InfinitePath& z,
                                               std::size_t k, const AnalysisOptions& opt) {
    const Profile p = measure_profile(g, F, z, opt);
    const StrengthVerdict lower = lower_from_profile(p);
    if (lower.k < Extended::finite(k)) {
        throw StrengthNotCertified("lower strength is " + lower.k.str() + ", below k=" + std::to_string(k));
    }
    if (!lower.certified) throw EmpiricalOnly("closed-form witnesses need a proved profile");
    return greedy_witnesses(g, F, z, k, p, opt);
}

bool CompactExhaustion::admits(const BasicSet& B) const {
    if (static_cast<std::int64_t>(B.alpha.size()) > depth || static_cast<std::int64_t>(B.beta.size()) > depth) {
        return false;
    }
    auto inside = [&](const FinitePath& a) {
        if (a.anchor.stage > depth || a.anchor.depth > depth) return false;
        return std::all_of(a.edges.begin(), a.edges.end(),
                           [&](const EdgeRef& e) { return e.stage + (e.kind == EdgeKind::Cross ? 1 : 0) <= depth && e.depth <= depth; });
    };
    return inside(B.alpha) && inside(B.beta);
}

namespace {

// Least L >= max(0, -k) such that x_i = y_{i+k} for every i > L.
std::int64_t last_disagreement(const GroupoidElement& q) {
    const auto px = static_cast<std::int64_t>(q.x.prefix().size());
    const auto py = static_cast<std::int64_t>(q.y.prefix().size());
    const auto lx = static_cast<std::int64_t>(q.x.tail_period());
    const auto ly = static_cast<std::int64_t>(q.y.tail_period());
    const std::int64_t bound = std::max(px, py - q.k) + lx * ly + lx + ly;
    std::int64_t L = std::max<std::int64_t>(0, -q.k);
    for (std::int64_t i = L + 1; i <= bound; ++i) {
        if (q.x.edge(static_cast<std::size_t>(i)) != q.y.edge(static_cast<std::size_t>(i + q.k))) L = i;
    }
    return L;
}

}  // namespace

DivergenceReport divergence_check(const StagedGraph& g, const WitnessFamily& wi, const WitnessFamily& wj,
                                  const CompactExhaustion& E) {
    if (wi.modulus != wj.modulus) throw NonUniformFamily("witness families use different residue moduli");
    const std::int64_t P = wi.modulus;
    DivergenceReport out;
    out.divergent = true;
    std::map<BasicSet, std::size_t> occupancy;
    auto quotient = [&](std::int64_t n) {
        const GroupoidElement a = wi.at(g, n);
        const GroupoidElement b = wj.at(g, n);
        if (a.y != b.y) throw NonUniformFamily("witnesses have different sources at n=" + std::to_string(n));
        return compose(b, invert(a));
    };
    auto occupy = [&](const GroupoidElement& q, std::int64_t L) {
        for (std::int64_t a = L; a <= E.depth && a + q.k <= E.depth; ++a) {
            if (a + q.k < 0) continue;
            BasicSet B{FinitePath{q.x.range(), q.x.head(static_cast<std::size_t>(a))},
                       FinitePath{q.y.range(), q.y.head(static_cast<std::size_t>(a + q.k))}};
            if (E.admits(B)) ++occupancy[B];
        }
    };
    for (std::int64_t r = 0; r < P; ++r) {
        const std::int64_t n0 =
            std::max(wi.start[static_cast<std::size_t>(r)], wj.start[static_cast<std::size_t>(r)]);
        std::int64_t L[3];
        std::int64_t lag = 0;
        for (int t = 0; t < 3; ++t) {
            const GroupoidElement q = quotient(n0 + t * P);
            L[t] = last_disagreement(q);
            if (t > 0 && q.k != lag) throw NonUniformFamily("quotient lag varies along residue " + std::to_string(r));
            lag = q.k;
        }
        if (L[1] - L[0] != L[2] - L[1] || L[1] < L[0]) {
            throw NonUniformFamily("last disagreement does not move affinely along residue " + std::to_string(r));
        }
        const std::int64_t slope = L[1] - L[0];
        out.slope.push_back(slope);
        out.lag.push_back(lag);
        if (slope == 0) {
            out.divergent = false;
            continue;
        }
        for (std::int64_t t = 0; L[0] + t * slope <= E.depth; ++t) occupy(quotient(n0 + t * P), L[0] + t * slope);
    }
    out.sets_hit = occupancy.size();
    for (const auto& [B, c] : occupancy) out.max_occupancy = std::max(out.max_occupancy, c);
    std::ostringstream note;
    if (out.divergent) {
        note << "quotients leave every basic set: last disagreement grows per period by";
        for (std::size_t i = 0; i < out.slope.size(); ++i) note << (i ? ", " : " ") << out.slope[i];
        note << (out.slope.size() > 1 ? " (one per residue class)" : "") << "; at most " << out.max_occupancy << " quotient(s) in any of " << out.sets_hit
             << " occupied sets of K_" << E.depth;
    } else {
        note << "quotients stay in a fixed compact set on some residue";
    }
    out.note = note.str();
    return out;
}

WitnessCheck verify_witnesses(const StagedGraph& g, const std::vector<WitnessFamily>& ws, const PathFamily& F,
                              const InfinitePath& z, const AnalysisOptions& opt) {
    WitnessCheck out;
    for (const WitnessFamily& w : ws) {
        const std::string name = "witness " + std::to_string(w.index + 1);
        for (std::int64_t r = 0; r < w.modulus; ++r) {
            const std::int64_t s = w.start[static_cast<std::size_t>(r)];
            std::vector<std::int64_t> ns{s, s + w.modulus, s + 2 * w.modulus};
            for (std::int64_t n = std::max(opt.window.lo, s); n <= opt.window.hi; ++n) {
                if (w.residue(n) == r) ns.push_back(n);
            }
            for (std::int64_t n : ns) {
                try {
                    const GroupoidElement gmm = w.at(g, n);
                    const InfinitePath x = materialize(g, F, n);
                    if (gmm.y != x) {
                        out.sources = false;
                        out.evidence.push_back(name + ": (i) source differs from x^(" + std::to_string(n) + ")");
                    } else if (shift_lag(g, gmm.x, x) != gmm.k) {
                        out.sources = false;
                        out.evidence.push_back(name + ": (i) declared lag is wrong at n=" + std::to_string(n));
                    }
                } catch (const Error& e) {
                    out.sources = false;
                    out.evidence.push_back(name + ": (i) n=" + std::to_string(n) + ": " + e.what());
                }
            }
            try {
                const PathFamily R = w.range_family(r);
                if (!family_converges_pointwise(g, R, z, static_cast<std::size_t>(opt.ladder)).converges) {
                    out.ranges = false;
                    out.evidence.push_back(name + ": (ii) ranges on residue " + std::to_string(r) +
                                           " do not converge to the limit");
                }
            } catch (const Error& e) {
                out.ranges = false;
                out.evidence.push_back(name + ": (ii) " + e.what());
            }
        }
    }
    if (out.sources && out.ranges && out.evidence.empty()) {
        out.evidence.push_back("(i) sources equal x^(n) with the declared lags; (ii) ranges converge pointwise");
    }
    // Deep enough that the first periods of every witness show up in K_depth.
    std::int64_t depth = opt.ladder;
    for (const WitnessFamily& w : ws) {
        for (std::int64_t s : w.start) depth = std::max(depth, s + 2 * w.modulus);
    }
    const CompactExhaustion E{depth};
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) {
            const std::string pair = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            try {
                const DivergenceReport d = divergence_check(g, ws[i], ws[j], E);
                if (!d.divergent) out.divergence = false;
                out.evidence.push_back(pair + ": (iii) " + d.note);
            } catch (const Error& e) {
                out.divergence = false;
                out.evidence.push_back(pair + ": (iii) " + e.what());
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

HausdorffReport hausdorff_probe(const StagedGraph& g, const PathFamily& F, const std::vector<InfinitePath>& limits,
                                const AnalysisOptions& opt) {
    HausdorffReport out;
    for (const InfinitePath& z : limits) out.per_limit.push_back(lower_strength(g, F, z, opt));
    auto converges = [&](std::size_t i) {
        return out.per_limit[i].certified && Extended::finite(1) <= out.per_limit[i].k;
    };
    for (std::size_t i = 0; i < limits.size() && !out.non_hausdorff; ++i) {
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            if (converges(i) && converges(j) && !shift_lag(g, limits[i], limits[j])) {
                out.non_hausdorff = true;
                out.pair = std::make_pair(i, j);
                break;
            }
        }
    }
    return out;
}

UniformBoundReport uniform_bound_probe(const StagedGraph& g, const FinitePath& Z, const std::vector<InfinitePath>& sample,
                                       Budget budget) {
    if (!g.principality().principal) throw NotPrincipal("orbit counts need a graph without cycles");
    UniformBoundReport out;
    for (const InfinitePath& x : sample) {
        CountResult c = orbit_count(g, x, Z, budget);
        if (c.exact()) {
            if (!out.sup || c.count > *out.sup) out.sup = c.count;
        } else {
            out.all_exact = false;
        }
        out.counts.push_back(std::move(c));
    }
    return out;
}

AuditReport audit_from_profile(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, std::size_t k,
                               const Profile& p, const AnalysisOptions& opt) {
    AuditReport out;
    out.k = k;
    out.conclusive = p.proved();
    const StrengthVerdict lower = lower_from_profile(p);
    out.liminf_route = Extended::finite(k) <= lower.k;
    out.evidence.push_back("item (5): lower strength " + lower.k.str() + (out.liminf_route ? " >= " : " < ") +
                           std::to_string(k));

    out.ratio_route = true;
    for (const ProfileRow& r : p.rows) {
        const bool ok = Extended::finite(BigInt(k) * r.lambda_z) <= r.liminf;
        if (!ok) {
            out.ratio_route = false;
            out.evidence.push_back("item (3): liminf " + r.liminf.str() + " < " + std::to_string(k) + " * " +
                                   r.lambda_z.str() + " at depth m=" + std::to_string(r.m));
        }
    }
    if (out.ratio_route) out.evidence.push_back("item (3): liminf >= k lambda_z at every depth");

    try {
        const auto ws = greedy_witnesses(g, F, z, k, p, opt);
        const WitnessCheck check = verify_witnesses(g, ws, F, z, opt);
        out.witness_route = check.passed();
        for (const std::string& e : check.evidence) out.evidence.push_back("item (1): " + e);
    } catch (const RefusalError& e) {
        out.witness_route = false;
        out.evidence.push_back(std::string("item (1): no witnesses: ") + e.what());
    }
    return out;
}

AuditReport consistency_audit(const StagedGraph& g, const PathFamily& F, const InfinitePath& z, std::size_t k,
                              const AnalysisOptions& opt) {
    return audit_from_profile(g, F, z, k, measure_profile(g, F, z, opt), opt);
}

}  // namespace pathcert
