#include "pathcert/report.hpp"

#include "pathcert/errors.hpp"

#include <cstdio>
#include <sstream>

namespace pathcert {

Json big_json(const BigInt& v) {
    static const BigInt limit = (BigInt(1) << 53) - 1;
    if (v <= limit && v >= -limit) return Json(v.convert_to<std::int64_t>());
    return Json(v.str());
}

Json extended_json(const Extended& v) { return v.is_infinite() ? Json("inf") : big_json(*v.value); }

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

const char* class_proof_name(ClassProof p) {
    switch (p) {
        case ClassProof::Periodic: return "periodic";
        case ClassProof::Growth: return "growth";
        case ClassProof::Empirical: return "empirical";
    }
    return "?";
}

Extended ratio(const Extended& v, const BigInt& lambda) {
    return v.is_infinite() ? v : Extended::finite(floor_div(*v.value, lambda));
}

Json bound_json(const Bound& b) { return Json::array({extended_json(b.lo), extended_json(b.hi)}); }

Json tail_json(const TailTemplate& t) {
    Json j;
    if (t.kind == TailTemplate::Kind::Ray) {
        j["kind"] = "ray";
        j["ray"] = t.ray;
    } else {
        j["kind"] = "descent";
        j["pattern"] = t.pattern;
    }
    if (t.stage_offset) j["stage_offset"] = *t.stage_offset;
    return j;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

std::string bound_text(const Bound& b) {
    std::string s = "[" + b.lo.str() + ", " + b.hi.str() + "]";
    if (b.pinched()) s += " pinched";
    return s;
}

std::string window_text(const Window& w) { return std::to_string(w.lo) + ".." + std::to_string(w.hi); }

// Deepest row where the depth-wise k attains the verdict.
std::int64_t binding_depth(const StrengthVerdict& v) {
    std::int64_t at = 0;
    for (std::size_t i = 0; i < v.k_by_depth.size(); ++i) {
        if (v.k_by_depth[i] == v.k) at = static_cast<std::int64_t>(i) + 1;
    }
    return at;
}

}  // namespace

AnalysisReport analyze(const Document& doc, const std::string& family, const std::string& limit,
                       const AnalysisOptions& opt) {
    AnalysisReport r;
    r.graph = doc.graph.name();
    r.family = family;
    r.limit = limit;
    r.options = opt;
    const PathFamily& F = doc.family(family);
    const InfinitePath& z = doc.path(limit);
    r.profile = measure_profile(doc.graph, F, z, opt);
    r.lower = lower_from_profile(r.profile);
    try {
        r.upper = upper_from_profile(doc.graph, F, r.profile);
    } catch (const NoOrbitConvergence& e) {
        r.upper_refusal = e.what();
    }
    r.multiplicity = multiplicity_from_profile(doc.graph, F, r.profile);
    r.infinite = infinite_from_profile(r.profile);

    if (r.lower.k.is_infinite()) {
        r.witness_note = "k_lower is unbounded; no finite witness set to construct";
        return r;
    }
    const BigInt& k = *r.lower.k.value;
    if (k == 0) {
        r.witness_note = "k_lower is 0; nothing to witness";
        return r;
    }
    const auto kk = k.convert_to<std::size_t>();
    if (!r.profile.proved()) {
        r.witness_note = "status empirical; closed-form witnesses are withheld";
    } else {
        try {
            r.witnesses = greedy_witnesses(doc.graph, F, z, kk, r.profile, opt);
        } catch (const RefusalError& e) {
            r.witness_note = e.what();
        }
    }
    r.audit = audit_from_profile(doc.graph, F, z, kk, r.profile, opt);
    return r;
}

Json to_json(const AnalysisReport& r) {
    Json j;
    j["graph"] = r.graph;
    j["family"] = r.family;
    j["limit"] = r.limit;
    j["ladder_depth"] = r.options.ladder;
    j["window"] = Json::array({r.options.window.lo, r.options.window.hi});
    j["period"] = r.profile.period;

    Json rows = Json::array();
    for (const ProfileRow& row : r.profile.rows) {
        Json jr;
        jr["m"] = row.m;
        jr["lambda_z"] = big_json(row.lambda_z);
        Json counts = Json::array();
        for (const auto& c : row.counts) counts.push_back(c ? extended_json(*c) : Json(nullptr));
        jr["counts"] = std::move(counts);
        jr["liminf"] = extended_json(row.liminf);
        jr["limsup"] = extended_json(row.limsup);
        jr["stabilization"] = stabilization_name(row.stabilization);
        // liminf carries the best "frequently" ratio, limsup the best "eventually" one.
        jr["ratio_frequently"] = extended_json(ratio(row.liminf, row.lambda_z));
        jr["ratio_eventually"] = extended_json(ratio(row.limsup, row.lambda_z));
        Json classes = Json::array();
        for (const ClassLimit& c : row.classes) {
            classes.push_back(Json{{"residue", c.residue},
                                   {"from", c.from},
                                   {"value", c.proof == ClassProof::Empirical ? Json(nullptr) : extended_json(c.value)},
                                   {"proof", class_proof_name(c.proof)},
                                   {"note", c.note}});
        }
        jr["classes"] = std::move(classes);
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);

    Json v;
    v["k_lower"] = extended_json(r.lower.k);
    v["k_upper"] = r.upper ? extended_json(r.upper->k) : Json(0);
    v["ml"] = bound_json(r.multiplicity.ml);
    v["mu"] = bound_json(r.multiplicity.mu);
    v["status"] = r.profile.proved() ? "certified" : "empirical";
    if (r.upper && r.upper->subsequence) {
        v["subsequence"] = Json{{"modulus", r.upper->subsequence->modulus},
                                {"residues", r.upper->subsequence->residues},
                                {"description", r.upper->subsequence->describe()}};
    } else {
        v["subsequence"] = nullptr;
    }
    if (!r.upper_refusal.empty()) v["upper_refusal"] = r.upper_refusal;
    v["infinite"] = r.infinite.kind == InfiniteProbe::Kind::Infinite  ? "infinite"
                    : r.infinite.kind == InfiniteProbe::Kind::Finite ? "finite"
                                                                      : "unknown";
    v["evidence"] = r.multiplicity.evidence;
    j["verdicts"] = std::move(v);

    Json ws = Json::array();
    for (const WitnessFamily& w : r.witnesses) {
        Json jw;
        jw["index"] = w.index + 1;
        jw["modulus"] = w.modulus;
        Json per = Json::array();
        for (std::size_t c = 0; c < w.shapes.size(); ++c) {
            const WitnessShape& s = w.shapes[c];
            per.push_back(Json{{"residue", c},
                               {"start", w.start[c]},
                               {"back", s.rule.back},
                               {"chain", s.rule.chain},
                               {"tail", tail_json(s.rule.tail)},
                               {"lag", s.lag}});
        }
        jw["classes"] = std::move(per);
        ws.push_back(std::move(jw));
    }
    j["witnesses"] = std::move(ws);
    if (!r.witness_note.empty()) j["witness_note"] = r.witness_note;

    if (r.audit) {
        const AuditReport& a = *r.audit;
        j["audit"] = Json{{"k", a.k},
                          {"routes", Json{{"witness", a.witness_route},
                                          {"liminf", a.liminf_route},
                                          {"ratio", a.ratio_route}}},
                          {"agreement", a.agreement()},
                          {"conclusive", a.conclusive},
                          {"evidence", a.evidence}};
    } else {
        j["audit"] = nullptr;
    }
    return j;
}

std::string to_text(const AnalysisReport& r, bool full) {
    std::ostringstream o;
    o << "graph " << r.graph << ", family " << r.family << " -> limit " << r.limit << "\n";
    o << "ladder depth M=" << r.options.ladder << ", window n=" << window_text(r.options.window)
      << ", n-period " << r.profile.period << "\n\n";
    o << "  m  lambda_z  liminf  limsup  stabilization     c_n(W_m), n=" << window_text(r.options.window) << "\n";
    for (const ProfileRow& row : r.profile.rows) {
        std::string counts;
        for (const auto& c : row.counts) counts += (counts.empty() ? "" : " ") + (c ? c->str() : std::string("-"));
        char line[128];
        std::snprintf(line, sizeof line, "%3lld  %-8s  %-6s  %-6s  %-16s  ", static_cast<long long>(row.m),
                      row.lambda_z.str().c_str(), row.liminf.str().c_str(), row.limsup.str().c_str(),
                      stabilization_name(row.stabilization));
        o << line << counts << "\n";
    }
    o << "  (liminf/lambda_z bounds the frequent ratio, limsup/lambda_z the eventual one)\n\n";

    const std::string status = r.profile.proved() ? "certified" : "empirical";
    o << "k_lower = " << r.lower.k.str() << "  [item (5) of the liminf equivalence, depth m=" << binding_depth(r.lower)
      << "; " << status << "]\n";
    if (r.upper) {
        o << "k_upper = " << r.upper->k.str() << "  [item (5) of the limsup equivalence, depth m="
          << binding_depth(*r.upper) << "; " << status << "]";
        if (r.upper->subsequence && !r.upper->subsequence->residues.empty()) {
            o << ", subsequence " << r.upper->subsequence->describe();
        }
        o << "\n";
    } else {
        o << "k_upper = 0  [" << r.upper_refusal << "]\n";
    }
    o << "M_L in " << bound_text(r.multiplicity.ml) << "\n";
    o << "M_U in " << bound_text(r.multiplicity.mu) << "\n";
    for (const std::string& e : r.multiplicity.evidence) o << "  " << e << "\n";
    if (!r.multiplicity.consistent()) {
        o << "  note: the bounds are not ordered at this finite depth; lambda_z exceeds 1 somewhere on the ladder\n";
    }
    o << "infinite multiplicity probe: " << r.infinite.evidence << "\n";
    if (!full) return o.str();

    if (!r.witnesses.empty()) {
        o << "\nwitnesses (k=" << r.witnesses.size() << "), gamma_n = (y_n, lag, x_n):\n";
        for (const WitnessFamily& w : r.witnesses) {
            for (std::size_t c = 0; c < w.shapes.size(); ++c) {
                const WitnessShape& s = w.shapes[c];
                o << "  w" << w.index + 1;
                if (w.modulus > 1) o << " [n = " << c << " mod " << w.modulus << "]";
                o << ": n >= " << w.start[c] << ", leave the limit " << s.rule.back << " stage(s) above target, chain "
                  << join(s.rule.chain, ".") << ", tail ";
                if (s.rule.tail.kind == TailTemplate::Kind::Ray) {
                    o << "ray " << s.rule.tail.ray;
                } else {
                    o << "descent [" << join(s.rule.tail.pattern, ", ") << "]";
                }
                o << ", lag " << s.lag << "\n";
            }
        }
    }
    if (!r.witness_note.empty()) o << "witnesses: " << r.witness_note << "\n";
    if (r.audit) {
        const AuditReport& a = *r.audit;
        auto mark = [](bool b) { return b ? "holds" : "fails"; };
        o << "\naudit at k=" << a.k << ": item (1) witnesses " << mark(a.witness_route) << ", item (3) ratio "
          << mark(a.ratio_route) << ", item (5) liminf " << mark(a.liminf_route) << " -> "
          << (a.agreement() ? "agreement" : "DISAGREEMENT") << (a.conclusive ? "" : " (inconclusive)") << "\n";
        for (const std::string& e : a.evidence) o << "  " << e << "\n";
    }
    return o.str();
}

HausdorffSummary analyze_hausdorff(const Document& doc, const std::string& family,
                                   const std::vector<std::string>& limits, const AnalysisOptions& opt) {
    HausdorffSummary h;
    h.graph = doc.graph.name();
    h.family = family;
    h.limits = limits;
    h.options = opt;
    std::vector<InfinitePath> zs;
    for (const std::string& l : limits) zs.push_back(doc.path(l));
    h.report = hausdorff_probe(doc.graph, doc.family(family), zs, opt);
    return h;
}

Json to_json(const HausdorffSummary& h) {
    Json j;
    j["graph"] = h.graph;
    j["family"] = h.family;
    j["ladder_depth"] = h.options.ladder;
    j["window"] = Json::array({h.options.window.lo, h.options.window.hi});
    Json per = Json::array();
    for (std::size_t i = 0; i < h.limits.size(); ++i) {
        per.push_back(Json{{"limit", h.limits[i]},
                           {"k_lower", extended_json(h.report.per_limit[i].k)},
                           {"certified", h.report.per_limit[i].certified}});
    }
    j["limits"] = std::move(per);
    j["non_hausdorff"] = h.report.non_hausdorff;
    if (h.report.pair) {
        j["pair"] = Json::array({h.limits[h.report.pair->first], h.limits[h.report.pair->second]});
    } else {
        j["pair"] = nullptr;
    }
    return j;
}

std::string to_text(const HausdorffSummary& h) {
    std::ostringstream o;
    o << "graph " << h.graph << ", family " << h.family << ", ladder depth M=" << h.options.ladder << ", window n="
      << window_text(h.options.window) << "\n";
    for (std::size_t i = 0; i < h.limits.size(); ++i) {
        const StrengthVerdict& v = h.report.per_limit[i];
        o << "  limit " << h.limits[i] << ": k_lower = " << v.k.str() << " [item (5), "
          << (v.certified ? "certified" : "empirical") << "]\n";
    }
    if (h.report.non_hausdorff) {
        o << "not Hausdorff: the sequence converges to " << h.limits[h.report.pair->first] << " and "
          << h.limits[h.report.pair->second] << ", which lie in different orbits\n";
    } else {
        o << "no violation among the supplied limits\n";
    }
    return o.str();
}

Json principal_json(const StagedGraph& g, const PrincipalityReport& r) {
    Json j;
    j["graph"] = g.name();
    j["principal"] = r.principal;
    Json cycle = Json::array();
    for (const EdgeRef& e : r.cycle) cycle.push_back(g.label(e));
    j["cycle"] = std::move(cycle);
    return j;
}

std::string principal_text(const PrincipalityReport& r, const StagedGraph& g) {
    if (r.principal) return "principal\n";
    std::vector<std::string> labels;
    for (const EdgeRef& e : r.cycle) labels.push_back(g.label(e));
    return "not principal, cycle: [" + join(labels, ", ") + "]\n";
}

}  // namespace pathcert
