// pathcert: command-line front end for the path groupoid analyses.
//
// Exit codes: 0 success, 1 analysis refusal (or a golden mismatch in
// `examples`), 2 input error.

#include "pathcert/analysis.hpp"
#include "pathcert/dsl.hpp"
#include "pathcert/errors.hpp"
#include "pathcert/random_graph.hpp"
#include "pathcert/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace pathcert;

namespace {

constexpr int kOk = 0;
constexpr int kRefusal = 1;
constexpr int kInput = 2;

struct Flags {
    std::int64_t ladder = 5;
    std::string window = "1..12";
    std::int64_t budget_periods = Budget{}.periods;
    std::int64_t budget_length = Budget{}.length;
    bool json = false;
    std::uint64_t seed = 1;
};

Window parse_window(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw BoundsError("window must look like A..B, got '" + s + "'");
    try {
        Window w{std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
        if (w.hi < w.lo) throw BoundsError("empty window " + s);
        return w;
    } catch (const std::logic_error&) {
        throw BoundsError("window must look like A..B, got '" + s + "'");
    }
}

AnalysisOptions options(const Flags& f) {
    AnalysisOptions o;
    o.ladder = f.ladder;
    o.window = parse_window(f.window);
    o.budget = Budget{f.budget_periods, f.budget_length};
    return o;
}

Document load(const std::string& file) { return parse_document(read_file(file)); }

// ---------------------------------------------------------------------------
// Bundled example corpus

struct Rendered {
    std::string json;
    std::string text;
};

struct Case {
    std::string name;
    std::function<Rendered(const fs::path& fixtures)> run;
};

Rendered strength_case(const fs::path& file, const std::string& family, const std::string& limit, bool full) {
    const AnalysisReport r = analyze(load(file.string()), family, limit, AnalysisOptions{});
    return {canonical_dump(to_json(r)), to_text(r, full)};
}

std::vector<Case> corpus() {
    std::vector<Case> cs;
    for (const char* f : {"ladder2", "loop1", "fork"}) {
        cs.push_back({std::string("principal-") + f, [f](const fs::path& dir) {
                          const Document d = load((dir / (std::string(f) + ".graph")).string());
                          const PrincipalityReport r = is_principal(d.graph);
                          return Rendered{canonical_dump(principal_json(d.graph, r)), principal_text(r, d.graph)};
                      }});
    }
    auto strength = [&](const std::string& name, const std::string& file, const std::string& family,
                        const std::string& limit, bool full) {
        cs.push_back({name, [=](const fs::path& dir) { return strength_case(dir / file, family, limit, full); }});
    };
    strength("strength-ladder2", "ladder2.graph", "x", "z", true);
    for (int k = 2; k <= 5; ++k) {
        strength("strength-ladderk" + std::to_string(k), "ladderk" + std::to_string(k) + ".graph", "x", "z", true);
    }
    strength("strength-alt23", "alt23.graph", "x", "z", true);
    strength("strength-fork-x", "fork.graph", "seq", "x", true);
    strength("strength-fork-y", "fork.graph", "seq", "y", true);
    strength("multiplicity-ladder2", "ladder2.graph", "x", "z", false);
    strength("multiplicity-alt23", "alt23.graph", "x", "z", false);
    strength("multiplicity-exp2", "exp2.graph", "x", "z", false);
    cs.push_back({"hausdorff-fork", [](const fs::path& dir) {
                      const HausdorffSummary h =
                          analyze_hausdorff(load((dir / "fork.graph").string()), "seq", {"x", "y"}, AnalysisOptions{});
                      return Rendered{canonical_dump(to_json(h)), to_text(h)};
                  }});
    return cs;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_examples(const fs::path& fixtures, const fs::path& golden, bool update, bool json) {
    Json agg;
    Json cases = Json::array();
    bool all_ok = true;
    for (const Case& c : corpus()) {
        std::string status;
        std::string detail;
        try {
            const Rendered r = c.run(fixtures);
            const fs::path gj = golden / (c.name + ".json");
            const fs::path gt = golden / (c.name + ".txt");
            if (update) {
                fs::create_directories(golden);
                std::ofstream(gj, std::ios::binary) << r.json;
                std::ofstream(gt, std::ios::binary) << r.text;
                status = "updated";
            } else if (!fs::exists(gj) || !fs::exists(gt)) {
                status = "missing";
                detail = "no golden file for " + c.name;
            } else if (slurp(gj) != r.json || slurp(gt) != r.text) {
                status = "diff";
                detail = slurp(gj) != r.json ? gj.filename().string() : gt.filename().string();
            } else {
                status = "ok";
            }
        } catch (const Error& e) {
            status = "error";
            detail = e.what();
        }
        const bool ok = status == "ok" || status == "updated";
        all_ok = all_ok && ok;
        if (!json) std::cout << (ok ? "  " : "! ") << status << "  " << c.name << (detail.empty() ? "" : ": " + detail) << "\n";
        Json jc{{"name", c.name}, {"status", status}};
        if (!detail.empty()) jc["detail"] = detail;
        cases.push_back(std::move(jc));
    }
    agg["cases"] = std::move(cases);
    agg["passed"] = all_ok;
    if (json) std::cout << canonical_dump(agg);
    return all_ok ? kOk : kRefusal;
}

// Consistency audit over seeded random graphs (period <= 2, <= 3 local
// vertices, <= 3 parallel edges).
int run_random_audit(int count, std::uint64_t seed, const AnalysisOptions& opt, bool json) {
    std::mt19937_64 rng(seed);
    int conclusive = 0, agreed = 0, skipped = 0;
    Json failures = Json::array();
    while (conclusive < count) {
        const std::string text = random_graphs::random_document(random_graphs::random_spec(rng));
        const Document d = parse_document(text);
        const Profile p = measure_profile(d.graph, d.family("x"), d.path("z"), opt);
        if (!p.proved()) {
            ++skipped;
            continue;
        }
        const Extended k0 = lower_from_profile(p).k;
        const std::size_t k = k0.is_infinite() ? 3 : static_cast<std::size_t>(*k0.value) + (conclusive % 2);
        const AuditReport a = audit_from_profile(d.graph, d.family("x"), d.path("z"), std::max<std::size_t>(k, 1), p, opt);
        ++conclusive;
        if (a.agreement()) {
            ++agreed;
        } else {
            failures.push_back(Json{{"graph", text}, {"k", a.k}, {"evidence", a.evidence}});
        }
    }
    if (json) {
        std::cout << canonical_dump(Json{{"seed", seed},
                                         {"conclusive", conclusive},
                                         {"agreed", agreed},
                                         {"skipped_empirical", skipped},
                                         {"disagreements", failures}});
    } else {
        std::cout << "random audit, seed " << seed << ": " << agreed << "/" << conclusive
                  << " conclusive samples agree (" << skipped << " empirical samples skipped)\n";
        for (const auto& f : failures) std::cout << "DISAGREEMENT at k=" << f["k"] << ":\n" << f["graph"].get<std::string>();
    }
    return failures.empty() ? kOk : kRefusal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certify convergence strength and multiplicity bounds on path groupoids of staged graphs"};
    app.require_subcommand(1);
    Flags flags;
    auto analysis_flags = [&](CLI::App* c) {
        c->add_option("--ladder", flags.ladder, "ladder depth M")->capture_default_str();
        c->add_option("--window", flags.window, "index window A..B")->capture_default_str();
        c->add_option("--budget-periods", flags.budget_periods, "tail periods followed past the cylinder")
            ->capture_default_str();
        c->add_option("--budget-length", flags.budget_length, "extra edges for reach patterns to settle")
            ->capture_default_str();
        c->add_flag("--json", flags.json, "emit JSON");
        c->add_option("--seed", flags.seed, "seed for randomized sweeps")->capture_default_str();
    };

    std::vector<std::string> files;
    std::string file, family, limit;
    std::vector<std::string> limits;

    auto* validate = app.add_subcommand("validate", "parse and validate graph files");
    validate->add_option("files", files, "graph files")->required();

    auto* principal = app.add_subcommand("principal", "decide whether the path groupoid is principal");
    principal->add_option("file", file)->required();
    principal->add_flag("--json", flags.json, "emit JSON");

    auto* strength = app.add_subcommand("strength", "certify the strength of convergence");
    auto* multiplicity = app.add_subcommand("multiplicity", "bound M_L and M_U");
    for (auto* c : {strength, multiplicity}) {
        c->add_option("file", file)->required();
        c->add_option("--family", family, "family name")->required();
        c->add_option("--limit", limit, "limit path name")->required();
        analysis_flags(c);
    }

    auto* hausdorff = app.add_subcommand("hausdorff", "look for two inequivalent limits");
    hausdorff->add_option("file", file)->required();
    hausdorff->add_option("--family", family)->required();
    hausdorff->add_option("--limits", limits, "limit path names")->required()->delimiter(',');
    analysis_flags(hausdorff);

    auto* examples = app.add_subcommand("examples", "run the bundled corpus against the golden reports");
    std::string fixtures_dir = PATHCERT_SOURCE_DIR "/fixtures";
    std::string golden_dir = PATHCERT_SOURCE_DIR "/golden";
    bool update = false;
    int random_count = 0;
    examples->add_option("--fixtures", fixtures_dir)->capture_default_str();
    examples->add_option("--golden", golden_dir)->capture_default_str();
    examples->add_flag("--update", update, "rewrite the golden files");
    examples->add_option("--random", random_count, "also audit this many seeded random graphs");
    analysis_flags(examples);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*validate) {
            bool ok = true;
            for (const std::string& f : files) {
                try {
                    const GraphSpec spec = parse_graph_spec(read_file(f));
                    const auto vs = validate_graph(spec);
                    for (const Violation& v : vs) std::cerr << f << ": " << v.message << "\n";
                    if (vs.empty()) {
                        parse_document(read_file(f));
                        std::cout << f << ": ok\n";
                    }
                    ok = ok && vs.empty();
                } catch (const InputError& e) {
                    std::cerr << f << ": " << e.what() << "\n";
                    ok = false;
                }
            }
            return ok ? kOk : kInput;
        }
        if (*principal) {
            const Document d = load(file);
            const PrincipalityReport r = is_principal(d.graph);
            std::cout << (flags.json ? canonical_dump(principal_json(d.graph, r)) : principal_text(r, d.graph));
            return kOk;
        }
        if (*strength || *multiplicity) {
            const AnalysisReport r = analyze(load(file), family, limit, options(flags));
            std::cout << (flags.json ? canonical_dump(to_json(r)) : to_text(r, static_cast<bool>(*strength)));
            return kOk;
        }
        if (*hausdorff) {
            const HausdorffSummary h = analyze_hausdorff(load(file), family, limits, options(flags));
            std::cout << (flags.json ? canonical_dump(to_json(h)) : to_text(h));
            return kOk;
        }
        if (*examples) {
            int code = run_examples(fixtures_dir, golden_dir, update, flags.json);
            if (random_count > 0) code = std::max(code, run_random_audit(random_count, flags.seed, options(flags), flags.json));
            return code;
        }
    } catch (const RefusalError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    }
    return kOk;
}
