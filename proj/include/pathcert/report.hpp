#pragma once

#include "pathcert/analysis.hpp"
#include "pathcert/dsl.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pathcert {

using Json = nlohmann::ordered_json;

/// Integers up to 2^53 - 1 as JSON numbers, larger ones as decimal strings.
Json big_json(const BigInt& v);
/// Finite values as big_json, infinity as the string "inf".
Json extended_json(const Extended& v);

/// Two-space indented dump with a trailing newline; the canonical form.
std::string canonical_dump(const Json& j);

/// Everything the strength and multiplicity commands report for one
/// (family, limit) pair.
struct AnalysisReport {
    std::string graph;
    std::string family;
    std::string limit;
    AnalysisOptions options;
    Profile profile;
    StrengthVerdict lower;
    std::optional<StrengthVerdict> upper;
    std::string upper_refusal;  // set when the upper criterion was refused
    MultiplicityReport multiplicity;
    InfiniteProbe infinite;
    std::vector<WitnessFamily> witnesses;
    std::string witness_note;
    std::optional<AuditReport> audit;
};

/// Runs the profile once and derives every verdict from it. Witnesses and the
/// audit use k = k_lower when that is a positive integer.
AnalysisReport analyze(const Document& doc, const std::string& family, const std::string& limit,
                       const AnalysisOptions& opt);

Json to_json(const AnalysisReport& r);
/// `full` adds the witness and audit sections.
std::string to_text(const AnalysisReport& r, bool full = true);

struct HausdorffSummary {
    std::string graph;
    std::string family;
    std::vector<std::string> limits;
    AnalysisOptions options;
    HausdorffReport report;
};

HausdorffSummary analyze_hausdorff(const Document& doc, const std::string& family,
                                   const std::vector<std::string>& limits, const AnalysisOptions& opt);
Json to_json(const HausdorffSummary& h);
std::string to_text(const HausdorffSummary& h);

Json principal_json(const StagedGraph& g, const PrincipalityReport& r);
std::string principal_text(const PrincipalityReport& r, const StagedGraph& g);

}  // namespace pathcert
