#pragma once

// Named experiments comparing predicted counts against brute-force
// computation. Predictions are catalog data: small integer expressions over
// the experiment parameters and oracle values, or "report" for checks that
// carry no prediction.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zk/mat.hpp"

namespace zk {

using json = nlohmann::ordered_json;

enum class Verdict { Pass, Fail, ReportOnly };
std::string to_string(Verdict v);

struct PredictionRule {
  std::string check;
  std::string expr;        // e.g. "gcd(3,q-1)", "q > n ? weyl_classes : report"
  std::string provenance;  // PAPER or DERIVED
  std::string basis;       // what the prediction rests on
};

struct CatalogEntry {
  std::string id;    // "E1"
  std::string slug;  // "gl2-zclasses"
  std::string summary;
  json defaults;  // parameter names and default values
  std::vector<PredictionRule> rules;
  const PredictionRule& rule(const std::string& check) const;
};

const std::vector<CatalogEntry>& catalog();
/// By id ("E3", case-insensitive) or slug; UsageError when unknown.
const CatalogEntry& catalog_entry(const std::string& id_or_slug);

/// Evaluates a prediction expression; nullopt for "report". Supports integer
/// literals, variables, + - * / % ^, comparisons, ?: and gcd(a,b).
std::optional<std::int64_t> evaluate_prediction(const std::string& expr, const std::map<std::string, std::int64_t>& env);

struct Check {
  std::string name;
  json predicted;  // null when report-only
  json computed;
  std::string provenance;
  std::string basis;
  Verdict verdict = Verdict::ReportOnly;
};

struct Experiment {
  std::string id, slug;
  json params;
  std::vector<Check> checks;
  Verdict verdict = Verdict::ReportOnly;
  json witnesses = json::object();
  std::optional<std::string> error;  // set by verify_suite when the run threw
  double runtime_s = 0;
  const Check* find(const std::string& name) const;
};

/// Params are merged over the catalog defaults; unknown keys are a UsageError.
/// Throws GuardViolation / BoundExceeded / DomainError from the engines.
Experiment run_experiment(const std::string& id, const json& params = json::object());

struct SuiteSummary {
  std::string name;
  std::vector<Experiment> runs;
  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
  double runtime_s() const;
};

/// (experiment id, params) pairs of a suite: "smoke", "paper" or "full".
std::vector<std::pair<std::string, json>> suite_plan(const std::string& name);
/// Runs the plan; errors inside a run are recorded as failures.
SuiteSummary verify_suite(const std::string& name);

json to_json(const Experiment& e, bool with_runtime = false);
json to_json(const SuiteSummary& s, bool with_runtime = false);
/// One row per check: id, params, check, predicted, computed, verdict.
std::string to_markdown(const std::vector<Experiment>& runs);
/// "runtime: total 1.23 s (E1 0.10 s, ...)"
std::string runtime_footer(const std::vector<Experiment>& runs);
/// "q=3, which=gl2/F2"
std::string params_string(const json& params);

/// One u_beta per SL_n(F_q)-class of regular unipotents of that shape,
/// found by pairwise sl_conjugate_test (no group table).
std::vector<Mat> regular_unipotent_class_reps(const Field& f, int n);

/// Number of partitions of n.
std::uint64_t partition_count(int n);

}  // namespace zk
