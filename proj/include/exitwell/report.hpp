#pragma once
#include <string>

#include "exitwell/asym.hpp"
#include "exitwell/config.hpp"
#include "exitwell/json.hpp"

namespace exitwell {

// curve + potential assembled from a parsed config
struct Problem {
  DomainCurve curve;
  Potential pot;
};
Problem build_problem(const RunConfig& cfg);

struct ReportOptions {
  int threads = 0;               // MC worker override (0 = config/hardware)
  bool has_seed_override = false;
  std::uint64_t seed_override = 0;
};

// JSON documents for the CLI verbs.  Per-eps entries are isolated: a failure
// for one eps is recorded in that entry and the others still appear.
ordered_json inspect_report(const RunConfig& cfg);
ordered_json expand_report(const RunConfig& cfg);
ordered_json evaluate_report(const RunConfig& cfg);
ordered_json validate_report(const RunConfig& cfg, const ReportOptions& opt);
ordered_json full_report(const RunConfig& cfg, const ReportOptions& opt);

// human-readable rendering of any of the documents above
std::string render_text(const ordered_json& doc);

// side outputs: JSON file and CSV dumps as configured
void emit_output(const ordered_json& doc, const OutputConfig& out);

}  // namespace exitwell
