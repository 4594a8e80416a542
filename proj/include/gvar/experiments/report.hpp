#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "gvar/expectation.hpp"

namespace gvar::experiments {

using json = nlohmann::json;

struct CheckRecord {
    std::string name;
    std::map<std::string, double> values;
    std::map<std::string, double> std_errors;
    bool passed = true;
    bool informational = false; ///< reported, never gates the suite
    std::string detail;

    std::string verdict() const { return informational ? "info" : passed ? "pass" : "fail"; }
};

/// Record comparing two estimates; a failing record names both values and the
/// combined standard error.
CheckRecord comparison_record(std::string name, const std::string& label_a, const SumEstimate& a,
                              const std::string& label_b, const SumEstimate& b, const Comparison& c);

struct SuiteReport {
    std::string suite;
    std::vector<CheckRecord> checks;
    json results = json::object();
    json config = json::object();

    bool passed() const;
    std::vector<const CheckRecord*> failures() const;
};

inline constexpr const char* kToolVersion = GVAR_VERSION;

/// Keys sorted; no timestamps, so equal configs give byte-identical output.
json to_json(const SuiteReport& report);
std::string render_json(const SuiteReport& report);

/// RFC-4180 CSV, one row per (check, quantity): suite,check,quantity,value,std_error,verdict.
/// Numbers use the same text as the JSON report.
std::string render_csv(const SuiteReport& report);

/// Static SVG 1.1 line chart of y-series against x.
struct Series {
    std::string label;
    std::vector<double> y;
    std::string color;
};
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::vector<double>& x, const std::vector<Series>& series);

std::string format_number(double x);

} // namespace gvar::experiments
