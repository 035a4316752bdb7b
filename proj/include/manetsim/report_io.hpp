#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "manetsim/metrics.hpp"

namespace manetsim {

// Canonical JSON document for one report. When per_seed is non-empty the
// summary is their mean and the document nests the individual reports; field
// order and number formatting are fixed so identical runs serialize to
// identical bytes.
std::string render_report_json(const MetricsReport& summary,
                               const std::vector<MetricsReport>& per_seed);

// One CSV per time series, keyed by file name. Columns: interval_start,value.
std::map<std::string, std::string> series_csv_files(const SeriesSet& series);

struct ComparisonRow {
    std::string name;
    std::optional<double> original;
    std::optional<double> proposed;
    std::optional<double> delta;  // proposed - original, when both sides exist
};

struct Comparison {
    std::vector<ComparisonRow> scalars;
    // proposed - original, elementwise per interval.
    std::map<std::string, std::vector<double>> series_delta;
};

// Side-by-side deltas for two reports of the same experiment. Reports whose
// scenario fingerprints or seed lists differ are rejected.
Comparison compare_reports(const MetricsReport& original, const MetricsReport& proposed);

// Aligned text rendering of the scalar rows.
std::string comparison_table(const Comparison& c);

// JSON rendering including the series deltas.
std::string comparison_json(const Comparison& c);

}  // namespace manetsim
