#pragma once

#include <string>
#include <string_view>

#include "pscb/harness.hpp"

namespace pscb {

// Results CSV: header `t,<label>_mean,<label>_std,...`, one row per step, shortest round-trip
// float formatting. An aggregate without curves produces the header line only.
std::string export_csv(const Aggregate& agg);
Aggregate parse_results_csv(std::string_view text);

struct SvgOptions {
    int width = 800;
    int height = 500;
    bool std_band = true;
    std::string title = "Expected cumulative regret";
    std::string x_label = "t";
    std::string y_label = "cumulative regret";
    std::size_t max_points = 1000;  // polylines are subsampled to at most this many vertices
};

// Standalone SVG 1.1 line chart: axes, one polyline per curve, a legend and optional +-1 std
// bands. Throws InvalidArgument for an aggregate without curves.
std::string emit_svg(const Aggregate& agg, const SvgOptions& options = {});

}  // namespace pscb
