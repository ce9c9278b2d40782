#pragma once

#include <string>
#include <vector>

#include "unaah/config.hpp"
#include "unaah/report_io.hpp"

namespace unaah {

struct ExperimentResult {
    std::vector<TableRow> rows;  // annotation-major, plan variant order
    std::string csv_path;
    std::string json_path;
};

// Trains every (variant, seed), scores each model against both annotation
// sets on the test split, aggregates across seeds, and writes the table plus
// per-sample overlays under plan.output_dir.
ExperimentResult run_experiment(const ExperimentPlan& plan);

}  // namespace unaah
