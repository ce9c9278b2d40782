#pragma once

#include <string>
#include <vector>

#include "unaah/metrics.hpp"

namespace unaah {

// One comparison-table row: a model scored against one annotation set.
// Stats aggregate across seeds; `n` is the number of scored items.
struct TableRow {
    int annotation = 1;
    std::string model;
    Stat dice, core_dice, iou, iou_nobk;
    int n = 0;
};

TableRow row_from_report(int annotation, const std::string& model, const MetricReport& report);

// Fixed header: annotation,model,dice,core_dice,iou,iou_nobk,n,std
// (std is the dispersion of the dice column).
void write_metrics_csv(const std::string& path, const std::vector<TableRow>& rows);
std::string metrics_csv_text(const std::vector<TableRow>& rows);

// Same table plus per-metric mean/std and the filter definitions.
void write_metrics_json(const std::string& path, const std::vector<TableRow>& rows,
                        const std::vector<uint64_t>& seeds);

}  // namespace unaah
