#include "unaah/report_io.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "unaah/errors.hpp"

namespace unaah {

namespace {

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

nlohmann::ordered_json stat_json(const Stat& s) {
    return {{"mean", s.mean}, {"std", s.stddev}, {"n", s.n}};
}

}  // namespace

TableRow row_from_report(int annotation, const std::string& model, const MetricReport& report) {
    TableRow row;
    row.annotation = annotation;
    row.model = model;
    row.n = report.n_items;
    row.dice = {report.dice, report.dispersion, report.n_items};
    row.core_dice = {report.core_dice.value_or(0.0), 0.0, report.n_core};
    row.iou = {report.iou, 0.0, report.n_items};
    row.iou_nobk = {report.iou_nobk.value_or(0.0), 0.0, report.n_core};
    return row;
}

std::string metrics_csv_text(const std::vector<TableRow>& rows) {
    std::string out = "annotation,model,dice,core_dice,iou,iou_nobk,n,std\n";
    for (const TableRow& r : rows) {
        out += std::to_string(r.annotation) + "," + r.model;
        out += "," + fixed6(r.dice.mean);
        out += "," + fixed6(r.core_dice.mean);
        out += "," + fixed6(r.iou.mean);
        out += "," + fixed6(r.iou_nobk.mean);
        out += "," + std::to_string(r.n);
        out += "," + fixed6(r.dice.stddev) + "\n";
    }
    return out;
}

void write_metrics_csv(const std::string& path, const std::vector<TableRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << metrics_csv_text(rows);
}

void write_metrics_json(const std::string& path, const std::vector<TableRow>& rows,
                        const std::vector<uint64_t>& seeds) {
    nlohmann::ordered_json doc;
    doc["seeds"] = seeds;
    doc["filters"] = {
        {"core_dice", "items where at least one mask has foreground"},
        {"iou_nobk", "items where the annotation or the prediction has foreground"}};
    doc["rows"] = nlohmann::ordered_json::array();
    for (const TableRow& r : rows) {
        nlohmann::ordered_json jr;
        jr["annotation"] = r.annotation;
        jr["model"] = r.model;
        jr["n"] = r.n;
        jr["dice"] = stat_json(r.dice);
        jr["core_dice"] = stat_json(r.core_dice);
        jr["iou"] = stat_json(r.iou);
        jr["iou_nobk"] = stat_json(r.iou_nobk);
        doc["rows"].push_back(jr);
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace unaah
