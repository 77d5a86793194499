#include "dietsonar/metrics/metrics.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace dietsonar::metrics {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t n = 0;
    for (const auto& row : counts)
        for (const auto v : row) n += v;
    return n;
}

std::int64_t ConfusionMatrix::row_sum(int truth_class) const {
    std::int64_t n = 0;
    for (const auto v : counts[static_cast<std::size_t>(truth_class)]) n += v;
    return n;
}

std::int64_t ConfusionMatrix::col_sum(int pred_class) const {
    std::int64_t n = 0;
    for (const auto& row : counts) n += row[static_cast<std::size_t>(pred_class)];
    return n;
}

std::array<std::array<double, kNumClasses>, kNumClasses> ConfusionMatrix::row_normalized() const {
    std::array<std::array<double, kNumClasses>, kNumClasses> out{};
    for (int i = 0; i < kNumClasses; ++i) {
        const auto sum = row_sum(i);
        if (sum == 0) continue;
        for (int j = 0; j < kNumClasses; ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<double>(counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) /
                static_cast<double>(sum);
    }
    return out;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (int i = 0; i < kNumClasses; ++i)
        for (int j = 0; j < kNumClasses; ++j)
            counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                other.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return *this;
}

ConfusionMatrix confusion(std::span<const ActivityClass> truth, std::span<const ActivityClass> pred) {
    if (truth.size() != pred.size()) throw ArgumentError("confusion: length mismatch");
    ConfusionMatrix cm;
    for (std::size_t k = 0; k < truth.size(); ++k)
        ++cm.counts[static_cast<std::size_t>(truth[k])][static_cast<std::size_t>(pred[k])];
    return cm;
}

F1Report macro_f1(const ConfusionMatrix& cm) {
    F1Report report;
    double sum_p = 0.0, sum_r = 0.0, sum_f1 = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        const auto tp = cm.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        const auto fp = cm.col_sum(c) - tp;
        const auto fn = cm.row_sum(c) - tp;
        ClassScores& s = report.per_class[static_cast<std::size_t>(c)];
        s.support = tp + fn;
        s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                                              : 0.0;
        if (s.support > 0) {
            ++report.classes_in_macro;
            sum_p += s.precision;
            sum_r += s.recall;
            sum_f1 += s.f1;
        }
    }
    if (report.classes_in_macro > 0) {
        report.macro_precision = sum_p / report.classes_in_macro;
        report.macro_recall = sum_r / report.classes_in_macro;
        report.macro_f1 = sum_f1 / report.classes_in_macro;
    }
    return report;
}

double mae(std::span<const double> truth, std::span<const double> pred) {
    if (truth.empty()) throw ArgumentError("mae: empty input");
    if (truth.size() != pred.size()) throw ArgumentError("mae: length mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) sum += std::abs(truth[k] - pred[k]);
    return sum / static_cast<double>(truth.size());
}

double cohens_kappa(std::span<const ActivityClass> a, std::span<const ActivityClass> b) {
    if (a.empty()) throw ArgumentError("kappa: empty input");
    if (a.size() != b.size()) throw ArgumentError("kappa: length mismatch");
    const double n = static_cast<double>(a.size());
    std::array<double, kNumClasses> marg_a{}, marg_b{};
    double agree = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        marg_a[static_cast<std::size_t>(a[k])] += 1.0;
        marg_b[static_cast<std::size_t>(b[k])] += 1.0;
        if (a[k] == b[k]) agree += 1.0;
    }
    const double p_o = agree / n;
    double p_e = 0.0;
    for (int c = 0; c < kNumClasses; ++c)
        p_e += (marg_a[static_cast<std::size_t>(c)] / n) * (marg_b[static_cast<std::size_t>(c)] / n);
    if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

std::string f1_report_to_json(const F1Report& report, const ConfusionMatrix& cm) {
    nlohmann::json j;
    for (int c = 0; c < kNumClasses; ++c) {
        const auto& s = report.per_class[static_cast<std::size_t>(c)];
        j["per_class"][std::string(kClassNames[static_cast<std::size_t>(c)])] = {
            {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
    }
    j["macro_precision"] = report.macro_precision;
    j["macro_recall"] = report.macro_recall;
    j["macro_f1"] = report.macro_f1;
    j["classes_in_macro"] = report.classes_in_macro;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < kNumClasses; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j2 = 0; j2 < kNumClasses; ++j2)
            row.push_back(cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)]);
        rows.push_back(std::move(row));
    }
    j["confusion"] = std::move(rows);
    return j.dump(2);
}

void save_confusion_csv(const std::string& path, const ConfusionMatrix& cm) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "truth\\pred";
    for (int c = 0; c < kNumClasses; ++c) out << ',' << kClassNames[static_cast<std::size_t>(c)];
    out << '\n';
    for (int i = 0; i < kNumClasses; ++i) {
        out << kClassNames[static_cast<std::size_t>(i)];
        for (int j = 0; j < kNumClasses; ++j)
            out << ',' << cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        out << '\n';
    }
    if (!out) throw DataError("confusion csv: write failed: " + path);
}

}  // namespace dietsonar::metrics
