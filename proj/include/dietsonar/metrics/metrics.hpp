#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "dietsonar/labels.hpp"

namespace dietsonar::metrics {

// Rows = truth, columns = predicted.
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

    std::int64_t total() const;
    std::int64_t row_sum(int truth_class) const;
    std::int64_t col_sum(int pred_class) const;
    // Rows scaled to sum to 1; rows of absent classes stay all-zero.
    std::array<std::array<double, kNumClasses>, kNumClasses> row_normalized() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

ConfusionMatrix confusion(std::span<const ActivityClass> truth, std::span<const ActivityClass> pred);

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;  // truth occurrences
};

struct F1Report {
    std::array<ClassScores, kNumClasses> per_class{};
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    int classes_in_macro = 0;  // classes with truth support > 0
};

// Per-class precision/recall/F1 with the 0/0 -> 0 convention; macro averages
// run over classes present in the truth only.
F1Report macro_f1(const ConfusionMatrix& cm);

// Mean absolute error; throws ArgumentError on empty or mismatched inputs.
double mae(std::span<const double> truth, std::span<const double> pred);

// Chance-corrected agreement in [-1, 1]. Degenerate p_e == 1 is defined as
// 1 when the observed agreement is also perfect, else 0.
double cohens_kappa(std::span<const ActivityClass> a, std::span<const ActivityClass> b);

// JSON / CSV reports.
std::string f1_report_to_json(const F1Report& report, const ConfusionMatrix& cm);
void save_confusion_csv(const std::string& path, const ConfusionMatrix& cm);

}  // namespace dietsonar::metrics
