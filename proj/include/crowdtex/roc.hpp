#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crowdtex {

/// ROC curve of `score >= threshold` classifiers, one point per distinct
/// score (descending), starting at (0, 0) with threshold +inf.
struct RocResult {
    std::vector<double> thresholds;
    std::vector<double> tpr;
    std::vector<double> fpr;
    double auc = 0.0;
    double accuracy_at_threshold = 0.0;  ///< at the fixed decision threshold
    double decision_threshold = 0.5;
    double youden_threshold = 0.0;       ///< maximizes tpr - fpr
    double accuracy_at_youden = 0.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// Mann-Whitney U / (positives * negatives), ties counted 1/2. Throws
/// std::invalid_argument unless both classes are present.
double auc_mann_whitney(std::span<const double> scores, std::span<const int> labels);

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels,
                  double decision_threshold = 0.5);

}  // namespace crowdtex
