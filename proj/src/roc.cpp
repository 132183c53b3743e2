#include "crowdtex/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace crowdtex {

namespace {

void check_inputs(std::span<const double> scores, std::span<const int> labels, std::size_t& pos,
                  std::size_t& neg) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
    pos = neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
        if (std::isnan(scores[i])) throw std::invalid_argument("scores must not be NaN");
        (labels[i] ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0) throw std::invalid_argument("ROC needs both classes present");
}

}  // namespace

double auc_mann_whitney(std::span<const double> scores, std::span<const int> labels) {
    std::size_t pos = 0, neg = 0;
    check_inputs(scores, labels, pos, neg);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of 1-based average ranks of the positives; every rank is a multiple
    // of 1/2, so the sum is exact.
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]]) rank_sum += avg_rank;
        i = j + 1;
    }
    const double p = static_cast<double>(pos);
    const double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(neg));
}

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels, double decision_threshold) {
    RocResult r;
    check_inputs(scores, labels, r.positives, r.negatives);
    r.auc = auc_mann_whitney(scores, labels);
    r.decision_threshold = decision_threshold;

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    const double p = static_cast<double>(r.positives);
    const double n = static_cast<double>(r.negatives);
    const double total = p + n;
    r.thresholds.push_back(std::numeric_limits<double>::infinity());
    r.tpr.push_back(0.0);
    r.fpr.push_back(0.0);
    double best_j = 0.0;
    r.youden_threshold = std::numeric_limits<double>::infinity();
    r.accuracy_at_youden = n / total;

    std::size_t tp = 0, fp = 0, i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] ? tp : fp) += 1;
            ++i;
        }
        const double tpr = static_cast<double>(tp) / p;
        const double fpr = static_cast<double>(fp) / n;
        r.thresholds.push_back(s);
        r.tpr.push_back(tpr);
        r.fpr.push_back(fpr);
        if (tpr - fpr > best_j) {
            best_j = tpr - fpr;
            r.youden_threshold = s;
            r.accuracy_at_youden = (static_cast<double>(tp) + (n - static_cast<double>(fp))) / total;
        }
    }

    std::size_t correct = 0;
    for (std::size_t k = 0; k < scores.size(); ++k)
        if ((scores[k] >= decision_threshold ? 1 : 0) == labels[k]) ++correct;
    r.accuracy_at_threshold = static_cast<double>(correct) / total;
    return r;
}

}  // namespace crowdtex
