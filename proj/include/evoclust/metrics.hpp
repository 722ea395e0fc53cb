#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "evoclust/dataset.hpp"

namespace evoclust {

// Cross-tabulation of two labelings; rows follow the truth classes, columns
// the predicted groups.
struct ConfusionMatrix {
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;

    int rows() const { return static_cast<int>(counts.size()); }
    int cols() const { return counts.empty() ? 0 : static_cast<int>(counts[0].size()); }

    std::int64_t total() const {
        std::int64_t n = 0;
        for (const auto& row : counts) {
            n = std::accumulate(row.begin(), row.end(), n);
        }
        return n;
    }
};

namespace detail {

inline int label_space(const std::vector<int>& labels) {
    int k = 0;
    for (int v : labels) {
        if (v < 0) throw std::invalid_argument("labels must be nonnegative");
        k = std::max(k, v + 1);
    }
    return k;
}

inline double choose2(double m) { return m * (m - 1.0) / 2.0; }

}  // namespace detail

inline ConfusionMatrix confusion(const std::vector<int>& truth,
                                 const std::vector<int>& predicted,
                                 std::vector<std::string> row_names = {},
                                 std::vector<std::string> col_names = {}) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("confusion: label vectors have different lengths");
    }
    const int kt = detail::label_space(truth);
    const int kp = detail::label_space(predicted);
    ConfusionMatrix cm;
    cm.counts.assign(kt, std::vector<std::int64_t>(kp, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++cm.counts[truth[i]][predicted[i]];
    }
    if (row_names.empty()) {
        for (int t = 0; t < kt; ++t) row_names.push_back(std::to_string(t));
    }
    if (col_names.empty()) {
        for (int p = 0; p < kp; ++p) col_names.push_back(std::to_string(p));
    }
    cm.row_names = std::move(row_names);
    cm.col_names = std::move(col_names);
    return cm;
}

inline ConfusionMatrix confusion(const std::vector<int>& truth, const HardLabels& predicted,
                                 std::vector<std::string> row_names = {},
                                 std::vector<std::string> col_names = {}) {
    return confusion(truth, predicted.assign, std::move(row_names), std::move(col_names));
}

// Rand index: the fraction of observation pairs on which the two partitions
// agree (both co-cluster or both separate).
inline double rand_index(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("rand_index: label vectors have different lengths");
    }
    const double n = static_cast<double>(truth.size());
    if (truth.size() < 2) throw std::invalid_argument("rand_index: need at least 2 items");

    const ConfusionMatrix cm = confusion(truth, predicted);
    double sum_ij = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (int t = 0; t < cm.rows(); ++t) {
        double row_total = 0.0;
        for (int p = 0; p < cm.cols(); ++p) {
            sum_ij += detail::choose2(static_cast<double>(cm.counts[t][p]));
            row_total += static_cast<double>(cm.counts[t][p]);
        }
        sum_rows += detail::choose2(row_total);
    }
    for (int p = 0; p < cm.cols(); ++p) {
        double col_total = 0.0;
        for (int t = 0; t < cm.rows(); ++t) col_total += static_cast<double>(cm.counts[t][p]);
        sum_cols += detail::choose2(col_total);
    }
    const double pairs = detail::choose2(n);
    // agreements = co-clustered in both + separated in both
    const double both = sum_ij;
    const double neither = pairs + sum_ij - sum_rows - sum_cols;
    return (both + neither) / pairs;
}

inline double rand_index(const std::vector<int>& truth, const HardLabels& predicted) {
    return rand_index(truth, predicted.assign);
}

// Hubert-Arabie adjusted Rand index from a contingency table.
// Degenerate case (max == expected): 1 if the partitions are identical,
// else 0.
inline double ari(const ConfusionMatrix& cm) {
    double sum_ij = 0.0, sum_rows = 0.0, sum_cols = 0.0, n = 0.0;
    for (int t = 0; t < cm.rows(); ++t) {
        double row_total = 0.0;
        for (int p = 0; p < cm.cols(); ++p) {
            const double c = static_cast<double>(cm.counts[t][p]);
            sum_ij += detail::choose2(c);
            row_total += c;
        }
        sum_rows += detail::choose2(row_total);
        n += row_total;
    }
    for (int p = 0; p < cm.cols(); ++p) {
        double col_total = 0.0;
        for (int t = 0; t < cm.rows(); ++t) col_total += static_cast<double>(cm.counts[t][p]);
        sum_cols += detail::choose2(col_total);
    }
    if (n < 2.0) throw std::invalid_argument("ari: need at least 2 items");

    const double expected = sum_rows * sum_cols / detail::choose2(n);
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) {
        // Both partitions trivial; identical partitions score 1, others 0.
        return (sum_ij == max_index) ? 1.0 : 0.0;
    }
    return (sum_ij - expected) / (max_index - expected);
}

inline double ari(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) {
        throw std::invalid_argument("ari: label vectors have different lengths");
    }
    if (truth.size() < 2) throw std::invalid_argument("ari: need at least 2 items");
    return ari(confusion(truth, predicted));
}

inline double ari(const std::vector<int>& truth, const HardLabels& predicted) {
    return ari(truth, predicted.assign);
}

// Misclassifications under the best injective matching of predicted groups to
// truth classes: n minus the maximum achievable confusion-table trace. Exact
// search over permutations; sizes above 10 are rejected.
inline int misclassification_count(const ConfusionMatrix& cm) {
    const int k = std::max(cm.rows(), cm.cols());
    if (k > 10) {
        throw std::invalid_argument(
            "misclassification_count: more than 10 groups is unsupported (exact matching only)");
    }
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::int64_t best = 0;
    do {
        std::int64_t trace = 0;
        for (int t = 0; t < cm.rows(); ++t) {
            if (perm[t] < cm.cols()) trace += cm.counts[t][perm[t]];
        }
        best = std::max(best, trace);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<int>(cm.total() - best);
}

inline int misclassification_count(const std::vector<int>& truth,
                                   const std::vector<int>& predicted) {
    return misclassification_count(confusion(truth, predicted));
}

inline int misclassification_count(const std::vector<int>& truth, const HardLabels& predicted) {
    return misclassification_count(confusion(truth, predicted.assign));
}

}  // namespace evoclust
