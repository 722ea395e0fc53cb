#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "evoclust/errors.hpp"

namespace evoclust {

// n x p observation matrix plus optional ground-truth class labels.
// Truth labels are stored as integer codes; class_names maps code -> display
// name (in order of first appearance in the source file).
struct Dataset {
    Eigen::MatrixXd points;                  // n x p
    std::vector<std::string> feature_names;  // size p, or empty
    std::vector<int> truth;                  // size n, or empty
    std::vector<std::string> class_names;    // size = #classes, or empty

    int n() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
    bool has_truth() const { return !truth.empty(); }
};

inline void validate(const Dataset& data) {
    if (data.points.rows() < 1 || data.points.cols() < 1) {
        throw DataError("dataset must have at least one row and one column");
    }
    if (!data.points.allFinite()) {
        throw DataError("dataset contains non-finite entries");
    }
    if (data.has_truth() &&
        data.truth.size() != static_cast<std::size_t>(data.points.rows())) {
        throw DataError("truth labels and observations have different lengths");
    }
    if (!data.feature_names.empty() &&
        data.feature_names.size() != static_cast<std::size_t>(data.points.cols())) {
        throw DataError("feature names and columns have different lengths");
    }
}

// Hard one-hot assignment of n observations to `groups` components, stored as
// a label vector: assign[i] = g means row i of the implied n x G matrix has
// its single 1 in column g. One-hotness holds by construction; column counts
// may be zero (operations define what happens then).
struct HardLabels {
    std::vector<int> assign;
    int groups = 0;

    int n() const { return static_cast<int>(assign.size()); }

    std::vector<int> counts() const {
        std::vector<int> c(groups, 0);
        for (int g : assign) ++c[g];
        return c;
    }

    bool in_range() const {
        return std::all_of(assign.begin(), assign.end(),
                           [this](int g) { return g >= 0 && g < groups; });
    }

    // Relabels components by order of first occurrence, so partitions that
    // differ only by a component permutation compare equal.
    std::vector<int> canonical() const {
        std::vector<int> remap(groups, -1);
        std::vector<int> out(assign.size());
        int next = 0;
        for (std::size_t i = 0; i < assign.size(); ++i) {
            int& slot = remap[assign[i]];
            if (slot < 0) slot = next++;
            out[i] = slot;
        }
        return out;
    }

    bool operator==(const HardLabels&) const = default;
};

inline bool same_partition(const HardLabels& a, const HardLabels& b) {
    return a.n() == b.n() && a.canonical() == b.canonical();
}

}  // namespace evoclust
