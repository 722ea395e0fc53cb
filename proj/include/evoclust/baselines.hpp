#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "evoclust/dataset.hpp"
#include "evoclust/rng.hpp"

namespace evoclust {

struct KMeansResult {
    HardLabels labels;
    Eigen::MatrixXd centers;  // G x p
    double within_ss = 0.0;
    int iterations = 0;
};

struct KMedoidsResult {
    HardLabels labels;
    std::vector<int> medoid_indices;
    double total_cost = 0.0;
};

namespace detail {

inline int nearest_row(const Eigen::MatrixXd& centers, const Eigen::VectorXd& x) {
    int best = 0;
    double best_d = (centers.row(0).transpose() - x).squaredNorm();
    for (int g = 1; g < centers.rows(); ++g) {
        const double d = (centers.row(g).transpose() - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = g;
        }
    }
    return best;
}

inline double within_ss(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers,
                        const std::vector<int>& assign) {
    double ss = 0.0;
    for (int i = 0; i < points.rows(); ++i) {
        ss += (points.row(i) - centers.row(assign[i])).squaredNorm();
    }
    return ss;
}

// Moves each empty cluster's center onto the point farthest from its
// currently assigned center, then reassigns that point.
inline void repair_empty_clusters(const Eigen::MatrixXd& points, Eigen::MatrixXd& centers,
                                  std::vector<int>& assign) {
    const int G = static_cast<int>(centers.rows());
    std::vector<int> counts(G, 0);
    for (int a : assign) ++counts[a];
    for (int g = 0; g < G; ++g) {
        if (counts[g] > 0) continue;
        int farthest = -1;
        double far_d = -1.0;
        for (int i = 0; i < points.rows(); ++i) {
            if (counts[assign[i]] <= 1) continue;  // don't empty another cluster
            const double d = (points.row(i) - centers.row(assign[i])).squaredNorm();
            if (d > far_d) {
                far_d = d;
                farthest = i;
            }
        }
        if (farthest < 0) continue;
        --counts[assign[farthest]];
        centers.row(g) = points.row(farthest);
        assign[farthest] = g;
        ++counts[g];
    }
}

// Lloyd iterations from given centers until the assignment is a fixpoint.
// Appends the within-cluster sum of squares after each update to wss_trace
// when provided (used by tests to check monotonicity).
inline KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers,
                          int max_iter = 500, std::vector<double>* wss_trace = nullptr) {
    const int n = static_cast<int>(points.rows());
    const int G = static_cast<int>(centers.rows());
    std::vector<int> assign(n, -1);
    int iterations = 0;
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const int g = nearest_row(centers, points.row(i).transpose());
            if (g != assign[i]) {
                assign[i] = g;
                changed = true;
            }
        }
        repair_empty_clusters(points, centers, assign);
        if (!changed) break;
        iterations = it + 1;

        centers.setZero();
        std::vector<int> counts(G, 0);
        for (int i = 0; i < n; ++i) {
            centers.row(assign[i]) += points.row(i);
            ++counts[assign[i]];
        }
        for (int g = 0; g < G; ++g) {
            centers.row(g) /= static_cast<double>(counts[g]);
        }
        if (wss_trace) wss_trace->push_back(within_ss(points, centers, assign));
    }
    KMeansResult result;
    result.labels = HardLabels{assign, G};
    result.centers = std::move(centers);
    result.within_ss = within_ss(points, result.centers, assign);
    result.iterations = iterations;
    return result;
}

// k-means++ seeding: subsequent centers drawn with probability proportional
// to squared distance from the nearest chosen center.
inline Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& points, int G, Rng& rng) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd centers(G, points.cols());
    centers.row(0) = points.row(static_cast<int>(rng.below(n)));
    Eigen::VectorXd dist2(n);
    for (int i = 0; i < n; ++i) {
        dist2(i) = (points.row(i) - centers.row(0)).squaredNorm();
    }
    for (int g = 1; g < G; ++g) {
        const double total = dist2.sum();
        int pick;
        if (total <= 0.0) {
            pick = static_cast<int>(rng.below(n));  // all points coincide with centers
        } else {
            double target = rng.uniform01() * total;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                target -= dist2(i);
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(g) = points.row(pick);
        for (int i = 0; i < n; ++i) {
            dist2(i) = std::min(dist2(i), (points.row(i) - centers.row(g)).squaredNorm());
        }
    }
    return centers;
}

}  // namespace detail

// Lloyd's k-means with k-means++ seeding; the best of `restarts` independent
// starts by within-cluster sum of squares wins.
inline KMeansResult kmeans(const Dataset& data, int groups, Rng& rng, int restarts = 25) {
    if (groups < 1 || groups > data.n()) {
        throw std::invalid_argument("kmeans: need 1 <= G <= n");
    }
    if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
    KMeansResult best;
    best.within_ss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Rng sub(mix_seed(rng.next_u64(), static_cast<std::uint64_t>(r)));
        KMeansResult run =
            detail::lloyd(data.points, detail::kmeanspp_centers(data.points, groups, sub));
        if (run.within_ss < best.within_ss) best = std::move(run);
    }
    return best;
}

// Lloyd's k-means started from an explicit labeling (centers = group means).
inline KMeansResult kmeans_from_labels(const Dataset& data, const HardLabels& init) {
    if (init.n() != data.n() || !init.in_range()) {
        throw std::invalid_argument("kmeans_from_labels: bad init labeling");
    }
    const std::vector<int> counts = init.counts();
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(init.groups, data.dim());
    for (int i = 0; i < data.n(); ++i) {
        centers.row(init.assign[i]) += data.points.row(i);
    }
    for (int g = 0; g < init.groups; ++g) {
        if (counts[g] == 0) {
            throw std::invalid_argument("kmeans_from_labels: init labeling has an empty group");
        }
        centers.row(g) /= static_cast<double>(counts[g]);
    }
    return detail::lloyd(data.points, std::move(centers));
}

// One k-means++ seeding plus a single nearest-center assignment (no Lloyd
// refinement); empty groups are repaired. Useful as a cheap seeded labeling.
inline HardLabels initial_labels_kmeanspp(const Dataset& data, int groups, Rng& rng) {
    if (groups < 1 || groups > data.n()) {
        throw std::invalid_argument("initial_labels_kmeanspp: need 1 <= G <= n");
    }
    Eigen::MatrixXd centers = detail::kmeanspp_centers(data.points, groups, rng);
    std::vector<int> assign(data.n());
    for (int i = 0; i < data.n(); ++i) {
        assign[i] = detail::nearest_row(centers, data.points.row(i).transpose());
    }
    detail::repair_empty_clusters(data.points, centers, assign);
    return HardLabels{assign, groups};
}

namespace detail {

inline Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& points) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
        }
    }
    return d;
}

}  // namespace detail

// PAM: greedy BUILD, then best-improvement SWAP to a local optimum, under
// Euclidean distance. Deterministic; the rng parameter is part of the common
// baseline interface but PAM draws nothing from it.
inline KMedoidsResult kmedoids(const Dataset& data, int groups, Rng& /*rng*/) {
    const int n = data.n();
    if (groups < 1 || groups > n) {
        throw std::invalid_argument("kmedoids: need 1 <= G <= n");
    }
    const Eigen::MatrixXd dist = detail::pairwise_distances(data.points);

    // BUILD: first medoid minimizes total distance; each next one gives the
    // largest reduction in cost.
    std::vector<int> medoids;
    std::vector<char> is_medoid(n, 0);
    Eigen::VectorXd nearest = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    {
        int first = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double c = dist.col(i).sum();
            if (c < best_cost) {
                best_cost = c;
                first = i;
            }
        }
        medoids.push_back(first);
        is_medoid[first] = 1;
        nearest = dist.col(first);
    }
    while (static_cast<int>(medoids.size()) < groups) {
        int pick = -1;
        double best_gain = -1.0;
        for (int c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (int i = 0; i < n; ++i) {
                gain += std::max(0.0, nearest(i) - dist(i, c));
            }
            if (gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = 1;
        for (int i = 0; i < n; ++i) nearest(i) = std::min(nearest(i), dist(i, pick));
    }

    auto total_cost = [&](const std::vector<int>& meds) {
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            double nd = std::numeric_limits<double>::infinity();
            for (int m : meds) nd = std::min(nd, dist(i, m));
            cost += nd;
        }
        return cost;
    };

    // SWAP: apply the single best cost-reducing (medoid, candidate) exchange
    // until none improves.
    double cost = total_cost(medoids);
    bool improved = true;
    while (improved) {
        improved = false;
        int best_m = -1, best_c = -1;
        double best_cost = cost;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            for (int c = 0; c < n; ++c) {
                if (is_medoid[c]) continue;
                std::vector<int> trial = medoids;
                trial[mi] = c;
                const double tc = total_cost(trial);
                if (tc < best_cost - 1e-12) {
                    best_cost = tc;
                    best_m = static_cast<int>(mi);
                    best_c = c;
                }
            }
        }
        if (best_m >= 0) {
            is_medoid[medoids[best_m]] = 0;
            is_medoid[best_c] = 1;
            medoids[best_m] = best_c;
            cost = best_cost;
            improved = true;
        }
    }

    KMedoidsResult result;
    result.medoid_indices = medoids;
    result.total_cost = cost;
    result.labels.groups = groups;
    result.labels.assign.resize(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_d = dist(i, medoids[0]);
        for (int m = 1; m < groups; ++m) {
            if (dist(i, medoids[m]) < best_d) {
                best_d = dist(i, medoids[m]);
                best = m;
            }
        }
        result.labels.assign[i] = best;
    }
    return result;
}

// Classification EM for the restricted mixture with equal weights and a
// shared spherical covariance lambda * I. The C-step maximizes the
// classification log density, which reduces to nearest-mean assignment;
// lambda is the pooled mean squared deviation. Runs to a fixed partition.
inline HardLabels cem_spherical(const Dataset& data, int groups, const HardLabels& init,
                                int max_iter = 500) {
    const int n = data.n();
    const int p = data.dim();
    if (groups != init.groups || init.n() != n || !init.in_range()) {
        throw std::invalid_argument("cem_spherical: bad init labeling");
    }
    {
        const std::vector<int> counts = init.counts();
        for (int g = 0; g < groups; ++g) {
            if (counts[g] == 0) {
                throw std::invalid_argument("cem_spherical: init labeling has an empty group");
            }
        }
    }
    if (groups == 1) return init;

    std::vector<int> assign = init.assign;
    Eigen::MatrixXd means(groups, p);
    for (int it = 0; it < max_iter; ++it) {
        // M-step: group means and the shared spherical variance.
        means.setZero();
        std::vector<int> counts(groups, 0);
        for (int i = 0; i < n; ++i) {
            means.row(assign[i]) += data.points.row(i);
            ++counts[assign[i]];
        }
        for (int g = 0; g < groups; ++g) {
            means.row(g) /= static_cast<double>(counts[g]);
        }
        double lambda = 0.0;
        for (int i = 0; i < n; ++i) {
            lambda += (data.points.row(i) - means.row(assign[i])).squaredNorm();
        }
        lambda /= static_cast<double>(n) * static_cast<double>(p);
        if (lambda <= 0.0) break;  // all points sit on their means

        // C-step: hard-assign to the component with the largest
        // classification log density; ties go to the lowest index.
        const double log_norm =
            -0.5 * p * std::log(2.0 * std::numbers::pi * lambda) -
            std::log(static_cast<double>(groups));
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_score = log_norm -
                0.5 * (data.points.row(i) - means.row(0)).squaredNorm() / lambda;
            for (int g = 1; g < groups; ++g) {
                const double score = log_norm -
                    0.5 * (data.points.row(i) - means.row(g)).squaredNorm() / lambda;
                if (score > best_score) {
                    best_score = score;
                    best = g;
                }
            }
            if (best != assign[i]) {
                assign[i] = best;
                changed = true;
            }
        }
        detail::repair_empty_clusters(data.points, means, assign);
        if (!changed) break;
    }
    return HardLabels{assign, groups};
}

}  // namespace evoclust
