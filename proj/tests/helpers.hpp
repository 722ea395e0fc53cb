#pragma once

// Test-only oracles. Everything here is deliberately written as the obvious
// brute-force computation, independent of the code paths it checks: dense
// inverses instead of factorizations, plain double loops instead of
// log-sum-exp, pair enumeration instead of contingency sums, exhaustive
// search instead of heuristics.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "evoclust/dataset.hpp"
#include "evoclust/gaussian.hpp"
#include "evoclust/rng.hpp"

namespace oracle {

// log phi(x | mu, Sigma) via explicit dense inverse and determinant.
inline double log_density_dense(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                                const Eigen::MatrixXd& sigma) {
    const Eigen::MatrixXd inv = sigma.inverse();
    const double quad = (x - mu).transpose() * inv * (x - mu);
    return -0.5 * (x.size() * std::log(2.0 * std::numbers::pi) +
                   std::log(sigma.determinant()) + quad);
}

// Mixture log-likelihood by direct summation, no stabilization.
inline double mixture_loglik_naive(const evoclust::Dataset& data,
                                   const evoclust::MixtureParams& params) {
    double total = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        double density = 0.0;
        for (const auto& comp : params.components) {
            density += comp.weight *
                       std::exp(log_density_dense(data.points.row(i).transpose(), comp.mean,
                                                  comp.covariance));
        }
        total += std::log(density);
    }
    return total;
}

// Per-group weight/mean/covariance by a separate two-pass route
// (covariance as E[xx'] - mu mu').
struct GroupEstimates {
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
};

inline GroupEstimates estimates_naive(const evoclust::Dataset& data,
                                      const evoclust::HardLabels& labels) {
    GroupEstimates out;
    const int p = data.dim();
    for (int g = 0; g < labels.groups; ++g) {
        double ng = 0.0;
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
        Eigen::MatrixXd sum_outer = Eigen::MatrixXd::Zero(p, p);
        for (int i = 0; i < data.n(); ++i) {
            if (labels.assign[i] != g) continue;
            const Eigen::VectorXd x = data.points.row(i).transpose();
            ng += 1.0;
            sum += x;
            sum_outer += x * x.transpose();
        }
        const Eigen::VectorXd mean = sum / ng;
        out.weights.push_back(ng / data.n());
        out.means.push_back(mean);
        out.covs.push_back(sum_outer / ng - mean * mean.transpose());
    }
    return out;
}

// Responsibilities by the direct density ratio.
inline Eigen::MatrixXd responsibilities_naive(const evoclust::Dataset& data,
                                              const evoclust::MixtureParams& params) {
    const int G = params.groups();
    Eigen::MatrixXd r(data.n(), G);
    for (int i = 0; i < data.n(); ++i) {
        double denom = 0.0;
        for (int g = 0; g < G; ++g) {
            const auto& c = params.components[g];
            r(i, g) = c.weight * std::exp(log_density_dense(data.points.row(i).transpose(),
                                                            c.mean, c.covariance));
            denom += r(i, g);
        }
        r.row(i) /= denom;
    }
    return r;
}

// Rand index and ARI by enumerating all observation pairs.
inline double rand_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    const int n = static_cast<int>(a.size());
    int agree = 0, pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            ++pairs;
            const bool together_a = a[i] == a[j];
            const bool together_b = b[i] == b[j];
            if (together_a == together_b) ++agree;
        }
    }
    return static_cast<double>(agree) / pairs;
}

inline double ari_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    const int n = static_cast<int>(a.size());
    double n11 = 0, n00 = 0, n10 = 0, n01 = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool ta = a[i] == a[j];
            const bool tb = b[i] == b[j];
            if (ta && tb) ++n11;
            else if (!ta && !tb) ++n00;
            else if (ta) ++n10;
            else ++n01;
        }
    }
    const double total = n11 + n00 + n10 + n01;
    const double expected = (n11 + n10) * (n11 + n01) / total;
    const double maximum = 0.5 * ((n11 + n10) + (n11 + n01));
    if (maximum == expected) return (n11 == maximum && n10 + n01 == 0) ? 1.0 : 0.0;
    return (n11 - expected) / (maximum - expected);
}

// Exhaustive maximum fitness over all feasible two-group labelings.
inline double best_two_group_fitness(const evoclust::Dataset& data) {
    const int n = data.n();
    double best = -std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        evoclust::HardLabels labels;
        labels.groups = 2;
        labels.assign.resize(n);
        for (int i = 0; i < n; ++i) labels.assign[i] = (mask >> i) & 1u;
        best = std::max(best, evoclust::fitness(data, labels));
    }
    return best;
}

// Random n x p dataset with entries from two Gaussian blobs.
inline evoclust::Dataset two_blob_instance(int n, int p, double separation,
                                           std::uint64_t seed) {
    evoclust::Rng rng(seed);
    evoclust::Dataset data;
    data.points.resize(n, p);
    data.truth.resize(n);
    for (int i = 0; i < n; ++i) {
        const int g = (i < n / 2) ? 0 : 1;
        data.truth[i] = g;
        for (int c = 0; c < p; ++c) {
            data.points(i, c) = rng.normal() + (g == 1 && c == 0 ? separation : 0.0);
        }
    }
    return data;
}

inline evoclust::Dataset random_dataset(int n, int p, std::uint64_t seed) {
    evoclust::Rng rng(seed);
    evoclust::Dataset data;
    data.points.resize(n, p);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < p; ++c) data.points(i, c) = rng.normal();
    }
    return data;
}

// Random labeling with every group nonempty.
inline evoclust::HardLabels random_labels_nonempty(int n, int groups, evoclust::Rng& rng) {
    evoclust::HardLabels labels;
    labels.groups = groups;
    labels.assign.resize(n);
    for (;;) {
        for (int i = 0; i < n; ++i) {
            labels.assign[i] = static_cast<int>(rng.below(groups));
        }
        const std::vector<int> counts = labels.counts();
        if (*std::min_element(counts.begin(), counts.end()) > 0) return labels;
    }
}

}  // namespace oracle
