#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "evoclust/dataset.hpp"
#include "evoclust/errors.hpp"
#include "evoclust/rng.hpp"

namespace evoclust {

// Gaussian mixture sampling recipe for synthetic datasets.
struct SyntheticSpec {
    std::vector<double> weights;            // length G, sums to 1
    std::vector<Eigen::VectorXd> means;     // G vectors of length p
    std::vector<Eigen::MatrixXd> covariances;  // G p x p PD matrices
    int n = 0;
    std::uint64_t seed = 0;

    int groups() const { return static_cast<int>(weights.size()); }
};

// Draws the component from the weights, then x = mu + L z with L the
// Cholesky factor and z iid standard normal. Truth is set to the generating
// component. Fully determined by the seed.
inline Dataset sample_mixture(const SyntheticSpec& spec) {
    const int G = spec.groups();
    if (G < 1 || spec.means.size() != static_cast<std::size_t>(G) ||
        spec.covariances.size() != static_cast<std::size_t>(G) || spec.n < 1) {
        throw std::invalid_argument("sample_mixture: malformed spec");
    }
    double wsum = 0.0;
    for (double w : spec.weights) {
        if (w < 0.0) throw std::invalid_argument("sample_mixture: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) {
        throw std::invalid_argument("sample_mixture: weights must sum to 1");
    }
    const int p = static_cast<int>(spec.means[0].size());

    std::vector<Eigen::MatrixXd> chol(G);
    for (int g = 0; g < G; ++g) {
        if (spec.means[g].size() != p || spec.covariances[g].rows() != p ||
            spec.covariances[g].cols() != p) {
            throw std::invalid_argument("sample_mixture: dimension mismatch");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(spec.covariances[g]);
        if (llt.info() != Eigen::Success) {
            throw FactorizationError(
                "sample_mixture: covariance of component " + std::to_string(g) +
                    " is not positive definite",
                g);
        }
        chol[g] = llt.matrixL();
    }

    Rng rng(spec.seed);
    Dataset data;
    data.points.resize(spec.n, p);
    data.truth.resize(spec.n);
    for (int g = 0; g < G; ++g) data.class_names.push_back("c" + std::to_string(g + 1));
    for (int c = 0; c < p; ++c) data.feature_names.push_back("x" + std::to_string(c + 1));

    for (int i = 0; i < spec.n; ++i) {
        const double u = rng.uniform01();
        int g = G - 1;
        double acc = 0.0;
        for (int k = 0; k < G; ++k) {
            acc += spec.weights[k];
            if (u < acc) {
                g = k;
                break;
            }
        }
        Eigen::VectorXd z(p);
        for (int c = 0; c < p; ++c) z(c) = rng.normal();
        data.points.row(i) = (spec.means[g] + chol[g] * z).transpose();
        data.truth[i] = g;
    }
    return data;
}

}  // namespace evoclust
