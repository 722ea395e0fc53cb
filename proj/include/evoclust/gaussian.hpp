#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "evoclust/dataset.hpp"
#include "evoclust/errors.hpp"

namespace evoclust {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Relative floor for the smallest covariance eigenvalue: a component is
// usable only if min_eig > kEigenvalueFloor * trace / p.
inline constexpr double kEigenvalueFloor = 1e-10;

struct ComponentParams {
    double weight = 1.0;            // pi_g in (0, 1]
    Eigen::VectorXd mean;           // mu_g
    Eigen::MatrixXd covariance;     // Sigma_g, symmetric positive definite
};

struct MixtureParams {
    std::vector<ComponentParams> components;
    int groups() const { return static_cast<int>(components.size()); }
};

// n x G matrix of EM responsibilities; each row is a probability vector.
using Responsibilities = Eigen::MatrixXd;

struct ModelScore {
    double log_likelihood = 0.0;
    int free_params = 0;
    int n_obs = 0;
    double bic = 0.0;
};

// Free parameters of the unconstrained (full-covariance) mixture:
// G-1 weights + G*p means + G*p(p+1)/2 covariance entries.
inline int free_params_unconstrained(int groups, int dim) {
    return (groups - 1) + groups * dim + groups * dim * (dim + 1) / 2;
}

inline double bic(double log_likelihood, int free_params, int n_obs) {
    if (n_obs < 1) throw std::invalid_argument("bic: n_obs must be >= 1");
    if (free_params < 1) throw std::invalid_argument("bic: free_params must be >= 1");
    return 2.0 * log_likelihood - free_params * std::log(static_cast<double>(n_obs));
}

// Cached Cholesky evaluator for one Gaussian component's log density.
// log phi(x) = -(p ln 2pi + ln det Sigma + (x-mu)' Sigma^{-1} (x-mu)) / 2,
// with the determinant and the quadratic form both read off the factor.
class GaussianLogDensity {
public:
    explicit GaussianLogDensity(const ComponentParams& comp, int component_index = -1)
        : mean_(comp.mean), llt_(comp.covariance) {
        if (comp.covariance.rows() != comp.covariance.cols() ||
            comp.covariance.rows() != comp.mean.size()) {
            throw std::invalid_argument("log_density: mean/covariance dimension mismatch");
        }
        if (llt_.info() != Eigen::Success) {
            throw FactorizationError(
                "covariance of component " + std::to_string(component_index) +
                    " is not positive definite",
                component_index);
        }
        log_det_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
        const double p = static_cast<double>(mean_.size());
        const_term_ = -0.5 * (p * std::log(2.0 * std::numbers::pi) + log_det_);
    }

    double operator()(const Eigen::VectorXd& x) const {
        // Quadratic form via the triangular solve L y = x - mu.
        const Eigen::VectorXd y = llt_.matrixL().solve(x - mean_);
        return const_term_ - 0.5 * y.squaredNorm();
    }

    double log_det() const { return log_det_; }

private:
    Eigen::VectorXd mean_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_det_ = 0.0;
    double const_term_ = 0.0;
};

inline double log_density(const Eigen::VectorXd& x, const ComponentParams& comp,
                          int component_index = -1) {
    if (x.size() != comp.mean.size()) {
        throw std::invalid_argument("log_density: observation dimension mismatch");
    }
    return GaussianLogDensity(comp, component_index)(x);
}

namespace detail {

// Outcome of estimating mixture parameters from a hard labeling without
// throwing; the EA turns infeasibility into a -inf fitness.
struct LabelEstimates {
    MixtureParams params;
    bool feasible = false;
    int bad_component = -1;
    std::string reason;
};

inline LabelEstimates try_estimate_from_labels(const Dataset& data,
                                               const HardLabels& labels,
                                               double ridge = 0.0) {
    LabelEstimates out;
    const int n = data.n();
    const int p = data.dim();
    if (labels.n() != n) {
        throw std::invalid_argument("estimate_from_labels: label/observation length mismatch");
    }
    if (labels.groups < 1 || !labels.in_range()) {
        throw std::invalid_argument("estimate_from_labels: labels out of range");
    }

    const std::vector<int> counts = labels.counts();
    out.params.components.resize(labels.groups);
    for (int g = 0; g < labels.groups; ++g) {
        const int ng = counts[g];
        if (ng == 0) {
            out.bad_component = g;
            out.reason = "component " + std::to_string(g) + " is empty";
            return out;
        }
        if (ng <= p) {
            out.bad_component = g;
            out.reason = "component " + std::to_string(g) + " has " +
                         std::to_string(ng) + " members, needs at least " +
                         std::to_string(p + 1);
            return out;
        }
    }

    for (int g = 0; g < labels.groups; ++g) {
        ComponentParams& comp = out.params.components[g];
        const double ng = static_cast<double>(counts[g]);
        comp.weight = ng / static_cast<double>(n);

        Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
        for (int i = 0; i < n; ++i) {
            if (labels.assign[i] == g) mean += data.points.row(i).transpose();
        }
        mean /= ng;
        comp.mean = mean;

        // Biased maximum-likelihood form: divide by n_g, not n_g - 1.
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
        for (int i = 0; i < n; ++i) {
            if (labels.assign[i] == g) {
                const Eigen::VectorXd d = data.points.row(i).transpose() - mean;
                cov.noalias() += d * d.transpose();
            }
        }
        cov /= ng;
        if (ridge > 0.0) cov.diagonal().array() += ridge;
        comp.covariance = cov;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
        const double min_eig = eig.eigenvalues().minCoeff();
        const double scale = cov.trace() / static_cast<double>(p);
        if (!(min_eig > kEigenvalueFloor * scale) || !(scale > 0.0)) {
            out.bad_component = g;
            out.reason = "component " + std::to_string(g) +
                         " has a (near-)singular covariance";
            return out;
        }
    }
    out.feasible = true;
    return out;
}

}  // namespace detail

// Weights, means, and covariances at their hard-label maximum-likelihood
// values: pi_g = n_g/n, mu_g = group mean, Sigma_g = group scatter / n_g.
inline MixtureParams estimate_from_labels(const Dataset& data, const HardLabels& labels,
                                          double ridge = 0.0) {
    detail::LabelEstimates est = detail::try_estimate_from_labels(data, labels, ridge);
    if (!est.feasible) {
        throw InfeasibleLabeling("infeasible labeling: " + est.reason, est.bad_component);
    }
    return std::move(est.params);
}

namespace detail {

inline void check_params(const Dataset& data, const MixtureParams& params) {
    if (params.groups() < 1) {
        throw std::invalid_argument("mixture parameters are empty");
    }
    for (const ComponentParams& c : params.components) {
        if (c.mean.size() != data.dim()) {
            throw std::invalid_argument("mixture/observation dimension mismatch");
        }
    }
}

// Per-observation, per-component matrix of log(pi_g) + log phi(x_i | g).
inline Eigen::MatrixXd log_weighted_densities(const Dataset& data,
                                              const MixtureParams& params) {
    check_params(data, params);
    const int n = data.n();
    const int G = params.groups();
    std::vector<GaussianLogDensity> dens;
    dens.reserve(G);
    for (int g = 0; g < G; ++g) {
        dens.emplace_back(params.components[g], g);
    }
    Eigen::MatrixXd a(n, G);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd x = data.points.row(i).transpose();
        for (int g = 0; g < G; ++g) {
            a(i, g) = std::log(params.components[g].weight) + dens[g](x);
        }
    }
    return a;
}

inline double log_sum_exp_row(const Eigen::MatrixXd& a, int row) {
    const double m = a.row(row).maxCoeff();
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (int g = 0; g < a.cols(); ++g) s += std::exp(a(row, g) - m);
    return m + std::log(s);
}

}  // namespace detail

// Observed-data log-likelihood sum_i log sum_g pi_g phi(x_i | mu_g, Sigma_g),
// stabilized with log-sum-exp over components.
inline double mixture_log_likelihood(const Dataset& data, const MixtureParams& params) {
    const Eigen::MatrixXd a = detail::log_weighted_densities(data, params);
    double total = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        total += detail::log_sum_exp_row(a, i);
    }
    return total;
}

// Log-likelihood at the hard-label estimates; infeasible labelings get -inf,
// an ordered sentinel below every finite fitness.
inline double fitness(const Dataset& data, const HardLabels& labels, double ridge = 0.0) {
    detail::LabelEstimates est = detail::try_estimate_from_labels(data, labels, ridge);
    if (!est.feasible) return kNegInf;
    return mixture_log_likelihood(data, est.params);
}

// EM E-step: responsibilities z_ig = pi_g phi_ig / sum_h pi_h phi_ih,
// computed in log space and normalized per row.
inline Responsibilities e_step(const Dataset& data, const MixtureParams& params) {
    const Eigen::MatrixXd a = detail::log_weighted_densities(data, params);
    Responsibilities r(data.n(), params.groups());
    for (int i = 0; i < data.n(); ++i) {
        const double lse = detail::log_sum_exp_row(a, i);
        for (int g = 0; g < params.groups(); ++g) {
            r(i, g) = std::exp(a(i, g) - lse);
        }
    }
    return r;
}

// MAP hardening: each row's 1 goes to the largest responsibility; ties break
// toward the lowest component index.
inline HardLabels map_harden(const Responsibilities& resp) {
    HardLabels labels;
    labels.groups = static_cast<int>(resp.cols());
    labels.assign.resize(resp.rows());
    for (int i = 0; i < resp.rows(); ++i) {
        int best = 0;
        for (int g = 1; g < resp.cols(); ++g) {
            if (resp(i, g) > resp(i, best)) best = g;
        }
        labels.assign[i] = best;
    }
    return labels;
}

struct EmResult {
    MixtureParams params;
    Responsibilities responsibilities;
    ModelScore score;
    int iterations = 0;
    std::vector<double> log_likelihood_path;  // one entry per E-step
};

// EM for the unconstrained Gaussian mixture, started from a hard labeling.
// Stops when the relative log-likelihood change drops below tol.
inline EmResult em_fit(const Dataset& data, int groups, const HardLabels& init,
                       double tol = 1e-8, int max_iter = 1000, double ridge = 0.0) {
    if (tol <= 0.0) throw std::invalid_argument("em_fit: tol must be positive");
    if (groups != init.groups) {
        throw std::invalid_argument("em_fit: init labeling has wrong number of groups");
    }
    const int n = data.n();
    const int p = data.dim();

    EmResult result;
    result.params = estimate_from_labels(data, init, ridge);

    double prev_ll = kNegInf;
    for (int iter = 1; iter <= max_iter; ++iter) {
        const Eigen::MatrixXd a = detail::log_weighted_densities(data, result.params);
        Responsibilities resp(n, groups);
        double ll = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lse = detail::log_sum_exp_row(a, i);
            ll += lse;
            for (int g = 0; g < groups; ++g) resp(i, g) = std::exp(a(i, g) - lse);
        }
        result.responsibilities = std::move(resp);
        result.log_likelihood_path.push_back(ll);
        result.iterations = iter;

        if (iter > 1 && std::abs(ll - prev_ll) / (1.0 + std::abs(prev_ll)) < tol) {
            break;
        }
        prev_ll = ll;
        if (iter == max_iter) break;

        // M-step: weighted analogues of the hard-label estimates.
        for (int g = 0; g < groups; ++g) {
            const double ng = result.responsibilities.col(g).sum();
            if (!(ng > 1e-10 * n)) {
                throw DegeneracyError("EM: weight of component " + std::to_string(g) +
                                          " collapsed at iteration " + std::to_string(iter),
                                      iter, ll);
            }
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
            for (int i = 0; i < n; ++i) {
                mean += result.responsibilities(i, g) * data.points.row(i).transpose();
            }
            mean /= ng;
            Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
            for (int i = 0; i < n; ++i) {
                const Eigen::VectorXd d = data.points.row(i).transpose() - mean;
                cov.noalias() += result.responsibilities(i, g) * (d * d.transpose());
            }
            cov /= ng;
            if (ridge > 0.0) cov.diagonal().array() += ridge;

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
            const double scale = cov.trace() / static_cast<double>(p);
            if (!cov.allFinite() || !(eig.eigenvalues().minCoeff() > kEigenvalueFloor * scale)) {
                throw DegeneracyError("EM: covariance of component " + std::to_string(g) +
                                          " became singular at iteration " +
                                          std::to_string(iter),
                                      iter, ll);
            }
            result.params.components[g].weight = ng / static_cast<double>(n);
            result.params.components[g].mean = std::move(mean);
            result.params.components[g].covariance = std::move(cov);
        }
    }

    const double final_ll = result.log_likelihood_path.back();
    const int rho = free_params_unconstrained(groups, p);
    result.score = ModelScore{final_ll, rho, n, bic(final_ll, rho, n)};
    return result;
}

}  // namespace evoclust
