// Regenerates the synthetic fixture datasets under data/.
//
// banknote.csv and voles.csv are synthetic stand-ins for the classic Swiss
// banknote (Flury & Riedwyl) and female voles (Flury) datasets, which ship
// with R packages and cannot be redistributed here. Each is drawn from a
// fixed Gaussian mixture with the same dimensions, class sizes, and a
// comparable separation structure, so the clustering behaviour mirrors the
// originals. wine.csv is real data and is not touched by this tool.

#include <Eigen/Dense>
#include <iostream>
#include <string>
#include <vector>

#include "evoclust/csv.hpp"
#include "evoclust/dataset.hpp"
#include "evoclust/synthetic.hpp"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Samples exactly `count` observations from each component (class sizes are
// fixed, not multinomial).
evoclust::Dataset sample_stratified(const std::vector<int>& counts,
                                    const std::vector<VectorXd>& means,
                                    const std::vector<MatrixXd>& covs,
                                    const std::vector<std::string>& class_names,
                                    const std::vector<std::string>& feature_names,
                                    std::uint64_t seed) {
    evoclust::Dataset all;
    const int p = static_cast<int>(means[0].size());
    int total = 0;
    for (int c : counts) total += c;
    all.points.resize(total, p);
    all.truth.reserve(total);
    all.class_names = class_names;
    all.feature_names = feature_names;

    int row = 0;
    for (std::size_t g = 0; g < counts.size(); ++g) {
        evoclust::SyntheticSpec spec;
        spec.weights = {1.0};
        spec.means = {means[g]};
        spec.covariances = {covs[g]};
        spec.n = counts[g];
        spec.seed = evoclust::mix_seed(seed, static_cast<std::uint64_t>(g));
        const evoclust::Dataset part = evoclust::sample_mixture(spec);
        all.points.middleRows(row, counts[g]) = part.points;
        for (int i = 0; i < counts[g]; ++i) all.truth.push_back(static_cast<int>(g));
        row += counts[g];
    }
    return all;
}

MatrixXd cov_from_sd_corr(const VectorXd& sd, const MatrixXd& corr) {
    return sd.asDiagonal() * corr * sd.asDiagonal();
}

evoclust::Dataset make_banknote() {
    // Six banknote measurements: length, left, right, bottom, top, diagonal.
    // The genuine class is compact; the counterfeit class is stretched along
    // the bottom margin with a small off-centre subgroup, which is what makes
    // the centroid-based baseline lose more points than the medoid one.
    VectorXd mu_genuine(6), mu_counterfeit(6), mu_offset(6);
    mu_genuine << 214.97, 129.94, 129.72, 8.30, 10.17, 141.52;
    mu_counterfeit << 214.82, 130.30, 130.19, 10.40, 11.10, 139.55;
    mu_offset << 214.85, 130.25, 130.15, 12.10, 10.00, 139.80;

    VectorXd sd_genuine(6), sd_counterfeit(6), sd_offset(6);
    sd_genuine << 0.38, 0.35, 0.34, 0.55, 0.58, 0.42;
    sd_counterfeit << 0.46, 0.29, 0.30, 0.85, 0.55, 0.50;
    sd_offset << 0.46, 0.29, 0.30, 0.50, 0.45, 0.45;

    MatrixXd corr = MatrixXd::Identity(6, 6);
    corr(0, 1) = corr(1, 0) = 0.35;
    corr(1, 2) = corr(2, 1) = 0.45;
    corr(0, 2) = corr(2, 0) = 0.30;
    corr(3, 4) = corr(4, 3) = -0.40;
    corr(3, 5) = corr(5, 3) = -0.25;

    const std::vector<std::string> features = {"length", "left",  "right",
                                               "bottom", "top",   "diagonal"};
    // 100 genuine, then 85 mainstream counterfeits plus a 15-note subgroup.
    evoclust::Dataset data = sample_stratified(
        {100, 85, 15},
        {mu_genuine, mu_counterfeit, mu_offset},
        {cov_from_sd_corr(sd_genuine, corr), cov_from_sd_corr(sd_counterfeit, corr),
         cov_from_sd_corr(sd_offset, corr)},
        {"genuine", "counterfeit", "counterfeit"}, features, 20250801ULL);
    // Collapse the subgroup into the counterfeit class.
    for (int& t : data.truth) {
        if (t == 2) t = 1;
    }
    data.class_names = {"genuine", "counterfeit"};
    return data;
}

evoclust::Dataset make_voles() {
    // Age in days plus six skull measurements in 0.1mm units. The two
    // species overlap mostly in age, and the second species is more diffuse.
    VectorXd mu_cal(7), mu_och(7);
    mu_cal << 115.0, 252.0, 46.5, 47.0, 144.0, 39.5, 112.0;
    mu_och << 95.0, 239.0, 43.0, 45.0, 137.5, 41.5, 106.5;

    VectorXd sd_cal(7), sd_och(7);
    sd_cal << 55.0, 7.0, 2.0, 2.2, 4.2, 1.4, 3.4;
    sd_och << 48.0, 8.5, 2.4, 2.4, 4.8, 1.5, 3.8;

    MatrixXd corr = MatrixXd::Identity(7, 7);
    // age drives size: strong correlation with every measurement
    for (int j = 1; j < 7; ++j) {
        corr(0, j) = corr(j, 0) = 0.65;
    }
    for (int i = 1; i < 7; ++i) {
        for (int j = i + 1; j < 7; ++j) {
            corr(i, j) = corr(j, i) = 0.55;
        }
    }

    const std::vector<std::string> features = {
        "age",        "condylo_len",     "inc_foramen_len", "alveolar_len",
        "zygo_width", "interorb_width",  "skull_height"};
    return sample_stratified({41, 45}, {mu_cal, mu_och},
                             {cov_from_sd_corr(sd_cal, corr), cov_from_sd_corr(sd_och, corr)},
                             {"Microtus californicus", "Microtus ochrogaster"}, features,
                             20250802ULL);
}

}  // namespace

int main(int argc, char** argv) {
    std::string dir = "data";
    if (argc > 1) dir = argv[1];
    const evoclust::Dataset banknote = make_banknote();
    evoclust::save_csv(banknote, dir + "/banknote.csv");
    std::cout << "wrote " << dir << "/banknote.csv (" << banknote.n() << " x "
              << banknote.dim() << ")\n";
    const evoclust::Dataset voles = make_voles();
    evoclust::save_csv(voles, dir + "/voles.csv");
    std::cout << "wrote " << dir << "/voles.csv (" << voles.n() << " x " << voles.dim()
              << ")\n";
    return 0;
}
