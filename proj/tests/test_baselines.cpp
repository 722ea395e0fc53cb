#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "evoclust/baselines.hpp"
#include "helpers.hpp"

using namespace evoclust;

namespace {

Dataset dataset_1d(std::initializer_list<double> values) {
    Dataset d;
    d.points.resize(static_cast<int>(values.size()), 1);
    int i = 0;
    for (double v : values) d.points(i++, 0) = v;
    return d;
}

}  // namespace

TEST_CASE("kmeans: four corners, four clusters") {
    Dataset data;
    data.points.resize(4, 2);
    data.points << 0, 0, 1, 0, 0, 1, 1, 1;
    Rng rng(3);
    const KMeansResult result = kmeans(data, 4, rng);
    CHECK(result.within_ss == 0.0);
    std::set<int> distinct(result.labels.assign.begin(), result.labels.assign.end());
    CHECK(distinct.size() == 4);
}

TEST_CASE("kmeans: obvious 1-d split") {
    const Dataset data = dataset_1d({0.0, 1.0, 10.0, 11.0});
    Rng rng(4);
    const KMeansResult result = kmeans(data, 2, rng);
    CHECK(same_partition(result.labels, HardLabels{{0, 0, 1, 1}, 2}));
    std::vector<double> centers = {result.centers(0, 0), result.centers(1, 0)};
    std::sort(centers.begin(), centers.end());
    CHECK(centers[0] == 0.5);
    CHECK(centers[1] == 10.5);
}

TEST_CASE("kmeans: G > n is rejected") {
    const Dataset data = dataset_1d({0.0, 1.0});
    Rng rng(1);
    CHECK_THROWS_AS(kmeans(data, 3, rng), std::invalid_argument);
}

TEST_CASE("kmeans: nearest-center invariant at termination, wss non-increasing") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Dataset data = oracle::two_blob_instance(40, 2, 3.0, seed);
        Rng rng(seed);
        std::vector<double> trace;
        const KMeansResult result = detail::lloyd(
            data.points, detail::kmeanspp_centers(data.points, 3, rng), 500, &trace);
        for (int i = 0; i < data.n(); ++i) {
            const int assigned = result.labels.assign[i];
            const double own =
                (data.points.row(i) - result.centers.row(assigned)).squaredNorm();
            for (int g = 0; g < 3; ++g) {
                CHECK(own <= (data.points.row(i) - result.centers.row(g)).squaredNorm() + 1e-12);
            }
        }
        for (std::size_t t = 1; t < trace.size(); ++t) {
            CHECK(trace[t] <= trace[t - 1] + 1e-9);
        }
        // no empty clusters
        const std::vector<int> counts = result.labels.counts();
        CHECK(*std::min_element(counts.begin(), counts.end()) > 0);
    }
}

TEST_CASE("kmeans_from_labels: rejects empty groups") {
    const Dataset data = dataset_1d({0.0, 1.0, 2.0});
    CHECK_THROWS_AS(kmeans_from_labels(data, HardLabels{{0, 0, 0}, 2}),
                    std::invalid_argument);
}

TEST_CASE("kmedoids: obvious 1-d split, medoids are dataset rows") {
    const Dataset data = dataset_1d({0.0, 1.0, 10.0, 11.0});
    Rng rng(5);
    const KMedoidsResult result = kmedoids(data, 2, rng);
    CHECK(same_partition(result.labels, HardLabels{{0, 0, 1, 1}, 2}));
    REQUIRE(result.medoid_indices.size() == 2);
    std::vector<double> medoid_values = {data.points(result.medoid_indices[0], 0),
                                         data.points(result.medoid_indices[1], 0)};
    std::sort(medoid_values.begin(), medoid_values.end());
    CHECK(medoid_values[0] <= 1.0);
    CHECK(medoid_values[1] >= 10.0);
}

TEST_CASE("kmedoids: assignment is nearest-medoid and cost is their sum") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Dataset data = oracle::two_blob_instance(30, 3, 4.0, 70 + seed);
        Rng rng(seed);
        const KMedoidsResult result = kmedoids(data, 3, rng);
        std::set<int> distinct(result.medoid_indices.begin(), result.medoid_indices.end());
        CHECK(distinct.size() == 3);
        double cost = 0.0;
        for (int i = 0; i < data.n(); ++i) {
            double nearest = 1e300;
            for (int m : result.medoid_indices) {
                nearest = std::min(nearest, (data.points.row(i) - data.points.row(m)).norm());
            }
            const int assigned = result.medoid_indices[result.labels.assign[i]];
            CHECK((data.points.row(i) - data.points.row(assigned)).norm() <= nearest + 1e-12);
            cost += nearest;
        }
        CHECK(std::abs(cost - result.total_cost) < 1e-9);
        CHECK(result.labels.counts()[0] > 0);
    }
}

TEST_CASE("kmedoids: G > n is rejected") {
    const Dataset data = dataset_1d({0.0});
    Rng rng(1);
    CHECK_THROWS_AS(kmedoids(data, 2, rng), std::invalid_argument);
}

TEST_CASE("cem_spherical: converges to the obvious split") {
    const Dataset data = dataset_1d({0.0, 1.0, 10.0, 11.0});
    const HardLabels out = cem_spherical(data, 2, HardLabels{{0, 1, 0, 1}, 2});
    CHECK(same_partition(out, HardLabels{{0, 0, 1, 1}, 2}));
}

TEST_CASE("cem_spherical: single group returns the init unchanged") {
    const Dataset data = dataset_1d({0.0, 1.0, 2.0});
    const HardLabels init{{0, 0, 0}, 1};
    CHECK(cem_spherical(data, 1, init) == init);
}

TEST_CASE("cem_spherical: matches Lloyd's k-means from the same labeling") {
    // the restricted-model equivalence, on a batch of random instances
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const int n = 20 + static_cast<int>(rng.below(30));
        const int p = 1 + static_cast<int>(rng.below(3));
        const int G = 2 + static_cast<int>(rng.below(2));
        const Dataset data = oracle::random_dataset(n, p, 900 + seed);
        const HardLabels init = oracle::random_labels_nonempty(n, G, rng);
        const HardLabels via_cem = cem_spherical(data, G, init);
        const KMeansResult via_lloyd = kmeans_from_labels(data, init);
        CHECK(same_partition(via_cem, via_lloyd.labels));
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("all baselines produce one-hot labels with no empty group") {
    const Dataset data = oracle::two_blob_instance(24, 2, 5.0, 55);
    Rng rng(8);
    const auto km = kmeans(data, 3, rng);
    const auto pam = kmedoids(data, 3, rng);
    Rng rng2(9);
    const HardLabels init = oracle::random_labels_nonempty(24, 3, rng2);
    const auto cem = cem_spherical(data, 3, init);
    for (const HardLabels& labels : {km.labels, pam.labels, cem}) {
        CHECK(labels.in_range());
        const std::vector<int> counts = labels.counts();
        CHECK(*std::min_element(counts.begin(), counts.end()) > 0);
    }
}
