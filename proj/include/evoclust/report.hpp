#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evoclust/metrics.hpp"

namespace evoclust {

inline constexpr int kReportVersion = 1;

// Everything a fit/evaluate command reports. Serializes to a single JSON
// object; wall_time_ms is the only field excluded from determinism checks.
struct RunReport {
    std::string method;
    nlohmann::json config = nlohmann::json::object();
    std::vector<int> final_labels;
    double log_likelihood = 0.0;
    double bic = 0.0;
    std::optional<ConfusionMatrix> confusion;
    std::optional<double> rand;
    std::optional<double> ari;
    std::optional<int> misclassified;
    std::optional<int> generations;
    std::int64_t wall_time_ms = 0;
    std::uint64_t seed = 0;
};

inline nlohmann::json to_json(const ConfusionMatrix& cm) {
    return nlohmann::json{{"rows", cm.row_names},
                          {"cols", cm.col_names},
                          {"counts", cm.counts}};
}

inline ConfusionMatrix confusion_from_json(const nlohmann::json& j) {
    ConfusionMatrix cm;
    cm.row_names = j.at("rows").get<std::vector<std::string>>();
    cm.col_names = j.at("cols").get<std::vector<std::string>>();
    cm.counts = j.at("counts").get<std::vector<std::vector<std::int64_t>>>();
    return cm;
}

inline nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j{{"version", kReportVersion},
                     {"method", r.method},
                     {"config", r.config},
                     {"final_labels", r.final_labels},
                     {"log_likelihood", r.log_likelihood},
                     {"bic", r.bic},
                     {"wall_time_ms", r.wall_time_ms},
                     {"seed", r.seed}};
    if (r.confusion) j["confusion"] = to_json(*r.confusion);
    if (r.rand) j["rand"] = *r.rand;
    if (r.ari) j["ari"] = *r.ari;
    if (r.misclassified) j["misclassified"] = *r.misclassified;
    if (r.generations) j["generations"] = *r.generations;
    return j;
}

inline RunReport report_from_json(const nlohmann::json& j) {
    RunReport r;
    r.method = j.at("method").get<std::string>();
    r.config = j.at("config");
    r.final_labels = j.at("final_labels").get<std::vector<int>>();
    r.log_likelihood = j.at("log_likelihood").get<double>();
    r.bic = j.at("bic").get<double>();
    r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("confusion")) r.confusion = confusion_from_json(j["confusion"]);
    if (j.contains("rand")) r.rand = j["rand"].get<double>();
    if (j.contains("ari")) r.ari = j["ari"].get<double>();
    if (j.contains("misclassified")) r.misclassified = j["misclassified"].get<int>();
    if (j.contains("generations")) r.generations = j["generations"].get<int>();
    return r;
}

}  // namespace evoclust
