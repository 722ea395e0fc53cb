// Command-line front end: fit clustering models, sweep BIC over the number
// of components, evaluate labelings against a reference, and emit SVG
// scatterplots.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evoclust/evoclust.hpp"
#include "evoclust/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct DataFlags {
    std::string path;
    std::string truth_col;
    std::vector<std::string> features;
    bool scale = false;
};

struct FitFlags {
    int g = 2;
    int parents = 2;
    int clones = 10;
    int stagnation = 3;
    std::uint64_t seed = 1;
    int restarts = 25;
    double tol = 1e-8;
    int max_iter = 1000;
    double ridge = 0.0;
    int threads = 1;
};

struct OutputFlags {
    std::string out;
    std::string format = "json";
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
    cmd->add_option("--data", flags.path, "CSV file with a header row")->required();
    cmd->add_option("--truth-col", flags.truth_col,
                    "column holding reference class labels (name or 0-based index)");
    cmd->add_option("--features", flags.features,
                    "subset of feature columns (names or 0-based indices)")
        ->delimiter(',');
    cmd->add_flag("--scale", flags.scale, "standardize each feature to mean 0, sd 1");
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
    cmd->add_option("--out", flags.out, "write the report here instead of stdout");
    cmd->add_option("--format", flags.format, "report format")
        ->check(CLI::IsMember({"json", "table"}));
}

evoclust::Dataset load(const DataFlags& flags) {
    evoclust::DataSpec spec;
    spec.path = flags.path;
    if (!flags.truth_col.empty()) spec.truth_column = flags.truth_col;
    spec.feature_columns = flags.features;
    spec.standardize = flags.scale;
    return evoclust::load_csv(spec);
}

std::string cluster_letter(int g) {
    std::string name;
    do {
        name.insert(name.begin(), static_cast<char>('A' + g % 26));
        g = g / 26 - 1;
    } while (g >= 0);
    return name;
}

void attach_truth_metrics(evoclust::RunReport& report, const evoclust::Dataset& data,
                          const evoclust::HardLabels& labels) {
    if (!data.has_truth()) return;
    std::vector<std::string> cols;
    for (int g = 0; g < labels.groups; ++g) cols.push_back(cluster_letter(g));
    report.confusion = evoclust::confusion(data.truth, labels.assign, data.class_names, cols);
    report.rand = evoclust::rand_index(data.truth, labels.assign);
    report.ari = evoclust::ari(data.truth, labels.assign);
    report.misclassified = evoclust::misclassification_count(*report.confusion);
}

void emit(const json& j, const OutputFlags& out, const std::string& table_rendering) {
    const std::string text = (out.format == "table") ? table_rendering : j.dump(2) + "\n";
    if (out.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out.out, std::ios::binary);
        if (!f) throw evoclust::DataError("cannot write file: " + out.out);
        f << text;
    }
}

std::string render_confusion(const evoclust::ConfusionMatrix& cm) {
    std::ostringstream os;
    os << "confusion (rows = truth, cols = predicted):\n";
    os << "              ";
    for (const auto& c : cm.col_names) os << "\t" << c;
    os << "\n";
    for (int t = 0; t < cm.rows(); ++t) {
        os << "  " << cm.row_names[t];
        for (int p = 0; p < cm.cols(); ++p) os << "\t" << cm.counts[t][p];
        os << "\n";
    }
    return os.str();
}

std::string render_report(const evoclust::RunReport& r) {
    std::ostringstream os;
    os << "method:          " << r.method << "\n";
    os << "log_likelihood:  " << r.log_likelihood << "\n";
    os << "bic:             " << r.bic << "\n";
    if (r.generations) os << "generations:     " << *r.generations << "\n";
    if (r.ari) os << "ari:             " << *r.ari << "\n";
    if (r.rand) os << "rand:            " << *r.rand << "\n";
    if (r.misclassified) os << "misclassified:   " << *r.misclassified << "\n";
    os << "seed:            " << r.seed << "\n";
    os << "wall_time_ms:    " << r.wall_time_ms << "\n";
    if (r.confusion) os << render_confusion(*r.confusion);
    return os.str();
}

// Initial parents for the EA: one k-means labeling, one k-medoids labeling,
// further parents (if requested) from extra seeded k-means runs.
std::vector<evoclust::HardLabels> ea_initial_parents(const evoclust::Dataset& data,
                                                     const FitFlags& fit) {
    std::vector<evoclust::HardLabels> parents;
    evoclust::Rng km_rng(evoclust::mix_seed(fit.seed, 1));
    parents.push_back(evoclust::kmeans(data, fit.g, km_rng, fit.restarts).labels);
    if (fit.parents >= 2) {
        evoclust::Rng pam_rng(evoclust::mix_seed(fit.seed, 2));
        parents.push_back(evoclust::kmedoids(data, fit.g, pam_rng).labels);
    }
    for (int extra = 2; extra < fit.parents; ++extra) {
        evoclust::Rng rng(evoclust::mix_seed(fit.seed, 3 + static_cast<std::uint64_t>(extra)));
        parents.push_back(evoclust::kmeans(data, fit.g, rng, fit.restarts).labels);
    }
    return parents;
}

evoclust::RunReport run_fit(const std::string& method, const evoclust::Dataset& data,
                            const FitFlags& fit) {
    evoclust::RunReport report;
    report.method = method;
    report.seed = fit.seed;
    report.config = json{{"g", fit.g},          {"parents", fit.parents},
                         {"clones", fit.clones}, {"stagnation", fit.stagnation},
                         {"restarts", fit.restarts}, {"tol", fit.tol},
                         {"max_iter", fit.max_iter},  {"ridge", fit.ridge},
                         {"threads", fit.threads}};

    const int rho = evoclust::free_params_unconstrained(fit.g, data.dim());
    evoclust::HardLabels labels;

    if (method == "ea") {
        evoclust::EAConfig config;
        config.groups = fit.g;
        config.parents = fit.parents;
        config.clones = fit.clones;
        config.stagnation = fit.stagnation;
        config.seed = fit.seed;
        config.ridge = fit.ridge;
        const auto result =
            evoclust::evolve(data, config, ea_initial_parents(data, fit), fit.threads);
        labels = result.best.labels;
        report.log_likelihood = result.best.fitness;
        report.generations = result.generations;
    } else if (method == "em") {
        evoclust::Rng km_rng(evoclust::mix_seed(fit.seed, 1));
        const evoclust::HardLabels init =
            evoclust::kmeans(data, fit.g, km_rng, fit.restarts).labels;
        const auto result =
            evoclust::em_fit(data, fit.g, init, fit.tol, fit.max_iter, fit.ridge);
        labels = evoclust::map_harden(result.responsibilities);
        report.log_likelihood = result.score.log_likelihood;
        report.bic = result.score.bic;
        report.generations = result.iterations;
    } else if (method == "kmeans") {
        evoclust::Rng rng(evoclust::mix_seed(fit.seed, 1));
        labels = evoclust::kmeans(data, fit.g, rng, fit.restarts).labels;
        report.log_likelihood = evoclust::fitness(data, labels, fit.ridge);
    } else if (method == "kmedoids") {
        evoclust::Rng rng(evoclust::mix_seed(fit.seed, 2));
        labels = evoclust::kmedoids(data, fit.g, rng).labels;
        report.log_likelihood = evoclust::fitness(data, labels, fit.ridge);
    } else if (method == "cem") {
        evoclust::Rng rng(evoclust::mix_seed(fit.seed, 1));
        const evoclust::HardLabels init =
            evoclust::initial_labels_kmeanspp(data, fit.g, rng);
        labels = evoclust::cem_spherical(data, fit.g, init);
        report.log_likelihood = evoclust::fitness(data, labels, fit.ridge);
    } else {
        throw CLI::ValidationError("method", "unknown method: " + method);
    }

    if (method != "em") {
        report.bic = std::isfinite(report.log_likelihood)
                         ? evoclust::bic(report.log_likelihood, rho, data.n())
                         : evoclust::kNegInf;
    }
    report.final_labels = labels.assign;
    attach_truth_metrics(report, data, labels);
    return report;
}

// Reads a labeling from a plain text file (one label per line, strings
// allowed) or from a JSON run report (its final_labels field).
std::vector<int> read_labels_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw evoclust::DataError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const json j = json::parse(text, nullptr, true);
        if (!j.contains("final_labels")) {
            throw evoclust::DataError(path + ": JSON report has no final_labels field");
        }
        return j["final_labels"].get<std::vector<int>>();
    }

    std::vector<int> labels;
    std::vector<std::string> names;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        int code = -1;
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (names[k] == line) {
                code = static_cast<int>(k);
                break;
            }
        }
        if (code < 0) {
            code = static_cast<int>(names.size());
            names.push_back(line);
        }
        labels.push_back(code);
    }
    if (labels.empty()) throw evoclust::DataError(path + ": no labels found");
    return labels;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Hard model-based clustering via an evolutionary algorithm, "
                 "with EM, k-means, k-medoids, and spherical-CEM baselines"};
    app.require_subcommand(1);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a clustering model");
    std::string method;
    fit_cmd->add_option("method", method, "one of: ea, em, kmeans, kmedoids, cem")
        ->required()
        ->check(CLI::IsMember({"ea", "em", "kmeans", "kmedoids", "cem"}));
    DataFlags fit_data;
    add_data_flags(fit_cmd, fit_data);
    FitFlags fit_flags;
    fit_cmd->add_option("--g", fit_flags.g, "number of components")->required();
    fit_cmd->add_option("--parents", fit_flags.parents, "EA parents (default 2)");
    fit_cmd->add_option("--clones", fit_flags.clones, "EA clones per parent (default 10)");
    fit_cmd->add_option("--stagnation", fit_flags.stagnation,
                        "EA stagnation threshold (default 3)");
    fit_cmd->add_option("--seed", fit_flags.seed, "random seed (default 1)");
    fit_cmd->add_option("--restarts", fit_flags.restarts, "k-means restarts (default 25)");
    fit_cmd->add_option("--tol", fit_flags.tol, "EM convergence tolerance (default 1e-8)");
    fit_cmd->add_option("--max-iter", fit_flags.max_iter, "EM iteration cap (default 1000)");
    fit_cmd->add_option("--ridge", fit_flags.ridge,
                        "ridge added to covariance diagonals (default 0)");
    fit_cmd->add_option("--threads", fit_flags.threads,
                        "worker threads for fitness evaluation (default 1)");
    OutputFlags fit_out;
    add_output_flags(fit_cmd, fit_out);

    // bic-sweep
    auto* sweep_cmd = app.add_subcommand("bic-sweep", "fit a range of G and rank by BIC");
    DataFlags sweep_data;
    add_data_flags(sweep_cmd, sweep_data);
    FitFlags sweep_flags;
    std::string sweep_method = "em";
    int g_min = 1, g_max = 1;
    sweep_cmd->add_option("--g-min", g_min, "smallest number of components")->required();
    sweep_cmd->add_option("--g-max", g_max, "largest number of components")->required();
    sweep_cmd->add_option("--method", sweep_method, "em or ea (default em)")
        ->check(CLI::IsMember({"em", "ea"}));
    sweep_cmd->add_option("--seed", sweep_flags.seed, "random seed (default 1)");
    sweep_cmd->add_option("--clones", sweep_flags.clones, "EA clones per parent");
    sweep_cmd->add_option("--stagnation", sweep_flags.stagnation, "EA stagnation threshold");
    sweep_cmd->add_option("--restarts", sweep_flags.restarts, "k-means restarts");
    sweep_cmd->add_option("--tol", sweep_flags.tol, "EM convergence tolerance");
    sweep_cmd->add_option("--max-iter", sweep_flags.max_iter, "EM iteration cap");
    sweep_cmd->add_option("--ridge", sweep_flags.ridge, "covariance ridge");
    sweep_cmd->add_option("--threads", sweep_flags.threads, "worker threads");
    OutputFlags sweep_out;
    add_output_flags(sweep_cmd, sweep_out);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "compare a labeling with a reference");
    std::string eval_labels_path, eval_truth_path;
    DataFlags eval_data;
    eval_cmd->add_option("--labels", eval_labels_path,
                         "labeling to evaluate (text file or JSON report)")
        ->required();
    eval_cmd->add_option("--truth-file", eval_truth_path,
                         "reference labels, one per line");
    eval_cmd->add_option("--data", eval_data.path, "CSV file providing the reference");
    eval_cmd->add_option("--truth-col", eval_data.truth_col,
                         "reference column in --data (name or 0-based index)");
    OutputFlags eval_out;
    add_output_flags(eval_cmd, eval_out);

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "emit a 2-d scatterplot as SVG");
    DataFlags plot_data;
    add_data_flags(plot_cmd, plot_data);
    std::string plot_labels_path, plot_x, plot_y, plot_out_path;
    bool plot_truth = false;
    plot_cmd->add_option("--labels", plot_labels_path,
                         "labeling to colour by (text file or JSON report)");
    plot_cmd->add_flag("--use-truth", plot_truth, "colour by the --truth-col column");
    plot_cmd->add_option("--x", plot_x, "x-axis column name")->required();
    plot_cmd->add_option("--y", plot_y, "y-axis column name")->required();
    plot_cmd->add_option("--out", plot_out_path, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    auto elapsed_ms = [&started] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - started)
            .count();
    };

    if (fit_cmd->parsed()) {
        evoclust::Dataset data = load(fit_data);
        evoclust::RunReport report = run_fit(method, data, fit_flags);
        report.wall_time_ms = elapsed_ms();
        emit(evoclust::to_json(report), fit_out, render_report(report));
        return 0;
    }

    if (sweep_cmd->parsed()) {
        if (g_min < 1 || g_min > g_max) {
            throw CLI::ValidationError("--g-min", "need 1 <= g-min <= g-max");
        }
        evoclust::Dataset data = load(sweep_data);
        json rows = json::array();
        double best_bic = evoclust::kNegInf;
        int best_g = -1;
        for (int g = g_min; g <= g_max; ++g) {
            FitFlags flags = sweep_flags;
            flags.g = g;
            json row{{"g", g}};
            try {
                if (sweep_method == "em" && g == 1) {
                    // Single component: closed-form estimates, no EM loop.
                    evoclust::HardLabels all{std::vector<int>(data.n(), 0), 1};
                    const double ll = evoclust::fitness(data, all, flags.ridge);
                    const int rho = evoclust::free_params_unconstrained(1, data.dim());
                    row["log_likelihood"] = ll;
                    row["free_params"] = rho;
                    row["bic"] = evoclust::bic(ll, rho, data.n());
                } else {
                    const evoclust::RunReport r = run_fit(sweep_method, data, flags);
                    row["log_likelihood"] = r.log_likelihood;
                    row["free_params"] = evoclust::free_params_unconstrained(g, data.dim());
                    row["bic"] = r.bic;
                }
                if (row["bic"].get<double>() > best_bic) {
                    best_bic = row["bic"].get<double>();
                    best_g = g;
                }
            } catch (const evoclust::Error& e) {
                row["error"] = e.what();
            }
            rows.push_back(row);
        }
        std::sort(rows.begin(), rows.end(), [](const json& a, const json& b) {
            const double ba = a.contains("bic") ? a["bic"].get<double>() : evoclust::kNegInf;
            const double bb = b.contains("bic") ? b["bic"].get<double>() : evoclust::kNegInf;
            if (ba != bb) return ba > bb;
            return a["g"].get<int>() < b["g"].get<int>();
        });
        json out{{"version", evoclust::kReportVersion},
                 {"method", sweep_method},
                 {"sweep", rows},
                 {"best_g", best_g},
                 {"seed", sweep_flags.seed}};
        std::ostringstream table;
        table << "BIC sweep (" << sweep_method << "), best G = " << best_g << "\n";
        table << "g\tlog_likelihood\tfree_params\tbic\n";
        for (const json& row : rows) {
            if (row.contains("error")) {
                table << row["g"].get<int>() << "\t(error: "
                      << row["error"].get<std::string>() << ")\n";
            } else {
                table << row["g"].get<int>() << "\t" << row["log_likelihood"].get<double>()
                      << "\t" << row["free_params"].get<int>() << "\t"
                      << row["bic"].get<double>()
                      << (row["g"].get<int>() == best_g ? "\t<-- best" : "") << "\n";
            }
        }
        emit(out, sweep_out, table.str());
        return 0;
    }

    if (eval_cmd->parsed()) {
        const std::vector<int> predicted = read_labels_file(eval_labels_path);
        std::vector<int> truth;
        std::vector<std::string> truth_names;
        if (!eval_truth_path.empty()) {
            truth = read_labels_file(eval_truth_path);
        } else if (!eval_data.path.empty() && !eval_data.truth_col.empty()) {
            const evoclust::Dataset data = load(eval_data);
            if (!data.has_truth()) {
                throw evoclust::DataError("evaluate: --truth-col produced no labels");
            }
            truth = data.truth;
            truth_names = data.class_names;
        } else {
            throw CLI::ValidationError(
                "evaluate", "need --truth-file or --data with --truth-col");
        }
        if (truth.size() != predicted.size()) {
            throw evoclust::DataError("evaluate: labelings have different lengths (" +
                                      std::to_string(truth.size()) + " vs " +
                                      std::to_string(predicted.size()) + ")");
        }
        const auto cm = evoclust::confusion(truth, predicted, truth_names, {});
        json out{{"version", evoclust::kReportVersion},
                 {"n", truth.size()},
                 {"confusion", evoclust::to_json(cm)},
                 {"rand", evoclust::rand_index(truth, predicted)},
                 {"ari", evoclust::ari(truth, predicted)},
                 {"misclassified", evoclust::misclassification_count(cm)}};
        std::ostringstream table;
        table << "n:              " << truth.size() << "\n"
              << "rand:           " << out["rand"].get<double>() << "\n"
              << "ari:            " << out["ari"].get<double>() << "\n"
              << "misclassified:  " << out["misclassified"].get<int>() << "\n"
              << render_confusion(cm);
        emit(out, eval_out, table.str());
        return 0;
    }

    // plot
    evoclust::Dataset data = load(plot_data);
    std::vector<int> labels;
    if (plot_truth) {
        if (!data.has_truth()) {
            throw evoclust::DataError("plot: --use-truth needs --truth-col");
        }
        labels = data.truth;
    } else {
        if (plot_labels_path.empty()) {
            throw CLI::ValidationError("plot", "need --labels or --use-truth");
        }
        labels = read_labels_file(plot_labels_path);
    }
    if (labels.size() != static_cast<std::size_t>(data.n())) {
        throw evoclust::DataError("plot: labeling length does not match data");
    }
    int xc = -1, yc = -1;
    for (int c = 0; c < data.dim(); ++c) {
        if (data.feature_names[c] == plot_x) xc = c;
        if (data.feature_names[c] == plot_y) yc = c;
    }
    if (xc < 0) throw evoclust::DataError("plot: no column named '" + plot_x + "'");
    if (yc < 0) throw evoclust::DataError("plot: no column named '" + plot_y + "'");
    std::vector<double> xs(data.n()), ys(data.n());
    for (int i = 0; i < data.n(); ++i) {
        xs[i] = data.points(i, xc);
        ys[i] = data.points(i, yc);
    }
    evoclust::PlotOptions opt;
    opt.x_label = plot_x;
    opt.y_label = plot_y;
    const std::string svg = evoclust::scatter_svg(xs, ys, labels, opt);
    std::ofstream f(plot_out_path, std::ios::binary);
    if (!f) throw evoclust::DataError("cannot write file: " + plot_out_path);
    f << svg;
    return 0;
}

json error_json(const std::string& type, const std::string& message) {
    return json{{"version", evoclust::kReportVersion},
                {"error", json{{"type", type}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << error_json("usage", e.what()).dump(2) << "\n";
        return kExitUsage;
    } catch (const evoclust::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << error_json("data", e.what()).dump(2) << "\n";
        return kExitData;
    } catch (const evoclust::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << error_json("numerical", e.what()).dump(2) << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << error_json("usage", e.what()).dump(2) << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << error_json("internal", e.what()).dump(2) << "\n";
        return 1;
    }
}
