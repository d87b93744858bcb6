#include "cqsim/csv.hpp"
#include "cqsim/datagen.hpp"
#include "cqsim/error.hpp"
#include "cqsim/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct RunFlags {
    std::string config_path;
    std::string input;
    std::string generate;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> measures;
    std::vector<double> qs;
    std::string labels;
    std::string outlier_labels;
    std::optional<long> embed_dim;
    std::optional<double> dbscan_eps;
    std::optional<int> dbscan_min_pts;
    std::string within;
    std::string across;
    std::string db_spread;
    std::string out;
    bool serial = false;
};

void add_run_flags(CLI::App& app, RunFlags& f) {
    app.add_option("--config", f.config_path, "JSON config file; flags override its values");
    app.add_option("--input", f.input, "scores CSV (header row of detector names)");
    app.add_option("--generate", f.generate, "built-in dataset: block, mixture, two_anom, t_ensemble");
    app.add_option("--seed", f.seed, "generator seed");
    app.add_option("--measure", f.measures,
                   "theta_a, theta_s, theta_f, chi, chi_bar, ucorr (repeatable)");
    app.add_option("--q", f.qs, "quadrant level in (0,1) (repeatable)");
    app.add_option("--labels", f.labels, "reference cluster labels CSV, or 'builtin'");
    app.add_option("--outlier-labels", f.outlier_labels, "row outlier labels CSV, or 'builtin'");
    app.add_option("--embed-dim", f.embed_dim, "spectral embedding dimension");
    app.add_option("--dbscan-eps", f.dbscan_eps, "DBSCAN radius on exp(-W); default from k-distance gap");
    app.add_option("--dbscan-minpts", f.dbscan_min_pts, "DBSCAN minimum neighbourhood size");
    app.add_option("--ensemble-within", f.within, "all, mean or max");
    app.add_option("--ensemble-across", f.across, "mean or max");
    app.add_option("--db-spread", f.db_spread, "root_sum (default) or standard");
    app.add_option("--out", f.out, "output directory");
    app.add_flag("--serial", f.serial, "disable OpenMP kernels");
}

cqsim::PipelineConfig resolve(const RunFlags& f) {
    nlohmann::json j = nlohmann::json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in)
            throw cqsim::ConfigError("cannot open config " + f.config_path);
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw cqsim::ConfigError(f.config_path + ": " + e.what());
        }
        if (!j.is_object())
            throw cqsim::ConfigError(f.config_path + ": config must be a JSON object");
    }
    if (!f.input.empty()) {
        j["input"] = f.input;
        j.erase("generate");
    }
    if (!f.generate.empty()) {
        j["generate"] = f.generate;
        if (f.input.empty())
            j.erase("input");
    }
    if (f.seed)
        j["seed"] = *f.seed;
    if (!f.measures.empty())
        j["measure"] = f.measures;
    if (!f.qs.empty())
        j["q"] = f.qs;
    if (!f.labels.empty())
        j["labels"] = f.labels;
    if (!f.outlier_labels.empty())
        j["outlier_labels"] = f.outlier_labels;
    if (f.embed_dim)
        j["embed_dim"] = *f.embed_dim;
    if (f.dbscan_eps)
        j["dbscan_eps"] = *f.dbscan_eps;
    if (f.dbscan_min_pts)
        j["dbscan_minpts"] = *f.dbscan_min_pts;
    if (!f.within.empty())
        j["ensemble_within"] = f.within;
    if (!f.across.empty())
        j["ensemble_across"] = f.across;
    if (!f.db_spread.empty())
        j["db_spread"] = f.db_spread;
    if (!f.out.empty())
        j["out"] = f.out;
    auto config = cqsim::config_from_json(j);
    if (f.serial)
        config.execution = cqsim::Execution::serial;
    return config;
}

void print_summary(const cqsim::PipelineSummary& s) {
    std::cout << s.dataset << ": " << s.rows << " rows x " << s.cols << " detectors\n";
    if (s.auc_all_mean)
        std::cout << "  AUC all/mean " << *s.auc_all_mean << ", all/max " << *s.auc_all_max << '\n';
    for (const auto& r : s.results) {
        std::cout << "  " << cqsim::to_string(r.measure) << " q=" << cqsim::q_tag(r.q) << ": DB ";
        if (r.db_index)
            std::cout << *r.db_index;
        else
            std::cout << (r.db_error.empty() ? "-" : "failed (" + r.db_error + ")");
        std::cout << ", DBSCAN " << r.dbscan_clusters << " clusters / " << r.dbscan_noise
                  << " noise";
        if (r.ensemble_auc)
            std::cout << ", ensemble AUC " << *r.ensemble_auc;
        if (r.failed_pairs)
            std::cout << ", " << r.failed_pairs << " failed pairs";
        std::cout << '\n';
    }
    std::cout << "  wrote " << s.files.size() << " files\n";
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const cqsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cqsim::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const cqsim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Copula quadrant similarity for anomaly detector scores"};
    app.require_subcommand(0, 1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "similarity, embedding, DB index, DBSCAN and ensemble");
    add_run_flags(*run, run_flags);

    std::string curves_input, curves_out;
    std::vector<double> curves_q;
    long ci = 0, cj = 1;
    auto* curves = app.add_subcommand("curves", "theta/chi/UCorr curves of one column pair over q");
    curves->add_option("--input", curves_input, "scores CSV")->required();
    curves->add_option("--i", ci, "first column (0-based)");
    curves->add_option("--j", cj, "second column (0-based)");
    curves->add_option("--q", curves_q, "q grid (repeatable); default 0.5..0.99");
    curves->add_option("--out", curves_out, "output CSV; stdout if omitted");

    std::string gen_name, gen_out = "cqsim_data";
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "write a built-in dataset as CSV files");
    generate->add_option("name", gen_name, "block, mixture, two_anom or t_ensemble")->required();
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output directory");

    // Flags without a subcommand mean "run".
    add_run_flags(app, run_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*curves) {
        return guarded([&] {
            const auto y = cqsim::read_scores_csv(curves_input);
            if (ci < 0 || cj < 0 || ci >= y.cols() || cj >= y.cols() || ci == cj)
                throw cqsim::ConfigError("--i/--j must be distinct column indices below " +
                                         std::to_string(y.cols()));
            if (curves_q.empty())
                for (int t = 50; t <= 99; ++t)
                    curves_q.push_back(t / 100.0);
            const auto u = cqsim::rank_transform(y);
            const auto rows = cqsim::emit_curves(u, ci, cj, curves_q);
            if (curves_out.empty()) {
                cqsim::write_curves_csv(std::cout, rows);
                return;
            }
            std::ofstream out(curves_out);
            if (!out)
                throw cqsim::ConfigError("cannot write " + curves_out);
            cqsim::write_curves_csv(out, rows);
        });
    }

    if (*generate) {
        return guarded([&] {
            const auto bundle = cqsim::generate_dataset(gen_name, gen_seed);
            std::filesystem::create_directories(gen_out);
            const std::filesystem::path dir(gen_out);
            std::ofstream scores(dir / (bundle.name + "_scores.csv"));
            cqsim::write_scores_csv(scores, bundle.scores.values(), bundle.scores.names());
            std::ofstream labels(dir / (bundle.name + "_labels.csv"));
            cqsim::write_labels_csv(labels, bundle.detector_cluster_labels);
            if (bundle.outlier_labels) {
                std::ofstream outliers(dir / (bundle.name + "_outliers.csv"));
                cqsim::write_labels_csv(outliers, *bundle.outlier_labels, "outlier");
            }
            if (!scores || !labels)
                throw cqsim::ConfigError("cannot write into " + gen_out);
            std::cout << "wrote " << bundle.name << " (" << bundle.scores.rows() << " x "
                      << bundle.scores.cols() << ") to " << gen_out << '\n';
        });
    }

    return guarded([&] { print_summary(cqsim::run_pipeline(resolve(run_flags))); });
}
