#pragma once

#include "cqsim/clustering.hpp"
#include "cqsim/ensemble.hpp"
#include "cqsim/execution.hpp"
#include "cqsim/similarity.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cqsim {

/// Everything one pipeline run needs. Exactly one of input_path / generator is
/// set. Reference labels default to the generator's own when a generator is
/// used and labels_path is empty.
struct PipelineConfig {
    std::optional<std::filesystem::path> input_path;
    std::optional<std::string> generator;
    std::uint64_t seed = 0;
    std::vector<Measure> measures{Measure::theta_a, Measure::ucorr, Measure::chi_bar,
                                  Measure::chi};
    std::vector<double> qs{QuadrantLevel::kDefault};
    Index embed_dim = 1;
    std::optional<std::filesystem::path> labels_path;
    std::optional<std::filesystem::path> outlier_labels_path;
    std::optional<double> dbscan_eps;
    int dbscan_min_pts = 3;
    WithinOp ensemble_within = WithinOp::mean;
    AcrossOp ensemble_across = AcrossOp::max;
    SpreadDefinition db_spread = SpreadDefinition::root_sum_over_count;
    std::filesystem::path out_dir = "cqsim_out";
    Execution execution = Execution::parallel;

    /// Throws ConfigError on an inconsistent configuration.
    void validate() const;
};

/// Reads the declarative config form (JSON object whose keys mirror the CLI
/// flags: input, generate, seed, measure, q, labels, outlier_labels,
/// embed_dim, dbscan_eps, dbscan_minpts, ensemble_within, ensemble_across,
/// db_spread, out). Unknown keys are a ConfigError.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

struct MeasureResult {
    Measure measure = Measure::theta_a;
    double q = QuadrantLevel::kDefault;
    std::size_t failed_pairs = 0;
    std::size_t boundary_pairs = 0;
    Eigen::VectorXd eigenvalues;
    std::optional<double> db_index;
    std::string db_error;
    double dbscan_eps = 0.0;
    std::vector<int> dbscan_labels;
    int dbscan_clusters = 0;
    int dbscan_noise = 0;
    std::optional<double> ensemble_auc;
    std::string ensemble_error;
};

struct PipelineSummary {
    std::string dataset;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t clamped_pseudo_values = 0;
    /// AUC of the label-free baselines (within = all), per q-independent run.
    std::optional<double> auc_all_mean;
    std::optional<double> auc_all_max;
    std::vector<MeasureResult> results;
    std::vector<std::filesystem::path> files;

    nlohmann::json to_json() const;
};

/// Runs the whole flow and writes every artifact into config.out_dir:
///   similarity_<measure>_q<q>.csv   the k x k matrix
///   embedding_<measure>_q<q>.csv    spectral coordinates (+ reference label)
///   dbscan_<measure>_q<q>.csv       DBSCAN labels on exp(-W)
///   ensemble_<measure>_q<q>.csv     combined scores   } with outlier labels
///   roc_<measure>_q<q>.csv          ROC curve         }
///   ensemble_all_<op>.csv, roc_all_<op>.csv           label-free baselines
///   summary.json, summary.csv       Davies-Bouldin indices per (q, measure)
/// Everything is computed before the first file is written.
PipelineSummary run_pipeline(const PipelineConfig& config);

struct CurveRow {
    double q = 0.0;
    std::optional<double> theta_s, theta_f, theta_a, chi, chi_bar, ucorr;
};

/// theta_S, theta_F, theta_A, chi, chi_bar and UCorr of one column pair across
/// a q grid. Quantities that are undefined at some q are left empty.
std::vector<CurveRow> emit_curves(const PseudoMatrix& u, Index i, Index j,
                                  std::span<const double> q_grid);
void write_curves_csv(std::ostream& out, std::span<const CurveRow> rows);

/// "0.75" style tag used in artifact names.
std::string q_tag(double q);

} // namespace cqsim
