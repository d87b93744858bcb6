#include "cqsim/pipeline.hpp"

#include "cqsim/csv.hpp"
#include "cqsim/datagen.hpp"
#include "cqsim/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace cqsim {

namespace {

constexpr std::string_view kBuiltinLabels = "builtin";

std::string_view to_string(SpreadDefinition s) {
    return s == SpreadDefinition::root_sum_over_count ? "root_sum" : "standard";
}

SpreadDefinition parse_spread(std::string_view s) {
    if (s == "root_sum")
        return SpreadDefinition::root_sum_over_count;
    if (s == "standard")
        return SpreadDefinition::mean_distance;
    throw ConfigError("unknown db_spread '" + std::string(s) + "' (expected root_sum or standard)");
}

template <class T>
std::vector<T> one_or_many(const nlohmann::json& v) {
    if (v.is_array())
        return v.get<std::vector<T>>();
    return {v.get<T>()};
}

struct LoadedData {
    std::string name;
    ScoreMatrix scores;
    std::optional<std::vector<int>> reference_labels;
    std::optional<std::vector<int>> outlier_labels;
};

bool is_builtin(const std::optional<std::filesystem::path>& p) {
    return p && p->string() == kBuiltinLabels;
}

LoadedData load_data(const PipelineConfig& c) {
    std::optional<DatasetBundle> bundle;
    std::optional<ScoreMatrix> scores;
    std::string name;
    if (c.generator) {
        bundle = generate_dataset(*c.generator, c.seed);
        name = bundle->name;
    } else {
        scores = read_scores_csv(*c.input_path);
        name = c.input_path->stem().string();
    }
    LoadedData data{name, bundle ? bundle->scores : *scores, std::nullopt, std::nullopt};
    const auto k = static_cast<std::size_t>(data.scores.cols());
    const auto n = static_cast<std::size_t>(data.scores.rows());

    if (c.labels_path && !is_builtin(c.labels_path)) {
        data.reference_labels = read_labels_csv(*c.labels_path);
    } else if (bundle) {
        data.reference_labels = bundle->detector_cluster_labels;
    } else if (is_builtin(c.labels_path)) {
        throw ConfigError("--labels builtin needs --generate; no reference labels for file input");
    }
    if (data.reference_labels && data.reference_labels->size() != k)
        throw DataError("reference labels: " + std::to_string(data.reference_labels->size()) +
                        " labels for " + std::to_string(k) + " detector columns");

    if (c.outlier_labels_path && !is_builtin(c.outlier_labels_path)) {
        data.outlier_labels = read_labels_csv(*c.outlier_labels_path);
    } else if (bundle) {
        data.outlier_labels = bundle->outlier_labels;
    } else if (is_builtin(c.outlier_labels_path)) {
        throw ConfigError("--outlier-labels builtin needs --generate");
    }
    if (data.outlier_labels && data.outlier_labels->size() != n)
        throw DataError("outlier labels: " + std::to_string(data.outlier_labels->size()) +
                        " labels for " + std::to_string(n) + " rows");
    return data;
}

std::string scores_csv(std::span<const double> scores) {
    std::ostringstream out;
    out << "row,score\n";
    for (std::size_t r = 0; r < scores.size(); ++r)
        out << r << ',' << format_double(scores[r]) << '\n';
    return out.str();
}

std::string roc_csv(const RocResult& roc) {
    std::ostringstream out;
    out << "fpr,tpr\n";
    for (const auto& p : roc.curve)
        out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
    return out.str();
}

// DB over the non-noise detectors only.
ClusterEvaluation reference_db(const SpectralEmbedding& e, const std::vector<int>& labels,
                               SpreadDefinition spread) {
    std::vector<Index> keep;
    for (std::size_t r = 0; r < labels.size(); ++r)
        if (labels[r] >= 0)
            keep.push_back(static_cast<Index>(r));
    Eigen::MatrixXd points(static_cast<Index>(keep.size()), e.coordinates.cols());
    std::vector<int> kept_labels;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        points.row(static_cast<Index>(r)) = e.coordinates.row(keep[r]);
        kept_labels.push_back(labels[static_cast<std::size_t>(keep[r])]);
    }
    return davies_bouldin(points, kept_labels, spread);
}

} // namespace

std::string q_tag(double q) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", q);
    return buf;
}

void PipelineConfig::validate() const {
    if (input_path.has_value() == generator.has_value())
        throw ConfigError("exactly one of --input or --generate is required");
    if (measures.empty())
        throw ConfigError("at least one measure must be selected");
    if (qs.empty())
        throw ConfigError("at least one q value must be given");
    for (const double q : qs)
        QuadrantLevel{q};
    if (embed_dim < 1)
        throw ConfigError("embed_dim must be >= 1");
    if (dbscan_eps && !(*dbscan_eps > 0.0))
        throw ConfigError("dbscan_eps must be > 0");
    if (dbscan_min_pts < 1)
        throw ConfigError("dbscan_minpts must be >= 1");
    if (out_dir.empty())
        throw ConfigError("output directory must not be empty");
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    PipelineConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "input")
                c.input_path = v.get<std::string>();
            else if (key == "generate")
                c.generator = v.get<std::string>();
            else if (key == "seed")
                c.seed = v.get<std::uint64_t>();
            else if (key == "measure") {
                c.measures.clear();
                for (const auto& m : one_or_many<std::string>(v))
                    c.measures.push_back(parse_measure(m));
            } else if (key == "q")
                c.qs = one_or_many<double>(v);
            else if (key == "labels")
                c.labels_path = v.get<std::string>();
            else if (key == "outlier_labels")
                c.outlier_labels_path = v.get<std::string>();
            else if (key == "embed_dim")
                c.embed_dim = v.get<Index>();
            else if (key == "dbscan_eps")
                c.dbscan_eps = v.get<double>();
            else if (key == "dbscan_minpts")
                c.dbscan_min_pts = v.get<int>();
            else if (key == "ensemble_within")
                c.ensemble_within = parse_within(v.get<std::string>());
            else if (key == "ensemble_across")
                c.ensemble_across = parse_across(v.get<std::string>());
            else if (key == "db_spread")
                c.db_spread = parse_spread(v.get<std::string>());
            else if (key == "out")
                c.out_dir = v.get<std::string>();
            else
                throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const PipelineConfig& c) {
    nlohmann::json j;
    if (c.input_path)
        j["input"] = c.input_path->string();
    if (c.generator)
        j["generate"] = *c.generator;
    j["seed"] = c.seed;
    j["measure"] = nlohmann::json::array();
    for (const Measure m : c.measures)
        j["measure"].push_back(std::string(to_string(m)));
    j["q"] = c.qs;
    if (c.labels_path)
        j["labels"] = c.labels_path->string();
    if (c.outlier_labels_path)
        j["outlier_labels"] = c.outlier_labels_path->string();
    j["embed_dim"] = c.embed_dim;
    if (c.dbscan_eps)
        j["dbscan_eps"] = *c.dbscan_eps;
    j["dbscan_minpts"] = c.dbscan_min_pts;
    j["ensemble_within"] = std::string(to_string(c.ensemble_within));
    j["ensemble_across"] = std::string(to_string(c.ensemble_across));
    j["db_spread"] = std::string(to_string(c.db_spread));
    j["out"] = c.out_dir.string();
    return j;
}

nlohmann::json PipelineSummary::to_json() const {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["rows"] = rows;
    j["cols"] = cols;
    j["clamped_pseudo_values"] = clamped_pseudo_values;
    if (auc_all_mean)
        j["auc_all_mean"] = *auc_all_mean;
    if (auc_all_max)
        j["auc_all_max"] = *auc_all_max;
    auto& arr = j["results"] = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json e;
        e["measure"] = std::string(cqsim::to_string(r.measure));
        e["q"] = r.q;
        e["failed_pairs"] = r.failed_pairs;
        e["boundary_pairs"] = r.boundary_pairs;
        e["eigenvalues"] = std::vector<double>(r.eigenvalues.begin(), r.eigenvalues.end());
        e["db_index"] = r.db_index ? nlohmann::json(*r.db_index) : nlohmann::json();
        if (!r.db_error.empty())
            e["db_error"] = r.db_error;
        e["dbscan"] = {{"eps", r.dbscan_eps},
                       {"clusters", r.dbscan_clusters},
                       {"noise", r.dbscan_noise},
                       {"labels", r.dbscan_labels}};
        if (r.ensemble_auc)
            e["ensemble_auc"] = *r.ensemble_auc;
        if (!r.ensemble_error.empty())
            e["ensemble_error"] = r.ensemble_error;
        arr.push_back(std::move(e));
    }
    return j;
}

PipelineSummary run_pipeline(const PipelineConfig& c) {
    c.validate();
    const LoadedData data = load_data(c);
    const PseudoMatrix u = rank_transform(data.scores, c.execution);
    const auto& names = data.scores.names();

    PipelineSummary summary;
    summary.dataset = data.name;
    summary.rows = static_cast<std::size_t>(u.rows());
    summary.cols = static_cast<std::size_t>(u.cols());
    summary.clamped_pseudo_values = u.clamped_count();

    // Relative file name -> contents; written once everything succeeded.
    std::map<std::string, std::string> files;

    if (data.outlier_labels) {
        for (const AcrossOp op : {AcrossOp::mean, AcrossOp::max}) {
            const auto scores = combine_scores(u, {WithinOp::all, op, {}}, c.execution);
            const auto roc = auc_roc(scores, *data.outlier_labels);
            (op == AcrossOp::mean ? summary.auc_all_mean : summary.auc_all_max) = roc.auc;
            const std::string tag(to_string(op));
            files["ensemble_all_" + tag + ".csv"] = scores_csv(scores);
            files["roc_all_" + tag + ".csv"] = roc_csv(roc);
        }
    }

    for (const double q : c.qs) {
        for (const Measure m : c.measures) {
            const std::string tag = std::string(to_string(m)) + "_q" + q_tag(q);
            const SimilarityMatrix w = build_similarity(u, m, QuadrantLevel(q), c.execution);

            MeasureResult res;
            res.measure = m;
            res.q = q;
            for (const auto& d : w.diagnostics) {
                res.failed_pairs += d.failed ? 1 : 0;
                res.boundary_pairs += d.flag != BoundaryFlag::interior ? 1 : 0;
            }
            {
                std::ostringstream out;
                write_matrix_csv(out, w.values, names);
                files["similarity_" + tag + ".csv"] = out.str();
            }

            const Index dim = std::min<Index>(c.embed_dim, u.cols() - 1);
            const SpectralEmbedding e = spectral_embed(w, dim);
            res.eigenvalues = e.eigenvalues;
            if (data.reference_labels) {
                try {
                    res.db_index = reference_db(e, *data.reference_labels, c.db_spread).db_index;
                } catch (const NumericalError& err) {
                    res.db_error = err.what();
                }
            }
            {
                std::ostringstream out;
                out << "detector";
                for (Index d = 0; d < dim; ++d)
                    out << ",dim" << d + 1;
                if (data.reference_labels)
                    out << ",reference_label";
                out << '\n';
                for (Index r = 0; r < e.coordinates.rows(); ++r) {
                    out << names[static_cast<std::size_t>(r)];
                    for (Index d = 0; d < dim; ++d)
                        out << ',' << format_double(e.coordinates(r, d));
                    if (data.reference_labels)
                        out << ',' << (*data.reference_labels)[static_cast<std::size_t>(r)];
                    out << '\n';
                }
                files["embedding_" + tag + ".csv"] = out.str();
            }

            const Eigen::MatrixXd dis = dissimilarity_from_similarity(w.values);
            res.dbscan_eps = c.dbscan_eps ? *c.dbscan_eps : default_dbscan_eps(dis, c.dbscan_min_pts);
            res.dbscan_labels = dbscan_precomputed(dis, res.dbscan_eps, c.dbscan_min_pts);
            std::set<int> clusters;
            for (const int l : res.dbscan_labels) {
                if (l == kNoiseLabel)
                    ++res.dbscan_noise;
                else
                    clusters.insert(l);
            }
            res.dbscan_clusters = static_cast<int>(clusters.size());
            {
                std::ostringstream out;
                out << "detector,label\n";
                for (std::size_t r = 0; r < res.dbscan_labels.size(); ++r)
                    out << names[r] << ',' << res.dbscan_labels[r] << '\n';
                files["dbscan_" + tag + ".csv"] = out.str();
            }

            if (data.outlier_labels) {
                try {
                    const EnsembleSpec spec{c.ensemble_within, c.ensemble_across,
                                            res.dbscan_labels};
                    const auto scores = combine_scores(u, spec, c.execution);
                    const auto roc = auc_roc(scores, *data.outlier_labels);
                    res.ensemble_auc = roc.auc;
                    files["ensemble_" + tag + ".csv"] = scores_csv(scores);
                    files["roc_" + tag + ".csv"] = roc_csv(roc);
                } catch (const ConfigError& err) {
                    res.ensemble_error = err.what();
                }
            }
            summary.results.push_back(std::move(res));
        }
    }

    {
        std::ostringstream out;
        out << "dataset,q";
        for (const Measure m : c.measures)
            out << ',' << to_string(m);
        out << '\n';
        for (const double q : c.qs) {
            out << data.name << ',' << q_tag(q);
            for (const Measure m : c.measures) {
                out << ',';
                for (const auto& r : summary.results)
                    if (r.q == q && r.measure == m && r.db_index)
                        out << format_double(*r.db_index);
            }
            out << '\n';
        }
        files["summary.csv"] = out.str();
    }
    {
        nlohmann::json j = summary.to_json();
        j["config"] = to_json(c);
        files["summary.json"] = j.dump(2) + "\n";
    }

    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + c.out_dir.string() + ": " +
                          ec.message());
    for (const auto& [rel, contents] : files) {
        const auto path = c.out_dir / rel;
        std::ofstream out(path, std::ios::binary);
        out << contents;
        if (!out)
            throw ConfigError("cannot write " + path.string());
        summary.files.push_back(path);
    }
    return summary;
}

std::vector<CurveRow> emit_curves(const PseudoMatrix& u, Index i, Index j,
                                  std::span<const double> q_grid) {
    std::vector<CurveRow> rows;
    for (const double qv : q_grid) {
        const QuadrantLevel q(qv);
        CurveRow row;
        row.q = qv;
        try {
            const auto fit = fit_pair(u, i, j, q);
            row.theta_s = fit.theta_s;
            row.theta_f = fit.theta_f;
            row.theta_a = fit.theta_a;
        } catch (const NumericalError&) {
        }
        try {
            row.chi = chi_hat(u, i, j, q);
        } catch (const NumericalError&) {
        }
        if (const auto cb = chi_bar_hat(u, i, j, q); !cb.degenerate)
            row.chi_bar = cb.value;
        try {
            row.ucorr = ucorr(u, i, j, q);
        } catch (const NumericalError&) {
        }
        rows.push_back(row);
    }
    return rows;
}

void write_curves_csv(std::ostream& out, std::span<const CurveRow> rows) {
    out << "q,theta_s,theta_f,theta_a,chi,chi_bar,ucorr\n";
    auto cell = [&out](const std::optional<double>& v) {
        out << ',';
        if (v)
            out << format_double(*v);
    };
    for (const auto& r : rows) {
        out << format_double(r.q);
        cell(r.theta_s);
        cell(r.theta_f);
        cell(r.theta_a);
        cell(r.chi);
        cell(r.chi_bar);
        cell(r.ucorr);
        out << '\n';
    }
}

} // namespace cqsim
