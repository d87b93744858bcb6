#include "cqsim/datagen.hpp"

#include "cqsim/copula.hpp"
#include "cqsim/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cqsim {

namespace {

// Draws an equicorrelated standard normal vector (correlation rho >= 0) from a
// shared factor and idiosyncratic terms.
template <class Rng>
void equicorrelated_normal(Rng& rng, double rho, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double shared = normal(rng);
    const double a = std::sqrt(rho);
    const double b = std::sqrt(1.0 - rho);
    for (double& z : out)
        z = a * shared + b * normal(rng);
}

std::vector<std::string> numbered(std::string_view prefix, int count, int offset = 0) {
    std::vector<std::string> names;
    for (int j = 0; j < count; ++j)
        names.push_back(std::string(prefix) + std::to_string(offset + j));
    return names;
}

} // namespace

DatasetBundle gen_block(const BlockConfig& c, std::uint64_t seed) {
    if (!(c.b > 0.0 && c.b < 1.0))
        throw ConfigError("gen_block: b must lie in (0, 1)");
    if (!(c.upper_weight > 0.0 && c.upper_weight < 1.0))
        throw ConfigError("gen_block: upper_weight must lie in (0, 1)");
    if (c.k_per_cluster < 1 || c.n < 2)
        throw ConfigError("gen_block: need k_per_cluster >= 1 and n >= 2");
    if (!(c.rho >= 0.0 && c.rho < 1.0))
        throw ConfigError("gen_block: rho must lie in [0, 1)");

    const int k = 2 * c.k_per_cluster;
    const auto n = static_cast<Index>(c.n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::bernoulli_distribution upper(c.upper_weight);

    Eigen::MatrixXd y(n, k);
    std::vector<double> z(static_cast<std::size_t>(c.k_per_cluster));
    for (Index r = 0; r < n; ++r) {
        if (!upper(rng)) {
            for (int j = 0; j < k; ++j)
                y(r, j) = c.b * unif(rng);
            continue;
        }
        for (int cluster = 0; cluster < 2; ++cluster) {
            if (c.independent_upper) {
                for (double& v : z)
                    v = normal_quantile(unif(rng));
            } else {
                equicorrelated_normal(rng, c.rho, z);
            }
            for (int m = 0; m < c.k_per_cluster; ++m)
                y(r, cluster * c.k_per_cluster + m) = c.b + (1.0 - c.b) * normal_cdf(z[m]);
        }
    }

    std::vector<std::string> names = numbered("block_a", c.k_per_cluster);
    const auto second = numbered("block_b", c.k_per_cluster);
    names.insert(names.end(), second.begin(), second.end());
    std::vector<int> labels(static_cast<std::size_t>(k), 0);
    std::fill(labels.begin() + c.k_per_cluster, labels.end(), 1);
    return {"block", ScoreMatrix(std::move(y), std::move(names)), std::move(labels), std::nullopt};
}

DatasetBundle gen_block(std::size_t n, double b, int k_per_cluster, double rho,
                        std::uint64_t seed) {
    BlockConfig c;
    c.n = n;
    c.b = b;
    c.k_per_cluster = k_per_cluster;
    c.rho = rho;
    return gen_block(c, seed);
}

DatasetBundle gen_mixture(const MixtureConfig& c, std::uint64_t seed) {
    if (c.dims < 2 || c.spiked_dims < 1 || c.spiked_dims >= c.dims)
        throw ConfigError("gen_mixture: need 1 <= spiked_dims < dims");
    if (c.n_inliers + c.n_anomalies < 2)
        throw ConfigError("gen_mixture: need at least 2 rows");
    const auto n = static_cast<Index>(c.n_inliers + c.n_anomalies);
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd y(n, c.dims);
    std::vector<double> z(static_cast<std::size_t>(c.dims));
    std::vector<int> outliers(static_cast<std::size_t>(n), 0);
    for (Index r = 0; r < n; ++r) {
        const bool anomaly = r >= static_cast<Index>(c.n_inliers);
        equicorrelated_normal(rng, anomaly ? c.rho_anomaly : c.rho_inlier, z);
        for (int j = 0; j < c.dims; ++j) {
            const double scale = anomaly && j < c.spiked_dims ? c.scale : 1.0;
            y(r, j) = std::abs(scale * z[j]);
        }
        outliers[r] = anomaly ? 1 : 0;
    }
    std::vector<std::string> names = numbered("spiked", c.spiked_dims);
    const auto rest = numbered("plain", c.dims - c.spiked_dims);
    names.insert(names.end(), rest.begin(), rest.end());
    std::vector<int> labels(static_cast<std::size_t>(c.dims), 1);
    std::fill(labels.begin(), labels.begin() + c.spiked_dims, 0);

    // Stored on the copula scale.
    const auto u = rank_transform(ScoreMatrix(std::move(y), names), Execution::serial);
    return {"mixture", ScoreMatrix(u.values(), std::move(names)), std::move(labels),
            std::move(outliers)};
}

DatasetBundle gen_mixture(std::size_t n_inliers, std::size_t n_anomalies, std::uint64_t seed) {
    MixtureConfig c;
    c.n_inliers = n_inliers;
    c.n_anomalies = n_anomalies;
    return gen_mixture(c, seed);
}

std::vector<int> two_anom_row_types(const TwoAnomConfig& c) {
    std::vector<int> types(c.n_inliers, 0);
    types.insert(types.end(), c.n_type1, 1);
    types.insert(types.end(), c.n_type2, 2);
    return types;
}

DatasetBundle gen_two_anom(const TwoAnomConfig& c, std::uint64_t seed) {
    if (c.signal_dims < 1 || c.signal_dims >= c.latent_dims || c.spike_dims < 1 ||
        c.spike_dims > c.signal_dims)
        throw ConfigError("gen_two_anom: need 1 <= spike_dims <= signal_dims < latent_dims");
    for (const int m : c.components)
        if (m < 1 || m > c.latent_dims)
            throw ConfigError("gen_two_anom: component count out of range");

    const auto types = two_anom_row_types(c);
    const auto n = static_cast<Index>(types.size());
    const Index d = c.latent_dims;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::MatrixXd x(n, d);
    for (Index r = 0; r < n; ++r) {
        for (Index j = 0; j < d; ++j) {
            const bool signal = j < c.signal_dims;
            double sd = signal ? 1.0 : c.noise_sd;
            if (types[r] == 1 && !signal)
                sd *= c.type1_scale;
            if (types[r] == 2 && j < c.spike_dims)
                sd *= c.type2_scale;
            x(r, j) = sd * normal(rng);
        }
    }

    // Principal axes of the pooled sample; eigenvalues come back ascending.
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pca(cov);
    if (pca.info() != Eigen::Success)
        throw NumericalError("gen_two_anom: PCA failed");
    const Eigen::MatrixXd& axes = pca.eigenvectors();

    const auto groups = static_cast<Index>(c.components.size());
    Eigen::MatrixXd scores(n, 2 * groups);
    std::vector<std::string> names;
    for (Index g = 0; g < groups; ++g) {
        const Index m = c.components[g];
        scores.col(g) = (x * axes.rightCols(m)).rowwise().norm();
        names.push_back("pc_first" + std::to_string(m));
    }
    for (Index g = 0; g < groups; ++g) {
        const Index m = c.components[g];
        scores.col(groups + g) = (x * axes.leftCols(m)).rowwise().norm();
        names.push_back("pc_last" + std::to_string(m));
    }

    std::vector<int> labels(static_cast<std::size_t>(2 * groups), 1);
    std::fill(labels.begin(), labels.begin() + groups, 0);
    std::vector<int> outliers(types.size());
    std::transform(types.begin(), types.end(), outliers.begin(),
                   [](int t) { return t == 0 ? 0 : 1; });
    return {"two_anom", ScoreMatrix(std::move(scores), std::move(names)), std::move(labels),
            std::move(outliers)};
}

DatasetBundle gen_two_anom(std::uint64_t seed) { return gen_two_anom(TwoAnomConfig{}, seed); }

DatasetBundle gen_t_ensemble(const TEnsembleConfig& c, std::uint64_t seed) {
    if (!(c.nu > 0.0) || c.clusters < 1 || c.per_cluster < 1 || c.noise_dims < 0 || c.n < 2)
        throw ConfigError("gen_t_ensemble: invalid configuration");
    if (!(c.outlier_fraction > 0.0 && c.outlier_fraction < 1.0))
        throw ConfigError("gen_t_ensemble: outlier_fraction must lie in (0, 1)");

    const int t_dims = c.clusters * c.per_cluster;
    const int k = t_dims + c.noise_dims;
    const auto n = static_cast<Index>(c.n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(c.nu);

    Eigen::MatrixXd y(n, k);
    std::vector<double> norm2(static_cast<std::size_t>(n), 0.0);
    std::vector<double> mix(static_cast<std::size_t>(c.clusters));
    for (Index r = 0; r < n; ++r) {
        for (double& m : mix)
            m = std::sqrt(c.nu / chi2(rng));
        for (int j = 0; j < k; ++j) {
            double x = normal(rng);
            if (j < t_dims) {
                x *= mix[static_cast<std::size_t>(j / c.per_cluster)];
                norm2[r] += x * x;
            }
            y(r, j) = std::abs(x);
        }
    }

    const auto n_out = static_cast<std::size_t>(
        std::ceil(c.outlier_fraction * static_cast<double>(c.n) - 1e-9));
    std::vector<std::size_t> order(c.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norm2[a] > norm2[b]; });
    std::vector<int> outliers(c.n, 0);
    for (std::size_t r = 0; r < n_out; ++r)
        outliers[order[r]] = 1;

    std::vector<std::string> names;
    std::vector<int> labels;
    for (int j = 0; j < t_dims; ++j) {
        names.push_back("t" + std::to_string(j / c.per_cluster) + "_" +
                        std::to_string(j % c.per_cluster));
        labels.push_back(j / c.per_cluster);
    }
    for (int j = 0; j < c.noise_dims; ++j) {
        names.push_back("noise" + std::to_string(j));
        labels.push_back(-1);
    }
    return {"t_ensemble", ScoreMatrix(std::move(y), std::move(names)), std::move(labels),
            std::move(outliers)};
}

DatasetBundle gen_t_ensemble(std::uint64_t seed) {
    return gen_t_ensemble(TEnsembleConfig{}, seed);
}

DatasetBundle generate_dataset(std::string_view name, std::uint64_t seed) {
    if (name == "block")
        return gen_block(BlockConfig{}, seed);
    if (name == "mixture")
        return gen_mixture(MixtureConfig{}, seed);
    if (name == "two_anom")
        return gen_two_anom(seed);
    if (name == "t_ensemble")
        return gen_t_ensemble(seed);
    throw ConfigError("unknown generator '" + std::string(name) +
                      "' (expected block, mixture, two_anom or t_ensemble)");
}

} // namespace cqsim
