#pragma once

#include "cqsim/empirical.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqsim {

/// A generated score matrix with its reference structure.
struct DatasetBundle {
    std::string name;
    ScoreMatrix scores;
    /// Reference clustering of the columns; negative entries mark noise
    /// detectors that belong to no cluster.
    std::vector<int> detector_cluster_labels;
    /// 1 = outlier row, 0 = inlier row, when the generator defines outliers.
    std::optional<std::vector<int>> outlier_labels;
};

// Two clusters of columns. Each row falls in the lower block [0,b]^k
// (independent uniforms) or, with probability upper_weight, in the upper block
// [b,1]^k, where same-cluster columns share one Gaussian-copula draw with
// equicorrelation rho and different clusters are independent.
struct BlockConfig {
    std::size_t n = 5000;
    double b = 0.85;
    int k_per_cluster = 4;
    double rho = 0.9;
    double upper_weight = 0.15;
    /// Null variant: the upper block is independent for every pair.
    bool independent_upper = false;
};

DatasetBundle gen_block(const BlockConfig& config, std::uint64_t seed);
DatasetBundle gen_block(std::size_t n, double b, int k_per_cluster, double rho,
                        std::uint64_t seed);

// Gaussian mixture: equicorrelated inliers (rho_inlier) plus anomalies
// (rho_anomaly) whose first d_spiked coordinates are scaled by `scale`.
// Absolute values, then the rank transform. The spiked columns form cluster 0.
struct MixtureConfig {
    std::size_t n_inliers = 5000;
    std::size_t n_anomalies = 200;
    int dims = 8;
    int spiked_dims = 4;
    double rho_inlier = 0.6;
    double rho_anomaly = 0.8;
    double scale = 10.0;
};

DatasetBundle gen_mixture(const MixtureConfig& config, std::uint64_t seed);
DatasetBundle gen_mixture(std::size_t n_inliers, std::size_t n_anomalies, std::uint64_t seed);

// Two anomaly modes in a 100-dimensional latent space. Inliers have unit
// variance on a 30-dimensional signal subspace and standard deviation
// noise_sd on the 70 remaining coordinates. Type-1 anomalies scale the noise
// coordinates by type1_scale; type-2 anomalies scale spike_dims of the signal
// coordinates by type2_scale. Detectors score each row by the Euclidean norm
// of its projection on the leading (cluster 0) or trailing (cluster 1)
// principal components, one detector per entry of `components`.
struct TwoAnomConfig {
    std::size_t n_inliers = 5000;
    std::size_t n_type1 = 100;
    std::size_t n_type2 = 100;
    int latent_dims = 100;
    int signal_dims = 30;
    int spike_dims = 5;
    double noise_sd = 0.01;
    double type1_scale = 30.0;
    double type2_scale = 3.0;
    std::array<int, 4> components{3, 5, 8, 10};
};

DatasetBundle gen_two_anom(const TwoAnomConfig& config, std::uint64_t seed);
DatasetBundle gen_two_anom(std::uint64_t seed);

/// Row type of gen_two_anom: 0 inlier, 1 type-1 anomaly, 2 type-2 anomaly.
/// Rows are laid out inliers first, then type 1, then type 2.
std::vector<int> two_anom_row_types(const TwoAnomConfig& config);

// Multivariate-t clusters for the ensemble experiment: X_ij = Z_ij sqrt(nu / V)
// with one chi-square(nu) V per row and cluster, plus Gaussian noise columns.
// Scores are |X_ij|; outliers are the top ceil(outlier_fraction * n) rows by
// distance to the origin over the t columns. Noise columns carry label -1.
struct TEnsembleConfig {
    std::size_t n = 5000;
    double nu = 2.1;
    int clusters = 4;
    int per_cluster = 3;
    int noise_dims = 50;
    double outlier_fraction = 0.03;
};

DatasetBundle gen_t_ensemble(const TEnsembleConfig& config, std::uint64_t seed);
DatasetBundle gen_t_ensemble(std::uint64_t seed);

inline constexpr std::array<std::string_view, 4> kGeneratorNames{"block", "mixture", "two_anom",
                                                                 "t_ensemble"};

/// Dispatch by name with default configuration; throws ConfigError for an
/// unknown name.
DatasetBundle generate_dataset(std::string_view name, std::uint64_t seed);

} // namespace cqsim
