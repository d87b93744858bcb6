#pragma once

#include "cqsim/similarity.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace cqsim {

/// Spectral embedding of a similarity matrix through the unnormalized graph
/// Laplacian L = D - W.
struct SpectralEmbedding {
    /// k x m; column c is the eigenvector of the (c+2)-th smallest eigenvalue,
    /// unit norm, with its first non-negligible entry positive.
    Eigen::MatrixXd coordinates;
    /// The m + 1 smallest Laplacian eigenvalues, ascending. The first is the
    /// trivial zero eigenvalue of the all-ones vector.
    Eigen::VectorXd eigenvalues;
    /// Amount added to off-diagonal similarities to make them nonnegative.
    double shift = 0.0;
};

/// Off-diagonal entries shifted up by the most negative off-diagonal value
/// (if any) and a zero diagonal. Throws DataError for non-symmetric or
/// non-finite input.
Eigen::MatrixXd affinity_matrix(const Eigen::MatrixXd& w, double* shift = nullptr);

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& affinity);

SpectralEmbedding spectral_embed(const Eigen::MatrixXd& w, Index dim = 1);
SpectralEmbedding spectral_embed(const SimilarityMatrix& w, Index dim = 1);

/// How the per-cluster spread s_i is formed from distances to the centroid.
enum class SpreadDefinition {
    /// (1/n_i) * sqrt(sum ||v - a_i||^2): the normalisation outside the root.
    root_sum_over_count,
    /// (1/n_i) * sum ||v - a_i||: the textbook Davies-Bouldin spread.
    mean_distance,
};

struct ClusterEvaluation {
    double db_index = 0.0;
    std::vector<int> cluster_ids;        // distinct labels, ascending
    std::vector<double> spread;          // s_i, aligned with cluster_ids
    Eigen::MatrixXd centroids;           // n_c x m
    Eigen::MatrixXd centroid_distances;  // m_ij
    std::vector<int> labels;
};

/// Davies-Bouldin index of points (rows) under the given labels:
///   DB = (1/n_c) sum_i max_{j != i} (s_i + s_j) / m_ij.
/// Labels must be nonnegative, with at least two distinct clusters. Coincident
/// centroids throw NumericalError.
ClusterEvaluation davies_bouldin(const Eigen::MatrixXd& points, std::span<const int> labels,
                                 SpreadDefinition spread = SpreadDefinition::root_sum_over_count);
ClusterEvaluation davies_bouldin(const SpectralEmbedding& e, std::span<const int> labels,
                                 SpreadDefinition spread = SpreadDefinition::root_sum_over_count);

inline constexpr int kNoiseLabel = -1;

/// exp(-w) elementwise.
Eigen::MatrixXd dissimilarity_from_similarity(const Eigen::MatrixXd& w);

/// DBSCAN over a precomputed dissimilarity matrix. A point is core when at
/// least min_pts points (itself included) lie within eps. Clusters are the
/// connected components of core points, numbered in order of their lowest
/// index; a non-core point within eps of some core point joins the cluster of
/// its nearest core point (lowest index on ties); the rest are kNoiseLabel.
std::vector<int> dbscan_precomputed(const Eigen::MatrixXd& dissimilarity, double eps,
                                    int min_pts);

/// DBSCAN on D = exp(-W).
std::vector<int> dbscan_cluster(const SimilarityMatrix& w, double eps, int min_pts);

/// Default eps: sort each point's distance to its min_pts-th nearest neighbour
/// (itself counted first) and return the midpoint of the widest gap.
double default_dbscan_eps(const Eigen::MatrixXd& dissimilarity, int min_pts);

} // namespace cqsim
