#include "cqsim/clustering.hpp"

#include "cqsim/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>

namespace cqsim {

Eigen::MatrixXd affinity_matrix(const Eigen::MatrixXd& w, double* shift) {
    const Index k = w.rows();
    if (k != w.cols())
        throw DataError("similarity matrix is not square");
    if (!w.allFinite())
        throw DataError("similarity matrix has non-finite entries");
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw DataError("similarity matrix is not symmetric");

    Eigen::MatrixXd a = w;
    a.diagonal().setZero();
    double min_off = 0.0;
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            if (i != j)
                min_off = std::min(min_off, a(i, j));
    if (min_off < 0.0) {
        a.array() -= min_off;
        a.diagonal().setZero();
    }
    if (shift)
        *shift = -min_off;
    return a;
}

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& affinity) {
    Eigen::MatrixXd l = -affinity;
    l.diagonal() += affinity.rowwise().sum();
    return l;
}

SpectralEmbedding spectral_embed(const Eigen::MatrixXd& w, Index dim) {
    const Index k = w.rows();
    if (dim < 1 || k < dim + 1)
        throw ConfigError("spectral_embed: need 1 <= dim <= k - 1 (k = " + std::to_string(k) +
                          ", dim = " + std::to_string(dim) + ")");
    SpectralEmbedding out;
    const Eigen::MatrixXd a = affinity_matrix(w, &out.shift);
    const Eigen::MatrixXd l = laplacian(a);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plain(l, Eigen::EigenvaluesOnly);
    out.eigenvalues = plain.eigenvalues().head(dim + 1);

    // The all-ones vector is always in the kernel of L. Lifting it above the
    // spectrum keeps it out of the embedding even when the graph is
    // disconnected and the zero eigenvalue is repeated.
    const double lift = 2.0 * l.diagonal().maxCoeff() + 1.0;
    const Eigen::MatrixXd deflated =
        l + Eigen::MatrixXd::Constant(k, k, lift / static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(deflated);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral_embed: eigen-decomposition failed");

    out.coordinates = solver.eigenvectors().leftCols(dim);
    for (Index c = 0; c < dim; ++c) {
        auto v = out.coordinates.col(c);
        v.normalize();
        for (Index r = 0; r < k; ++r) {
            if (std::abs(v(r)) > 1e-10) {
                if (v(r) < 0.0)
                    v = -v;
                break;
            }
        }
    }
    return out;
}

SpectralEmbedding spectral_embed(const SimilarityMatrix& w, Index dim) {
    return spectral_embed(w.values, dim);
}

ClusterEvaluation davies_bouldin(const Eigen::MatrixXd& points, std::span<const int> labels,
                                 SpreadDefinition spread) {
    const Index n = points.rows();
    if (static_cast<Index>(labels.size()) != n)
        throw DataError("davies_bouldin: " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(n) + " points");
    std::map<int, std::vector<Index>> groups;
    for (Index r = 0; r < n; ++r) {
        if (labels[r] < 0)
            throw DataError("davies_bouldin: negative (noise) reference label");
        groups[labels[r]].push_back(r);
    }
    if (groups.size() < 2)
        throw DataError("davies_bouldin: need at least two clusters");

    ClusterEvaluation ev;
    ev.labels.assign(labels.begin(), labels.end());
    const auto nc = static_cast<Index>(groups.size());
    ev.centroids.resize(nc, points.cols());
    Index c = 0;
    for (const auto& [id, members] : groups) {
        ev.cluster_ids.push_back(id);
        Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(points.cols());
        for (const Index r : members)
            centroid += points.row(r);
        centroid /= static_cast<double>(members.size());
        ev.centroids.row(c) = centroid;

        double acc = 0.0;
        for (const Index r : members) {
            const double d2 = (points.row(r) - centroid).squaredNorm();
            acc += spread == SpreadDefinition::root_sum_over_count ? d2 : std::sqrt(d2);
        }
        if (spread == SpreadDefinition::root_sum_over_count)
            acc = std::sqrt(acc);
        ev.spread.push_back(acc / static_cast<double>(members.size()));
        ++c;
    }

    ev.centroid_distances = Eigen::MatrixXd::Zero(nc, nc);
    for (Index i = 0; i < nc; ++i)
        for (Index j = 0; j < nc; ++j)
            ev.centroid_distances(i, j) = (ev.centroids.row(i) - ev.centroids.row(j)).norm();

    double total = 0.0;
    for (Index i = 0; i < nc; ++i) {
        double worst = 0.0;
        for (Index j = 0; j < nc; ++j) {
            if (i == j)
                continue;
            const double m = ev.centroid_distances(i, j);
            if (m == 0.0)
                throw NumericalError("davies_bouldin: clusters " + std::to_string(ev.cluster_ids[i]) +
                                     " and " + std::to_string(ev.cluster_ids[j]) +
                                     " have coincident centroids (degenerate clustering)");
            worst = std::max(worst, (ev.spread[i] + ev.spread[j]) / m);
        }
        total += worst;
    }
    ev.db_index = total / static_cast<double>(nc);
    return ev;
}

ClusterEvaluation davies_bouldin(const SpectralEmbedding& e, std::span<const int> labels,
                                 SpreadDefinition spread) {
    return davies_bouldin(e.coordinates, labels, spread);
}

Eigen::MatrixXd dissimilarity_from_similarity(const Eigen::MatrixXd& w) {
    return (-w.array()).exp().matrix();
}

std::vector<int> dbscan_precomputed(const Eigen::MatrixXd& d, double eps, int min_pts) {
    if (!(eps > 0.0))
        throw ConfigError("dbscan: eps must be > 0");
    if (min_pts < 1)
        throw ConfigError("dbscan: min_pts must be >= 1");
    const Index n = d.rows();
    if (n != d.cols())
        throw DataError("dbscan: dissimilarity matrix is not square");

    std::vector<bool> core(n, false);
    for (Index i = 0; i < n; ++i) {
        Index count = 0;
        for (Index j = 0; j < n; ++j)
            count += (i == j || d(i, j) <= eps) ? 1 : 0;
        core[i] = count >= min_pts;
    }

    std::vector<int> labels(n, kNoiseLabel);
    int next = 0;
    for (Index seed = 0; seed < n; ++seed) {
        if (!core[seed] || labels[seed] != kNoiseLabel)
            continue;
        std::deque<Index> frontier{seed};
        labels[seed] = next;
        while (!frontier.empty()) {
            const Index p = frontier.front();
            frontier.pop_front();
            for (Index j = 0; j < n; ++j) {
                if (core[j] && labels[j] == kNoiseLabel && d(p, j) <= eps) {
                    labels[j] = next;
                    frontier.push_back(j);
                }
            }
        }
        ++next;
    }

    for (Index i = 0; i < n; ++i) {
        if (core[i])
            continue;
        double best = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j) {
            if (core[j] && d(i, j) <= eps && d(i, j) < best) {
                best = d(i, j);
                labels[i] = labels[j];
            }
        }
    }
    return labels;
}

std::vector<int> dbscan_cluster(const SimilarityMatrix& w, double eps, int min_pts) {
    return dbscan_precomputed(dissimilarity_from_similarity(w.values), eps, min_pts);
}

double default_dbscan_eps(const Eigen::MatrixXd& d, int min_pts) {
    const Index n = d.rows();
    if (n < 2 || min_pts < 1)
        throw ConfigError("default_dbscan_eps: need >= 2 points and min_pts >= 1");
    const Index rank = std::min<Index>(min_pts, n) - 1;
    std::vector<double> kdist(n);
    std::vector<double> row(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j)
            row[j] = i == j ? 0.0 : d(i, j);
        std::nth_element(row.begin(), row.begin() + rank, row.end());
        kdist[i] = row[rank];
    }
    std::sort(kdist.begin(), kdist.end());
    double gap = -1.0;
    double eps = kdist.back();
    for (std::size_t r = 1; r < kdist.size(); ++r) {
        if (kdist[r] - kdist[r - 1] > gap) {
            gap = kdist[r] - kdist[r - 1];
            eps = 0.5 * (kdist[r] + kdist[r - 1]);
        }
    }
    if (!(eps > 0.0))
        eps = std::max(kdist.back(), std::numeric_limits<double>::min());
    return eps;
}

} // namespace cqsim
