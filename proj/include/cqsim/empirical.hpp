#pragma once

#include "cqsim/copula.hpp"
#include "cqsim/execution.hpp"

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace cqsim {

using Index = Eigen::Index;

/// n x k raw anomaly scores; row = observation, column = detector, larger =
/// more anomalous. Requires n >= 2, k >= 2 and finite entries.
class ScoreMatrix {
public:
    explicit ScoreMatrix(Eigen::MatrixXd values, std::vector<std::string> names = {});

    Index rows() const { return values_.rows(); }
    Index cols() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& names() const { return names_; }
    std::span<const double> column(Index j) const;

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> names_;
};

/// Pseudo-observations on the copula scale. Built either by rank_transform
/// (entries r/(n+1)) or from externally supplied values, which are clamped to
/// [0, 1] with the number of clamped entries recorded.
class PseudoMatrix {
public:
    explicit PseudoMatrix(Eigen::MatrixXd values, std::vector<std::string> names = {});

    Index rows() const { return values_.rows(); }
    Index cols() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& names() const { return names_; }
    std::span<const double> column(Index j) const;
    double operator()(Index r, Index c) const { return values_(r, c); }
    std::size_t clamped_count() const { return clamped_; }

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> names_;
    std::size_t clamped_ = 0;
};

/// Quadrant level q in (0, 1); R_q = [q, 1]^2.
class QuadrantLevel {
public:
    static constexpr double kDefault = 0.75;

    QuadrantLevel() = default;
    explicit QuadrantLevel(double q);
    double value() const { return q_; }

private:
    double q_ = kDefault;
};

/// Columnwise empirical CDF: u_ij = #{k : y_kj <= y_ij} / (n + 1).
/// Tied scores share a pseudo-value (every tie counts toward each other's "<=").
PseudoMatrix rank_transform(const ScoreMatrix& y, Execution exec = Execution::parallel);

/// The same transform for a single vector.
std::vector<double> rank_transform(std::span<const double> column);

/// C_hat(q1, q2) = #{rows : u_i <= q1 and u_j <= q2} / n.
double empirical_copula(const PseudoMatrix& u, Index i, Index j, double q1, double q2);

/// S_hat(q1, q2) = #{rows : u_i >= q1 and u_j >= q2} / n.
///
/// Quadrant membership is closed (>=) here, in quadrant_points and in every
/// estimator, so n * S_hat(q, q) is exactly the quadrant count n_q.
double empirical_survival(const PseudoMatrix& u, Index i, Index j, double q1, double q2);

/// Fraction of rows with u_j >= q.
double empirical_exceedance(const PseudoMatrix& u, Index j, double q);

/// Rows whose (u_i, u_j) lie in R_q, in row order.
std::vector<UnitSquarePoint> quadrant_points(const PseudoMatrix& u, Index i, Index j,
                                             QuadrantLevel q);

std::size_t quadrant_count(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q);

} // namespace cqsim
