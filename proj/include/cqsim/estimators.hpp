#pragma once

#include "cqsim/copula.hpp"
#include "cqsim/empirical.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace cqsim {

enum class BoundaryFlag { interior, clamped_low, clamped_high };

std::string_view to_string(BoundaryFlag flag);

struct ThetaEstimate {
    double theta = kThetaMin;
    BoundaryFlag flag = BoundaryFlag::clamped_low;
};

struct ThetaSEstimate : ThetaEstimate {
    double loglik = 0.0;
};

/// Both quadrant estimators for one column pair and their equal-weight mean.
struct QuadrantFit {
    double theta_s = kThetaMin;
    double theta_f = kThetaMin;
    double theta_a = kThetaMin; // (theta_s + theta_f) / 2
    std::size_t n_q = 0;
    double q = QuadrantLevel::kDefault;
    double loglik_at_theta_s = 0.0;
    BoundaryFlag flag_s = BoundaryFlag::clamped_low;
    BoundaryFlag flag_f = BoundaryFlag::clamped_low;

    /// Interior unless both components sit on the same bound.
    BoundaryFlag boundary_flag() const;
};

/// Quadrant-conditional pseudo log-likelihood of the survival Clayton copula:
///   sum_i [ log c_SC(u_i | theta) - log S_SC(q, q | theta) ].
/// Every point must lie in R_q and strictly inside the unit square; theta must
/// lie in [kThetaMin, kThetaMax].
double quadrant_loglik(std::span<const UnitSquarePoint> points, QuadrantLevel q, double theta);

/// Maximiser of quadrant_loglik over [kThetaMin, kThetaMax].
///
/// A 20-point log-spaced scan picks the bracket, then Brent's method refines
/// it (|dtheta| < 1e-6). The likelihood is unimodal in theta, so the scan only
/// matters when it is nearly flat (tiny n_q). No points gives kThetaMin,
/// flagged clamped_low; a maximum on either bound is flagged accordingly.
ThetaSEstimate fit_theta_s(std::span<const UnitSquarePoint> points, QuadrantLevel q);

/// Solves S_SC(q, q | theta) = s_hat by bisection on the monotone map.
/// s_hat at or below the independence value clamps low, at or above the
/// comonotone value clamps high.
ThetaEstimate fit_theta_f(double s_hat, QuadrantLevel q);

QuadrantFit fit_pair(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q);

/// chi(q) = S_hat(q, q) / P_hat(U_j >= q). Throws NumericalError when no row
/// exceeds q in column j.
double chi_hat(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q);

struct ChiBar {
    double value = -1.0;
    bool degenerate = false;
};

/// chi_bar(q) = 2 log P_hat(U_i >= q) / log S_hat(q, q) - 1, clamped to [-1, 1].
/// An empty quadrant returns -1 with degenerate set; a quadrant holding every
/// row returns 1 with degenerate set.
ChiBar chi_bar_hat(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q);

/// Pearson correlation of the pseudo-value pairs inside R_q. Throws
/// NumericalError with fewer than 3 points or zero variance.
double ucorr(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q);
double ucorr(std::span<const UnitSquarePoint> points);

struct BaselineMeasures {
    double chi = 0.0;
    ChiBar chi_bar;
    std::optional<double> ucorr;
};

BaselineMeasures baseline_measures(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q);

} // namespace cqsim
