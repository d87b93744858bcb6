#include "cqsim/estimators.hpp"

#include "cqsim/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

namespace cqsim {

namespace {

constexpr std::size_t kScanPoints = 20;

std::array<double, kScanPoints> theta_scan_grid() {
    std::array<double, kScanPoints> grid{};
    const double lo = std::log(kThetaMin);
    const double hi = std::log(kThetaMax);
    for (std::size_t g = 0; g < kScanPoints; ++g)
        grid[g] = std::exp(lo + (hi - lo) * static_cast<double>(g) / (kScanPoints - 1));
    grid.front() = kThetaMin;
    grid.back() = kThetaMax;
    return grid;
}

void check_theta_range(double theta) {
    if (!(theta >= kThetaMin && theta <= kThetaMax))
        throw ConfigError("theta " + std::to_string(theta) + " outside [" +
                          std::to_string(kThetaMin) + ", " + std::to_string(kThetaMax) + "]");
}

// Log-likelihood with the reflected coordinates w = 1 - u pre-logged, so each
// evaluation is one log-sum per point.
class QuadrantLikelihood {
public:
    QuadrantLikelihood(std::span<const UnitSquarePoint> points, QuadrantLevel q) : q_(q.value()) {
        std::vector<std::pair<double, double>> terms;
        terms.reserve(points.size());
        for (const auto& p : points) {
            if (!(p.u1 >= q_ && p.u2 >= q_))
                throw DataError("quadrant_loglik: point (" + std::to_string(p.u1) + ", " +
                                std::to_string(p.u2) + ") lies outside R_q");
            if (!(p.u1 < 1.0 && p.u2 < 1.0))
                throw DataError("quadrant_loglik: point on the upper boundary of the unit square");
            terms.emplace_back(std::log1p(-std::max(p.u1, p.u2)), std::log1p(-std::min(p.u1, p.u2)));
        }
        // Canonical order: the sum no longer depends on row order or on which
        // column comes first.
        std::sort(terms.begin(), terms.end());
        for (const auto& [a, b] : terms) {
            log_w1_.push_back(a);
            log_w2_.push_back(b);
        }
    }

    std::size_t size() const { return log_w1_.size(); }

    double operator()(double theta) const {
        const double t = theta;
        const double inv = 1.0 / t;
        double sum = 0.0;
        for (std::size_t r = 0; r < log_w1_.size(); ++r) {
            const double lw1 = log_w1_[r];
            const double lw2 = log_w2_[r];
            const double a = -t * lw1;
            const double b = -t * lw2;
            const double m = std::max(a, b);
            const double lsum = m < 0.5 ? std::log1p(std::expm1(a) + std::expm1(b))
                                        : m + std::log(std::exp(a - m) + std::exp(b - m) -
                                                       std::exp(-m));
            sum += -(t + 1.0) * (lw1 + lw2) - (inv + 2.0) * lsum;
        }
        const double n = static_cast<double>(log_w1_.size());
        return sum + n * std::log1p(t) -
               n * log_survival_clayton_survival(q_, q_, ClaytonTheta(t));
    }

private:
    double q_;
    std::vector<double> log_w1_;
    std::vector<double> log_w2_;
};

} // namespace

std::string_view to_string(BoundaryFlag flag) {
    switch (flag) {
    case BoundaryFlag::interior:
        return "interior";
    case BoundaryFlag::clamped_low:
        return "clamped_low";
    case BoundaryFlag::clamped_high:
        return "clamped_high";
    }
    return "unknown";
}

BoundaryFlag QuadrantFit::boundary_flag() const {
    if (flag_s == flag_f)
        return flag_s;
    return BoundaryFlag::interior;
}

double quadrant_loglik(std::span<const UnitSquarePoint> points, QuadrantLevel q, double theta) {
    check_theta_range(theta);
    if (points.empty())
        return 0.0;
    return QuadrantLikelihood(points, q)(theta);
}

ThetaSEstimate fit_theta_s(std::span<const UnitSquarePoint> points, QuadrantLevel q) {
    ThetaSEstimate out;
    if (points.empty())
        return out;

    const QuadrantLikelihood loglik(points, q);
    static const auto grid = theta_scan_grid();
    std::array<double, kScanPoints> values{};
    std::size_t best = 0;
    for (std::size_t g = 0; g < kScanPoints; ++g) {
        values[g] = loglik(grid[g]);
        if (values[g] > values[best])
            best = g;
    }

    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, kScanPoints - 1)];
    std::uintmax_t max_iter = 200;
    const auto [theta, neg_ll] = boost::math::tools::brent_find_minima(
        [&](double t) { return -loglik(t); }, lo, hi, std::numeric_limits<double>::digits / 2,
        max_iter);

    out.theta = theta;
    out.loglik = -neg_ll;
    out.flag = BoundaryFlag::interior;
    // Brent never evaluates the bracket ends themselves, so compare with them.
    if (best == 0 && values[0] >= out.loglik) {
        out = {{kThetaMin, BoundaryFlag::clamped_low}, values[0]};
    } else if (best == kScanPoints - 1 && values[kScanPoints - 1] >= out.loglik) {
        out = {{kThetaMax, BoundaryFlag::clamped_high}, values[kScanPoints - 1]};
    }
    return out;
}

ThetaEstimate fit_theta_f(double s_hat, QuadrantLevel level) {
    if (!(s_hat >= 0.0 && s_hat <= 1.0))
        throw ConfigError("fit_theta_f: s_hat must lie in [0, 1], got " + std::to_string(s_hat));
    const double q = level.value();
    const auto survival = [q](double theta) {
        return survival_clayton_survival(q, q, ClaytonTheta(theta));
    };
    const double independence = (1.0 - q) * (1.0 - q);
    if (s_hat <= independence || s_hat <= survival(kThetaMin))
        return {kThetaMin, BoundaryFlag::clamped_low};
    if (s_hat >= 1.0 - q || s_hat >= survival(kThetaMax))
        return {kThetaMax, BoundaryFlag::clamped_high};

    double lo = kThetaMin;
    double hi = kThetaMax;
    for (int iter = 0; iter < 400 && hi - lo > 1e-13 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (survival(mid) < s_hat)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), BoundaryFlag::interior};
}

QuadrantFit fit_pair(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q) {
    const auto points = quadrant_points(u, i, j, q);
    const auto s = fit_theta_s(points, q);
    const double s_hat = static_cast<double>(points.size()) / static_cast<double>(u.rows());
    const auto f = fit_theta_f(s_hat, q);

    QuadrantFit fit;
    fit.theta_s = s.theta;
    fit.theta_f = f.theta;
    fit.theta_a = 0.5 * (s.theta + f.theta);
    fit.n_q = points.size();
    fit.q = q.value();
    fit.loglik_at_theta_s = s.loglik;
    fit.flag_s = s.flag;
    fit.flag_f = f.flag;
    return fit;
}

double chi_hat(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q) {
    const double denom = empirical_exceedance(u, j, q.value());
    if (denom == 0.0)
        throw NumericalError("chi_hat: no observation reaches q = " + std::to_string(q.value()) +
                             "; q is too extreme for n = " + std::to_string(u.rows()));
    return empirical_survival(u, i, j, q.value(), q.value()) / denom;
}

ChiBar chi_bar_hat(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q) {
    const double s = empirical_survival(u, i, j, q.value(), q.value());
    if (s == 0.0)
        return {-1.0, true};
    const double p = empirical_exceedance(u, i, q.value());
    if (s == 1.0)
        return {1.0, true};
    const double value = 2.0 * std::log(p) / std::log(s) - 1.0;
    return {std::clamp(value, -1.0, 1.0), false};
}

double ucorr(std::span<const UnitSquarePoint> input) {
    const std::size_t n = input.size();
    if (n < 3)
        throw NumericalError("ucorr: fewer than 3 points in the quadrant");
    // Canonical order, as in the likelihood.
    std::vector<UnitSquarePoint> points(input.begin(), input.end());
    std::sort(points.begin(), points.end(), [](const UnitSquarePoint& a, const UnitSquarePoint& b) {
        return std::tuple(std::min(a.u1, a.u2), std::max(a.u1, a.u2), a.u1) <
               std::tuple(std::min(b.u1, b.u2), std::max(b.u1, b.u2), b.u1);
    });
    double m1 = 0.0, m2 = 0.0;
    for (const auto& p : points) {
        m1 += p.u1;
        m2 += p.u2;
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    double s11 = 0.0, s22 = 0.0, s12 = 0.0;
    for (const auto& p : points) {
        const double d1 = p.u1 - m1;
        const double d2 = p.u2 - m2;
        s11 += d1 * d1;
        s22 += d2 * d2;
        s12 += d1 * d2;
    }
    auto constant = [&](double UnitSquarePoint::*c) {
        return std::all_of(points.begin(), points.end(),
                           [&](const UnitSquarePoint& p) { return p.*c == points[0].*c; });
    };
    if (constant(&UnitSquarePoint::u1) || constant(&UnitSquarePoint::u2))
        throw NumericalError("ucorr: zero variance inside the quadrant");
    return std::clamp(s12 / std::sqrt(s11 * s22), -1.0, 1.0);
}

double ucorr(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q) {
    return ucorr(quadrant_points(u, i, j, q));
}

BaselineMeasures baseline_measures(const PseudoMatrix& u, Index i, Index j, QuadrantLevel q) {
    BaselineMeasures out;
    out.chi = chi_hat(u, i, j, q);
    out.chi_bar = chi_bar_hat(u, i, j, q);
    try {
        out.ucorr = ucorr(u, i, j, q);
    } catch (const NumericalError&) {
        out.ucorr.reset();
    }
    return out;
}

} // namespace cqsim
