#pragma once

#include <cstdint>
#include <vector>

namespace cqsim {

// Admissible Clayton association range used by every estimator. The upper end
// gives an upper tail limit of 2^(-1/50) ~ 0.986, i.e. effectively comonotone.
inline constexpr double kThetaMin = 1e-6;
inline constexpr double kThetaMax = 50.0;

struct UnitSquarePoint {
    double u1 = 0.0;
    double u2 = 0.0;

    friend bool operator==(const UnitSquarePoint&, const UnitSquarePoint&) = default;
};

/// Clayton / survival-Clayton association parameter, theta > 0.
class ClaytonTheta {
public:
    explicit ClaytonTheta(double theta);
    double value() const { return theta_; }

private:
    double theta_;
};

/// Gaussian copula correlation, strictly inside (-1, 1).
class GaussianRho {
public:
    explicit GaussianRho(double rho);
    double value() const { return rho_; }

private:
    double rho_;
};

// --- Clayton ----------------------------------------------------------------

/// (u1^-t + u2^-t - 1)^(-1/t), with C = 0 on the lower/left edges.
double clayton_cdf(UnitSquarePoint p, ClaytonTheta theta);

/// Closed-form mixed partial of clayton_cdf. Evaluated in log space; only
/// defined on the open unit square.
double clayton_density(UnitSquarePoint p, ClaytonTheta theta);
double clayton_log_density(UnitSquarePoint p, ClaytonTheta theta);

// --- survival Clayton (Clayton reflected through (1/2, 1/2)) ----------------

double survival_clayton_cdf(UnitSquarePoint p, ClaytonTheta theta);
double survival_clayton_density(UnitSquarePoint p, ClaytonTheta theta);
double survival_clayton_log_density(UnitSquarePoint p, ClaytonTheta theta);

/// P(U1 > q1, U2 > q2) under the survival Clayton copula.
///
/// For q1 = q2 = q this is strictly increasing in theta, running from the
/// independence value (1-q)^2 as theta -> 0 to the comonotone value 1-q as
/// theta -> infinity. Both the likelihood normaliser of the quadrant model and
/// the survival-matching estimator are built on it.
double survival_clayton_survival(double q1, double q2, ClaytonTheta theta);
double log_survival_clayton_survival(double q1, double q2, ClaytonTheta theta);

// --- Gaussian ---------------------------------------------------------------

double normal_cdf(double x);
double normal_quantile(double p);

/// P(X <= h, Y <= k) for a standard bivariate normal with correlation rho.
/// Absolute accuracy better than 1e-7 (Drezner-Wesolowsky / Genz scheme).
double bivariate_normal_cdf(double h, double k, double rho);

double gaussian_copula_cdf(UnitSquarePoint p, GaussianRho rho);

// --- sampling ---------------------------------------------------------------

/// i.i.d. survival-Clayton draws. Gamma frailty construction for Clayton, then
/// the componentwise reflection u -> 1 - u. Deterministic given seed.
std::vector<UnitSquarePoint> sample_survival_clayton(std::size_t n, ClaytonTheta theta,
                                                     std::uint64_t seed);

/// i.i.d. Gaussian-copula draws (Cholesky factor of the 2x2 correlation, then
/// the standard normal CDF on each margin). Deterministic given seed.
std::vector<UnitSquarePoint> sample_gaussian_copula(std::size_t n, GaussianRho rho,
                                                    std::uint64_t seed);

// --- tail limits ------------------------------------------------------------

/// lambda_U = lim_{q->1} P(U1 > q | U2 > q); 2^(-1/theta) for survival Clayton.
double upper_tail_limit(ClaytonTheta theta);
/// The Gaussian copula is tail independent for every rho < 1.
double upper_tail_limit(GaussianRho rho);

} // namespace cqsim
