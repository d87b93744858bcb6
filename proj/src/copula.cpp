#include "cqsim/copula.hpp"

#include "cqsim/error.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace cqsim {

namespace {

void check_point(UnitSquarePoint p) {
    if (!std::isfinite(p.u1) || !std::isfinite(p.u2))
        throw DataError("copula: non-finite point coordinate");
    if (p.u1 < 0.0 || p.u1 > 1.0 || p.u2 < 0.0 || p.u2 > 1.0)
        throw DataError("copula: point (" + std::to_string(p.u1) + ", " + std::to_string(p.u2) +
                        ") lies outside the unit square");
}

void check_open_point(UnitSquarePoint p) {
    check_point(p);
    if (p.u1 <= 0.0 || p.u1 >= 1.0 || p.u2 <= 0.0 || p.u2 >= 1.0)
        throw DataError("copula: density is unbounded on the boundary of the unit square");
}

// log(e^a + e^b - 1) for a, b >= 0, i.e. log of the Clayton generator sum
// u1^-t + u2^-t - 1 with a = -t log u1, b = -t log u2.
double log_generator_sum(double a, double b) {
    const double m = std::max(a, b);
    if (m < 0.5)
        return std::log1p(std::expm1(a) + std::expm1(b));
    return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

double log_clayton_cdf_interior(double u1, double u2, double theta) {
    const double a = -theta * std::log(u1);
    const double b = -theta * std::log(u2);
    return -log_generator_sum(a, b) / theta;
}

// log(1 + e^t) without overflow.
double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

} // namespace

ClaytonTheta::ClaytonTheta(double theta) : theta_(theta) {
    if (!std::isfinite(theta) || theta <= 0.0)
        throw ConfigError("Clayton theta must be finite and > 0, got " + std::to_string(theta));
}

GaussianRho::GaussianRho(double rho) : rho_(rho) {
    if (!std::isfinite(rho) || rho <= -1.0 || rho >= 1.0)
        throw ConfigError("Gaussian rho must lie in (-1, 1), got " + std::to_string(rho));
}

double clayton_cdf(UnitSquarePoint p, ClaytonTheta theta) {
    check_point(p);
    if (p.u1 == 0.0 || p.u2 == 0.0)
        return 0.0;
    const double c = std::exp(log_clayton_cdf_interior(p.u1, p.u2, theta.value()));
    return std::min(c, std::min(p.u1, p.u2));
}

double clayton_log_density(UnitSquarePoint p, ClaytonTheta theta) {
    check_open_point(p);
    const double t = theta.value();
    const double lu1 = std::log(p.u1);
    const double lu2 = std::log(p.u2);
    const double lsum = log_generator_sum(-t * lu1, -t * lu2);
    return std::log1p(t) - (t + 1.0) * (lu1 + lu2) - (1.0 / t + 2.0) * lsum;
}

double clayton_density(UnitSquarePoint p, ClaytonTheta theta) {
    return std::exp(clayton_log_density(p, theta));
}

double survival_clayton_cdf(UnitSquarePoint p, ClaytonTheta theta) {
    check_point(p);
    const double c = clayton_cdf({1.0 - p.u1, 1.0 - p.u2}, theta) + p.u1 + p.u2 - 1.0;
    return std::clamp(c, 0.0, std::min(p.u1, p.u2));
}

double survival_clayton_log_density(UnitSquarePoint p, ClaytonTheta theta) {
    check_open_point(p);
    return clayton_log_density({1.0 - p.u1, 1.0 - p.u2}, theta);
}

double survival_clayton_density(UnitSquarePoint p, ClaytonTheta theta) {
    return std::exp(survival_clayton_log_density(p, theta));
}

double survival_clayton_survival(double q1, double q2, ClaytonTheta theta) {
    return clayton_cdf({1.0 - q1, 1.0 - q2}, theta);
}

double log_survival_clayton_survival(double q1, double q2, ClaytonTheta theta) {
    check_point({q1, q2});
    const double v1 = 1.0 - q1;
    const double v2 = 1.0 - q2;
    if (v1 == 0.0 || v2 == 0.0)
        return -std::numeric_limits<double>::infinity();
    return log_clayton_cdf_interior(v1, v2, theta.value());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DataError("normal_quantile: probability outside [0, 1]");
    if (p == 0.0)
        return -std::numeric_limits<double>::infinity();
    if (p == 1.0)
        return std::numeric_limits<double>::infinity();
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace {

// Upper orthant probability P(X > dh, Y > dk), after Genz (2004), "Numerical
// computation of rectangular bivariate and trivariate normal and t
// probabilities", Statistics and Computing 14.
double bvn_upper(double dh, double dk, double r) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (dh == inf || dk == inf)
        return 0.0;
    if (dh == -inf)
        return dk == -inf ? 1.0 : normal_cdf(-dk);
    if (dk == -inf)
        return normal_cdf(-dh);
    if (r == 0.0)
        return normal_cdf(-dh) * normal_cdf(-dk);

    // Gauss-Legendre half rules (nodes in (0,1)) for 6, 12 and 20 points.
    static constexpr std::array<double, 3> w6{0.1713244923791705, 0.3607615730481384,
                                              0.4679139345726904};
    static constexpr std::array<double, 3> x6{0.9324695142031522, 0.6612093864662647,
                                              0.2386191860831970};
    static constexpr std::array<double, 6> w12{0.04717533638651177, 0.1069393259953183,
                                               0.1600783285433464,  0.2031674267230659,
                                               0.2334925365383547,  0.2491470458134029};
    static constexpr std::array<double, 6> x12{0.9815606342467191, 0.9041172563704750,
                                               0.7699026741943050, 0.5873179542866171,
                                               0.3678314989981802, 0.1252334085114692};
    static constexpr std::array<double, 10> w20{
        0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
        0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
        0.1491729864726037,  0.1527533871307259};
    static constexpr std::array<double, 10> x20{
        0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
        0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
        0.2277858511416451, 0.07652652113349733};

    const double* w = nullptr;
    const double* x = nullptr;
    std::size_t lg = 0;
    const double ar = std::abs(r);
    if (ar < 0.3) {
        w = w6.data(), x = x6.data(), lg = w6.size();
    } else if (ar < 0.75) {
        w = w12.data(), x = x12.data(), lg = w12.size();
    } else {
        w = w20.data(), x = x20.data(), lg = w20.size();
    }

    constexpr double tp = 2.0 * std::numbers::pi;
    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (ar < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r) / 2.0;
        for (std::size_t i = 0; i < lg; ++i) {
            for (const double node : {1.0 - x[i], 1.0 + x[i]}) {
                const double sn = std::sin(asr * node);
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        return std::clamp(bvn * asr / tp + normal_cdf(-h) * normal_cdf(-k), 0.0, 1.0);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (ar < 1.0) {
        const double as = 1.0 - r * r;
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 80.0;
        double asr = -(bs / as + hk) / 2.0;
        if (asr > -100.0)
            bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        if (hk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(tp) * normal_cdf(-b / a);
            bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a /= 2.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < lg; ++i) {
            for (const double node : {1.0 - x[i], 1.0 + x[i]}) {
                const double xs = (a * node) * (a * node);
                asr = -(bs / xs + hk) / 2.0;
                if (asr <= -100.0)
                    continue;
                const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                const double rs = std::sqrt(1.0 - xs);
                const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                sum += w[i] * std::exp(asr) * (sp - ep);
            }
        }
        bvn = (a * sum - bvn) / tp;
    }
    if (r > 0.0) {
        bvn += normal_cdf(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        const double l = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
        bvn = l - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

} // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
    if (std::isnan(h) || std::isnan(k) || !(rho >= -1.0 && rho <= 1.0))
        throw DataError("bivariate_normal_cdf: invalid argument");
    return bvn_upper(-h, -k, rho);
}

double gaussian_copula_cdf(UnitSquarePoint p, GaussianRho rho) {
    check_point(p);
    if (p.u1 == 0.0 || p.u2 == 0.0)
        return 0.0;
    if (p.u1 == 1.0)
        return p.u2;
    if (p.u2 == 1.0)
        return p.u1;
    return bivariate_normal_cdf(normal_quantile(p.u1), normal_quantile(p.u2), rho.value());
}

std::vector<UnitSquarePoint> sample_survival_clayton(std::size_t n, ClaytonTheta theta,
                                                     std::uint64_t seed) {
    if (n == 0)
        throw ConfigError("sample_survival_clayton: n must be >= 1");
    const double t = theta.value();
    const double shape = 1.0 / t;
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Gamma(a) with a < 1 is drawn as Gamma(a + 1) * U^(1/a) and kept in log
    // space; for large theta the frailty underflows otherwise.
    std::gamma_distribution<double> gamma(shape < 1.0 ? shape + 1.0 : shape, 1.0);

    std::vector<UnitSquarePoint> out(n);
    for (auto& p : out) {
        double log_v = std::log(gamma(rng));
        if (shape < 1.0) {
            double u = unif(rng);
            while (u == 0.0)
                u = unif(rng);
            log_v += std::log(u) / shape;
        }
        const double e1 = expo(rng);
        const double e2 = expo(rng);
        // Clayton coordinate: (1 + E/V)^(-1/theta); reflected: 1 - that.
        const double s1 = softplus(std::log(e1) - log_v) / t;
        const double s2 = softplus(std::log(e2) - log_v) / t;
        p = {-std::expm1(-s1), -std::expm1(-s2)};
    }
    return out;
}

std::vector<UnitSquarePoint> sample_gaussian_copula(std::size_t n, GaussianRho rho,
                                                    std::uint64_t seed) {
    if (n == 0)
        throw ConfigError("sample_gaussian_copula: n must be >= 1");
    const double r = rho.value();
    const double s = std::sqrt(1.0 - r * r);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<UnitSquarePoint> out(n);
    for (auto& p : out) {
        const double z1 = normal(rng);
        const double z2 = r * z1 + s * normal(rng);
        p = {normal_cdf(z1), normal_cdf(z2)};
    }
    return out;
}

double upper_tail_limit(ClaytonTheta theta) { return std::exp2(-1.0 / theta.value()); }

double upper_tail_limit(GaussianRho) { return 0.0; }

} // namespace cqsim
