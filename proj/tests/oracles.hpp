#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library code paths they check.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Kendall's tau-a via Knight's merge-sort discordance count, O(n log n).
inline double kendall_tau(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> seq(n), buf(n);
    for (std::size_t r = 0; r < n; ++r)
        seq[r] = y[idx[r]];
    long long swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, o = lo;
            while (a < mid && b < hi) {
                if (seq[b] < seq[a]) {
                    swaps += static_cast<long long>(mid - a);
                    buf[o++] = seq[b++];
                } else {
                    buf[o++] = seq[a++];
                }
            }
            while (a < mid)
                buf[o++] = seq[a++];
            while (b < hi)
                buf[o++] = seq[b++];
        }
        seq.swap(buf);
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return 1.0 - 2.0 * static_cast<double>(swaps) / pairs;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        sxy += (x[r] - mx) * (y[r] - my);
        sxx += (x[r] - mx) * (x[r] - mx);
        syy += (y[r] - my) * (y[r] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> ranks(const std::vector<double>& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        r[idx[k]] = static_cast<double>(k + 1);
    return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks(x), ranks(y));
}

// Kolmogorov-Smirnov distance of a sample to U(0,1).
inline double ks_uniform(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        d = std::max(d, std::abs(static_cast<double>(r + 1) / n - x[r]));
        d = std::max(d, std::abs(x[r] - static_cast<double>(r) / n));
    }
    return d;
}

// Panels on [0, len] graded geometrically towards 0.
inline std::vector<double> graded_edges(double len, int levels = 24) {
    std::vector<double> e{0.0};
    for (int k = levels; k >= 0; --k)
        e.push_back(len * std::pow(0.5, k));
    return e;
}

// Tensor Gauss-Legendre (20 points per panel) of f(a, b) over [0, la] x [0, lb].
template <class F>
double integrate_2d(F f, double la, double lb) {
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto ea = graded_edges(la), eb = graded_edges(lb);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ea.size(); ++i)
        for (std::size_t j = 0; j + 1 < eb.size(); ++j)
            total += GL::integrate(
                [&](double a) {
                    return GL::integrate([&](double b) { return f(a, b); }, eb[j], eb[j + 1]);
                },
                ea[i], ea[i + 1]);
    return total;
}

// AUC by enumerating every (outlier, inlier) pair.
inline double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
    double wins = 0.0, pairs = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) {
        if (y[a] != 1)
            continue;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (y[b] != 0)
                continue;
            pairs += 1.0;
            wins += s[a] > s[b] ? 1.0 : (s[a] == s[b] ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

} // namespace oracle
