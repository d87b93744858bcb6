#include "cqsim/empirical.hpp"

#include "cqsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cqsim {

namespace {

std::vector<std::string> default_names(std::vector<std::string> names, Index k) {
    if (names.empty()) {
        names.reserve(static_cast<std::size_t>(k));
        for (Index j = 0; j < k; ++j)
            names.push_back("s" + std::to_string(j));
    }
    if (static_cast<Index>(names.size()) != k)
        throw DataError("column name count " + std::to_string(names.size()) +
                        " does not match column count " + std::to_string(k));
    return names;
}

void check_pair(const PseudoMatrix& u, Index i, Index j) {
    if (i < 0 || j < 0 || i >= u.cols() || j >= u.cols())
        throw ConfigError("column index out of range");
    if (i == j)
        throw ConfigError("pairwise measure requested for a column with itself");
}

// Writes #{k : x_k <= x_i} / (n + 1) into out[i].
void rank_into(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    const auto denom = static_cast<double>(n + 1);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && x[order[end]] == x[order[start]])
            ++end;
        const double value = static_cast<double>(end) / denom;
        for (std::size_t r = start; r < end; ++r)
            out[order[r]] = value;
        start = end;
    }
}

} // namespace

ScoreMatrix::ScoreMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)) {
    if (values_.rows() < 2 || values_.cols() < 2)
        throw DataError("score matrix needs at least 2 rows and 2 columns, got " +
                        std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
    if (!values_.allFinite())
        throw DataError("score matrix contains non-finite entries");
    names_ = default_names(std::move(names), values_.cols());
}

std::span<const double> ScoreMatrix::column(Index j) const {
    return {values_.col(j).data(), static_cast<std::size_t>(values_.rows())};
}

PseudoMatrix::PseudoMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)) {
    if (values_.rows() < 2 || values_.cols() < 1)
        throw DataError("pseudo-observation matrix needs at least 2 rows");
    if (values_.hasNaN())
        throw DataError("pseudo-observation matrix contains NaN");
    for (double& v : values_.reshaped()) {
        if (v < 0.0 || v > 1.0) {
            v = std::clamp(v, 0.0, 1.0);
            ++clamped_;
        }
    }
    names_ = default_names(std::move(names), values_.cols());
}

std::span<const double> PseudoMatrix::column(Index j) const {
    return {values_.col(j).data(), static_cast<std::size_t>(values_.rows())};
}

QuadrantLevel::QuadrantLevel(double q) : q_(q) {
    if (!(q > 0.0 && q < 1.0))
        throw ConfigError("quadrant level q must lie in (0, 1), got " + std::to_string(q));
}

PseudoMatrix rank_transform(const ScoreMatrix& y, Execution exec) {
    const Index n = y.rows();
    const Index k = y.cols();
    if (n > (Index{1} << 24))
        throw DataError("rank_transform: more than 2^24 rows");
    Eigen::MatrixXd u(n, k);
    auto column_out = [&](Index j) {
        return std::span<double>(u.col(j).data(), static_cast<std::size_t>(n));
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (Index j = 0; j < k; ++j)
            rank_into(y.column(j), column_out(j));
    } else {
        for (Index j = 0; j < k; ++j)
            rank_into(y.column(j), column_out(j));
    }
    return PseudoMatrix(std::move(u), y.names());
}

std::vector<double> rank_transform(std::span<const double> column) {
    std::vector<double> out(column.size());
    rank_into(column, out);
    return out;
}

double empirical_copula(const PseudoMatrix& u, Index i, Index j, double q1, double q2) {
    check_pair(u, i, j);
    const auto a = u.column(i);
    const auto b = u.column(j);
    std::size_t count = 0;
    for (std::size_t r = 0; r < a.size(); ++r)
        count += (a[r] <= q1 && b[r] <= q2) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(a.size());
}

double empirical_survival(const PseudoMatrix& u, Index i, Index j, double q1, double q2) {
    check_pair(u, i, j);
    const auto a = u.column(i);
    const auto b = u.column(j);
    std::size_t count = 0;
    for (std::size_t r = 0; r < a.size(); ++r)
        count += (a[r] >= q1 && b[r] >= q2) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(a.size());
}

double empirical_exceedance(const PseudoMatrix& u, Index j, double q) {
    if (j < 0 || j >= u.cols())
        throw ConfigError("column index out of range");
    const auto a = u.column(j);
    const auto count = std::count_if(a.begin(), a.end(), [q](double v) { return v >= q; });
    return static_cast<double>(count) / static_cast<double>(a.size());
}

std::vector<UnitSquarePoint> quadrant_points(const PseudoMatrix& u, Index i, Index j,
                                             QuadrantLevel level) {
    check_pair(u, i, j);
    const double q = level.value();
    const auto a = u.column(i);
    const auto b = u.column(j);
    std::vector<UnitSquarePoint> out;
    for (std::size_t r = 0; r < a.size(); ++r)
        if (a[r] >= q && b[r] >= q)
            out.push_back({a[r], b[r]});
    return out;
}

std::size_t quadrant_count(const PseudoMatrix& u, Index i, Index j, QuadrantLevel level) {
    check_pair(u, i, j);
    const double q = level.value();
    const auto a = u.column(i);
    const auto b = u.column(j);
    std::size_t count = 0;
    for (std::size_t r = 0; r < a.size(); ++r)
        count += (a[r] >= q && b[r] >= q) ? 1 : 0;
    return count;
}

} // namespace cqsim
