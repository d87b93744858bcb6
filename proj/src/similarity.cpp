#include "cqsim/similarity.hpp"

#include "cqsim/error.hpp"

#include <exception>
#include <string>
#include <utility>

namespace cqsim {

std::string_view to_string(Measure m) {
    switch (m) {
    case Measure::theta_a:
        return "theta_a";
    case Measure::theta_s:
        return "theta_s";
    case Measure::theta_f:
        return "theta_f";
    case Measure::chi:
        return "chi";
    case Measure::chi_bar:
        return "chi_bar";
    case Measure::ucorr:
        return "ucorr";
    }
    return "unknown";
}

Measure parse_measure(std::string_view name) {
    for (const Measure m : kAllMeasures)
        if (to_string(m) == name)
            return m;
    throw ConfigError("unknown measure '" + std::string(name) +
                      "' (expected theta_a, theta_s, theta_f, chi, chi_bar or ucorr)");
}

double measure_ceiling(Measure m) {
    switch (m) {
    case Measure::theta_a:
    case Measure::theta_s:
    case Measure::theta_f:
        return kThetaMax;
    default:
        return 1.0;
    }
}

double measure_floor(Measure m) {
    switch (m) {
    case Measure::theta_a:
    case Measure::theta_s:
    case Measure::theta_f:
        return kThetaMin;
    case Measure::chi:
        return 0.0;
    default:
        return -1.0;
    }
}

PairDiagnostic evaluate_pair(const PseudoMatrix& u, Index i, Index j, Measure m,
                             QuadrantLevel q, double& value) {
    PairDiagnostic d;
    d.i = i;
    d.j = j;
    try {
        switch (m) {
        case Measure::theta_a:
        case Measure::theta_s:
        case Measure::theta_f: {
            const auto fit = fit_pair(u, i, j, q);
            if (m == Measure::theta_a) {
                value = fit.theta_a;
                d.flag = fit.boundary_flag();
            } else if (m == Measure::theta_s) {
                value = fit.theta_s;
                d.flag = fit.flag_s;
            } else {
                value = fit.theta_f;
                d.flag = fit.flag_f;
            }
            break;
        }
        case Measure::chi:
            value = chi_hat(u, i, j, q);
            break;
        case Measure::chi_bar: {
            const auto cb = chi_bar_hat(u, i, j, q);
            value = cb.value;
            if (cb.degenerate) {
                d.flag = cb.value < 0.0 ? BoundaryFlag::clamped_low : BoundaryFlag::clamped_high;
                d.message = "degenerate quadrant";
            }
            break;
        }
        case Measure::ucorr:
            value = ucorr(u, i, j, q);
            break;
        }
    } catch (const NumericalError& e) {
        value = measure_floor(m);
        d.failed = true;
        d.message = e.what();
    }
    return d;
}

SimilarityMatrix build_similarity(const PseudoMatrix& u, Measure m, QuadrantLevel q,
                                  Execution exec) {
    const Index k = u.cols();
    if (k < 2)
        throw DataError("build_similarity: need at least 2 columns");

    std::vector<std::pair<Index, Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(k * (k - 1) / 2));
    for (Index i = 0; i < k; ++i)
        for (Index j = i + 1; j < k; ++j)
            pairs.emplace_back(i, j);

    SimilarityMatrix w;
    w.measure = m;
    w.q = q.value();
    w.names = u.names();
    w.values = Eigen::MatrixXd::Constant(k, k, measure_ceiling(m));
    w.diagnostics.resize(pairs.size());
    std::vector<double> pair_values(pairs.size(), 0.0);

    const auto npairs = static_cast<std::ptrdiff_t>(pairs.size());
    if (exec == Execution::parallel) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t p = 0; p < npairs; ++p) {
            try {
                w.diagnostics[p] = evaluate_pair(u, pairs[p].first, pairs[p].second, m, q,
                                                 pair_values[p]);
            } catch (...) {
#pragma omp critical(cqsim_similarity_failure)
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
    } else {
        for (std::ptrdiff_t p = 0; p < npairs; ++p)
            w.diagnostics[p] =
                evaluate_pair(u, pairs[p].first, pairs[p].second, m, q, pair_values[p]);
    }

    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        w.values(i, j) = pair_values[p];
        w.values(j, i) = pair_values[p];
    }
    return w;
}

SimilarityMatrix build_similarity(const ScoreMatrix& y, Measure m, QuadrantLevel q,
                                  Execution exec) {
    return build_similarity(rank_transform(y, exec), m, q, exec);
}

} // namespace cqsim
