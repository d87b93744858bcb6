#pragma once

#include "cqsim/empirical.hpp"
#include "cqsim/estimators.hpp"
#include "cqsim/execution.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace cqsim {

enum class Measure { theta_a, theta_s, theta_f, chi, chi_bar, ucorr };

inline constexpr std::array<Measure, 6> kAllMeasures{Measure::theta_a, Measure::theta_s,
                                                     Measure::theta_f, Measure::chi,
                                                     Measure::chi_bar, Measure::ucorr};

std::string_view to_string(Measure m);
/// Accepts the names produced by to_string; throws ConfigError otherwise.
Measure parse_measure(std::string_view name);

/// Self-similarity placed on the diagonal: kThetaMax for the theta measures,
/// 1 for chi, chi_bar and ucorr.
double measure_ceiling(Measure m);
/// Value written for a pair whose measure is undefined.
double measure_floor(Measure m);

struct PairDiagnostic {
    Index i = 0;
    Index j = 0;
    BoundaryFlag flag = BoundaryFlag::interior;
    bool failed = false;
    std::string message;
};

struct SimilarityMatrix {
    Measure measure = Measure::theta_a;
    double q = QuadrantLevel::kDefault;
    Eigen::MatrixXd values;
    std::vector<std::string> names;
    /// One entry per unordered pair i < j, in row-major pair order.
    std::vector<PairDiagnostic> diagnostics;

    Index size() const { return values.rows(); }
};

/// Single-pair evaluation used by both build paths.
PairDiagnostic evaluate_pair(const PseudoMatrix& u, Index i, Index j, Measure m,
                             QuadrantLevel q, double& value);

/// Fits the measure on every unordered column pair. Pair failures are
/// recorded in diagnostics and their entry is set to measure_floor; they never
/// abort the build. The parallel path distributes pairs over OpenMP threads and
/// produces output identical to the serial path.
SimilarityMatrix build_similarity(const PseudoMatrix& u, Measure m, QuadrantLevel q,
                                  Execution exec = Execution::parallel);

/// Rank-transforms once, then builds as above.
SimilarityMatrix build_similarity(const ScoreMatrix& y, Measure m, QuadrantLevel q,
                                  Execution exec = Execution::parallel);

} // namespace cqsim
