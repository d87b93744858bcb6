#pragma once

#include "cqsim/empirical.hpp"
#include "cqsim/execution.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace cqsim {

enum class WithinOp { all, mean, max };
enum class AcrossOp { mean, max };

std::string_view to_string(WithinOp op);
std::string_view to_string(AcrossOp op);
WithinOp parse_within(std::string_view name);
AcrossOp parse_across(std::string_view name);

/// How detector columns are pooled into one score per row.
///
/// within = all ignores the labels and applies the across operator directly
/// over every column. Otherwise each non-noise cluster is first reduced per row
/// by the within operator and the across operator is applied to those cluster
/// aggregates; noise-labelled columns (negative labels) take no part.
struct EnsembleSpec {
    WithinOp within = WithinOp::mean;
    AcrossOp across = AcrossOp::max;
    std::vector<int> cluster_labels;
};

/// Combined score per row. Inputs are pseudo-observations so every detector is
/// on the same rank scale. Throws ConfigError when within != all and no
/// non-noise cluster exists.
std::vector<double> combine_scores(const PseudoMatrix& u, const EnsembleSpec& spec,
                                   Execution exec = Execution::parallel);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocResult {
    double auc = 0.0;
    std::vector<RocPoint> curve; // from (0,0) to (1,1), one point per distinct score
};

/// AUC via the Mann-Whitney statistic with ties counted half, i.e. exactly
/// P(outlier score > inlier score) + P(tie) / 2. Labels are 0 (inlier) or
/// 1 (outlier); both classes must be present.
RocResult auc_roc(std::span<const double> scores, std::span<const int> labels);

} // namespace cqsim
