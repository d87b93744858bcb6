#include "cqsim/ensemble.hpp"

#include "cqsim/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>

namespace cqsim {

std::string_view to_string(WithinOp op) {
    switch (op) {
    case WithinOp::all:
        return "all";
    case WithinOp::mean:
        return "mean";
    case WithinOp::max:
        return "max";
    }
    return "unknown";
}

std::string_view to_string(AcrossOp op) { return op == AcrossOp::mean ? "mean" : "max"; }

WithinOp parse_within(std::string_view name) {
    if (name == "all")
        return WithinOp::all;
    if (name == "mean")
        return WithinOp::mean;
    if (name == "max")
        return WithinOp::max;
    throw ConfigError("unknown within-cluster operator '" + std::string(name) +
                      "' (expected all, mean or max)");
}

AcrossOp parse_across(std::string_view name) {
    if (name == "mean")
        return AcrossOp::mean;
    if (name == "max")
        return AcrossOp::max;
    throw ConfigError("unknown across-cluster operator '" + std::string(name) +
                      "' (expected mean or max)");
}

namespace {

double reduce(const double* first, std::size_t count, bool use_max) {
    if (use_max)
        return *std::max_element(first, first + count);
    return std::accumulate(first, first + count, 0.0) / static_cast<double>(count);
}

} // namespace

std::vector<double> combine_scores(const PseudoMatrix& u, const EnsembleSpec& spec,
                                   Execution exec) {
    const Index n = u.rows();
    const Index k = u.cols();

    // Column groups the across operator runs over.
    std::vector<std::vector<Index>> groups;
    if (spec.within == WithinOp::all) {
        groups.resize(static_cast<std::size_t>(k));
        for (Index j = 0; j < k; ++j)
            groups[j] = {j};
    } else {
        if (static_cast<Index>(spec.cluster_labels.size()) != k)
            throw ConfigError("combine_scores: " + std::to_string(spec.cluster_labels.size()) +
                              " cluster labels for " + std::to_string(k) + " columns");
        std::map<int, std::vector<Index>> by_label;
        for (Index j = 0; j < k; ++j)
            if (spec.cluster_labels[j] >= 0)
                by_label[spec.cluster_labels[j]].push_back(j);
        if (by_label.empty())
            throw ConfigError("combine_scores: every detector is labelled noise");
        for (auto& [label, cols] : by_label)
            groups.push_back(std::move(cols));
    }

    const bool within_max = spec.within == WithinOp::max;
    const bool across_max = spec.across == AcrossOp::max;
    auto combine_row = [&](Index r, std::vector<double>& scratch) {
        scratch.clear();
        std::vector<double> members;
        for (const auto& cols : groups) {
            members.clear();
            for (const Index j : cols)
                members.push_back(u(r, j));
            scratch.push_back(reduce(members.data(), members.size(), within_max));
        }
        return reduce(scratch.data(), scratch.size(), across_max);
    };

    std::vector<double> out(static_cast<std::size_t>(n));
    if (exec == Execution::parallel) {
#pragma omp parallel
        {
            std::vector<double> scratch;
#pragma omp for schedule(static)
            for (Index r = 0; r < n; ++r)
                out[r] = combine_row(r, scratch);
        }
    } else {
        std::vector<double> scratch;
        for (Index r = 0; r < n; ++r)
            out[r] = combine_row(r, scratch);
    }
    return out;
}

RocResult auc_roc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw DataError("auc_roc: " + std::to_string(scores.size()) + " scores for " +
                        std::to_string(labels.size()) + " labels");
    std::int64_t n1 = 0;
    for (const int l : labels) {
        if (l != 0 && l != 1)
            throw DataError("auc_roc: labels must be 0 or 1");
        n1 += l;
    }
    const auto n = static_cast<std::int64_t>(labels.size());
    const std::int64_t n0 = n - n1;
    if (n1 == 0 || n0 == 0)
        throw DataError("auc_roc: labels contain a single class");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Twice the positive rank sum with mid-ranks, kept in integers.
    std::int64_t twice_rank_sum = 0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() && scores[order[end]] == scores[order[start]])
            ++end;
        std::int64_t positives = 0;
        for (std::size_t r = start; r < end; ++r)
            positives += labels[order[r]];
        twice_rank_sum += positives * static_cast<std::int64_t>(start + end + 1);
        start = end;
    }
    const std::int64_t twice_u = twice_rank_sum - n1 * (n1 + 1);

    RocResult out;
    out.auc = (static_cast<double>(twice_u) / 2.0) /
              (static_cast<double>(n1) * static_cast<double>(n0));

    out.curve.push_back({0.0, 0.0});
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (std::size_t end = order.size(); end > 0;) {
        std::size_t start = end - 1;
        while (start > 0 && scores[order[start - 1]] == scores[order[end - 1]])
            --start;
        for (std::size_t r = start; r < end; ++r) {
            if (labels[order[r]] == 1)
                ++tp;
            else
                ++fp;
        }
        out.curve.push_back({static_cast<double>(fp) / static_cast<double>(n0),
                             static_cast<double>(tp) / static_cast<double>(n1)});
        end = start;
    }
    return out;
}

} // namespace cqsim
