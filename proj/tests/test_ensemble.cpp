#include "cqsim/ensemble.hpp"
#include "cqsim/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cqsim;
using doctest::Approx;

namespace {

PseudoMatrix random_pseudo(Index n, Index k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif;
    Eigen::MatrixXd y(n, k);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < k; ++c)
            y(r, c) = unif(rng);
    return rank_transform(ScoreMatrix(y));
}

} // namespace

TEST_CASE("operator names round trip") {
    for (const WithinOp op : {WithinOp::all, WithinOp::mean, WithinOp::max})
        CHECK(parse_within(to_string(op)) == op);
    for (const AcrossOp op : {AcrossOp::mean, AcrossOp::max})
        CHECK(parse_across(to_string(op)) == op);
    CHECK_THROWS_AS(parse_within("median"), ConfigError);
    CHECK_THROWS_AS(parse_across("all"), ConfigError);
}

TEST_CASE("combine scores by hand") {
    Eigen::MatrixXd v(2, 2);
    v << 0.2, 0.8, 0.6, 0.4;
    const PseudoMatrix u(v);
    CHECK(combine_scores(u, {WithinOp::mean, AcrossOp::max, {0, 1}}) == std::vector<double>{0.8, 0.6});
    CHECK(combine_scores(u, {WithinOp::all, AcrossOp::mean, {}}) == std::vector<double>{0.5, 0.5});
    CHECK(combine_scores(u, {WithinOp::all, AcrossOp::max, {}}) == std::vector<double>{0.8, 0.6});
    CHECK(combine_scores(u, {WithinOp::max, AcrossOp::mean, {0, 0}}) == std::vector<double>{0.8, 0.6});
}

TEST_CASE("a single cluster nests into the all-column mean") {
    const auto u = random_pseudo(300, 5, 1);
    const auto a = combine_scores(u, {WithinOp::mean, AcrossOp::max, {2, 2, 2, 2, 2}});
    const auto b = combine_scores(u, {WithinOp::all, AcrossOp::mean, {}});
    for (std::size_t r = 0; r < a.size(); ++r)
        CHECK(a[r] == Approx(b[r]).epsilon(1e-14));
}

TEST_CASE("noise columns are left out of cluster-aware combination") {
    Eigen::MatrixXd v(2, 3);
    v << 0.1, 0.3, 0.99, 0.5, 0.5, 0.5;
    const PseudoMatrix u(v);
    CHECK(combine_scores(u, {WithinOp::mean, AcrossOp::max, {0, 0, -1}})[0] == Approx(0.2));
    CHECK(combine_scores(u, {WithinOp::all, AcrossOp::max, {0, 0, -1}})[0] == 0.99);
    CHECK_THROWS_AS(combine_scores(u, {WithinOp::mean, AcrossOp::max, {-1, -1, -1}}), ConfigError);
    CHECK_THROWS_AS(combine_scores(u, {WithinOp::mean, AcrossOp::max, {0, 1}}), ConfigError);
}

TEST_CASE("combination is monotone in every pseudo value") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif;
    const std::vector<int> labels{0, 0, 1, -1, 1, 2};
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::MatrixXd v(4, 6);
        for (Index r = 0; r < 4; ++r)
            for (Index c = 0; c < 6; ++c)
                v(r, c) = unif(rng);
        const Index rr = trial % 4, cc = trial % 6;
        Eigen::MatrixXd raised = v;
        raised(rr, cc) = std::min(1.0, v(rr, cc) + unif(rng));
        for (const WithinOp w : {WithinOp::all, WithinOp::mean, WithinOp::max})
            for (const AcrossOp a : {AcrossOp::mean, AcrossOp::max}) {
                const auto before = combine_scores(PseudoMatrix(v), {w, a, labels});
                const auto after = combine_scores(PseudoMatrix(raised), {w, a, labels});
                for (std::size_t r = 0; r < before.size(); ++r)
                    CHECK(after[r] >= before[r]);
            }
    }
}

TEST_CASE("parallel and serial combination agree exactly") {
    const auto u = random_pseudo(5000, 12, 3);
    const EnsembleSpec spec{WithinOp::mean, AcrossOp::max, {0, 0, 0, 1, 1, 1, 2, 2, 2, -1, -1, 3}};
    CHECK(combine_scores(u, spec, Execution::serial) == combine_scores(u, spec, Execution::parallel));
}

TEST_CASE("auc examples") {
    const std::vector<double> s{1, 2, 3, 4};
    CHECK(auc_roc(s, std::vector<int>{0, 0, 1, 1}).auc == 1.0);
    CHECK(auc_roc(s, std::vector<int>{0, 1, 0, 1}).auc == 0.75);
    CHECK(auc_roc(s, std::vector<int>{1, 1, 0, 0}).auc == 0.0);
    CHECK(auc_roc(std::vector<double>{1, 1, 1}, std::vector<int>{0, 1, 0}).auc == 0.5);
}

TEST_CASE("auc rejects invalid labels") {
    const std::vector<double> s{1, 2, 3};
    CHECK_THROWS_AS(auc_roc(s, std::vector<int>{1, 1, 1}), DataError);
    CHECK_THROWS_AS(auc_roc(s, std::vector<int>{0, 2, 1}), DataError);
    CHECK_THROWS_AS(auc_roc(s, std::vector<int>{0, 1}), DataError);
}

TEST_CASE("auc of uninformative scores is one half") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif;
    std::bernoulli_distribution coin(0.3);
    std::vector<double> s(10'000);
    std::vector<int> y(10'000);
    for (std::size_t r = 0; r < s.size(); ++r)
        s[r] = unif(rng), y[r] = coin(rng);
    CHECK(std::abs(auc_roc(s, y).auc - 0.5) < 0.02);
}

TEST_CASE("auc equals the exhaustive pairwise count, with ties") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 199;
        std::uniform_int_distribution<int> level(0, trial % 3 == 0 ? 5 : 1'000'000);
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t r = 0; r < n; ++r)
            s[r] = level(rng), y[r] = static_cast<int>(rng() % 2);
        y[0] = 0;
        y[1] = 1;
        CHECK(auc_roc(s, y).auc == oracle::brute_auc(s, y));
    }
}

TEST_CASE("roc curve is monotone and its trapezoid area is the auc") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> level(0, 20);
        std::vector<double> s(150);
        std::vector<int> y(150);
        for (std::size_t r = 0; r < s.size(); ++r)
            y[r] = static_cast<int>(rng() % 2), s[r] = level(rng) + 5 * y[r];
        const auto roc = auc_roc(s, y);
        REQUIRE(roc.curve.size() >= 2);
        CHECK(roc.curve.front().fpr == 0.0);
        CHECK(roc.curve.front().tpr == 0.0);
        CHECK(roc.curve.back().fpr == 1.0);
        CHECK(roc.curve.back().tpr == 1.0);
        double area = 0.0;
        for (std::size_t k = 1; k < roc.curve.size(); ++k) {
            CHECK(roc.curve[k].fpr >= roc.curve[k - 1].fpr);
            CHECK(roc.curve[k].tpr >= roc.curve[k - 1].tpr);
            area += (roc.curve[k].fpr - roc.curve[k - 1].fpr) *
                    (roc.curve[k].tpr + roc.curve[k - 1].tpr) / 2;
        }
        CHECK(area == Approx(roc.auc).epsilon(1e-12));

        std::vector<double> neg(s.size());
        for (std::size_t r = 0; r < s.size(); ++r)
            neg[r] = -s[r];
        CHECK(auc_roc(neg, y).auc == Approx(1.0 - roc.auc).epsilon(1e-12));
    }
}
