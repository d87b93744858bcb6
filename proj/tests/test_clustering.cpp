#include "cqsim/clustering.hpp"
#include "cqsim/datagen.hpp"
#include "cqsim/error.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace cqsim;
using doctest::Approx;

namespace {

Eigen::MatrixXd random_similarity(Index k, std::uint64_t seed, double lo = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(lo, 5.0);
    Eigen::MatrixXd w(k, k);
    for (Index i = 0; i < k; ++i) {
        w(i, i) = kThetaMax;
        for (Index j = i + 1; j < k; ++j)
            w(i, j) = w(j, i) = unif(rng);
    }
    return w;
}

Eigen::MatrixXd two_blocks(Index per, double within, double cross) {
    const Index k = 2 * per;
    Eigen::MatrixXd w = Eigen::MatrixXd::Constant(k, k, cross);
    w.topLeftCorner(per, per).setConstant(within);
    w.bottomRightCorner(per, per).setConstant(within);
    w.diagonal().setConstant(kThetaMax);
    return w;
}

// True when a and b induce the same partition with the same noise set.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<int, int> ab, ba;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if ((a[r] < 0) != (b[r] < 0))
            return false;
        if (a[r] < 0)
            continue;
        if (ab.emplace(a[r], b[r]).first->second != b[r] ||
            ba.emplace(b[r], a[r]).first->second != a[r])
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("laplacian rows sum to zero") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto l = laplacian(affinity_matrix(random_similarity(9, seed)));
        CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
        CHECK(l == l.transpose());
    }
}

TEST_CASE("affinity shifts negative similarities and zeroes the diagonal") {
    Eigen::MatrixXd w(3, 3);
    w << 1, -0.4, 0.2, -0.4, 1, 0.5, 0.2, 0.5, 1;
    double shift = 0;
    const auto a = affinity_matrix(w, &shift);
    CHECK(shift == Approx(0.4));
    CHECK(a(0, 1) == Approx(0.0));
    CHECK(a(1, 2) == Approx(0.9));
    CHECK(a.diagonal().isZero());
    double none = -1;
    affinity_matrix(random_similarity(4, 1), &none);
    CHECK(none == 0.0);
}

TEST_CASE("non-symmetric or non-finite similarity is rejected") {
    Eigen::MatrixXd w = random_similarity(4, 2);
    w(0, 1) += 0.1;
    CHECK_THROWS_AS(spectral_embed(w), DataError);
    Eigen::MatrixXd nan = random_similarity(4, 2);
    nan(1, 2) = nan(2, 1) = std::nan("");
    CHECK_THROWS_AS(spectral_embed(nan), DataError);
    CHECK_THROWS_AS(spectral_embed(random_similarity(3, 3), 3), ConfigError);
}

TEST_CASE("two disconnected blocks embed to two values") {
    const auto e = spectral_embed(two_blocks(4, 1.0, 0.0), 1);
    std::set<double> distinct;
    for (Index r = 0; r < 8; ++r)
        distinct.insert(std::round(e.coordinates(r, 0) * 1e9) / 1e9);
    CHECK(distinct.size() == 2);
    CHECK(e.coordinates(0, 0) == Approx(e.coordinates(3, 0)));
    CHECK(e.coordinates(4, 0) == Approx(e.coordinates(7, 0)));
    CHECK(e.coordinates(0, 0) != Approx(e.coordinates(4, 0)));
    CHECK(std::abs(e.eigenvalues(1)) < 1e-10); // second zero eigenvalue
}

TEST_CASE("complete graph spectrum") {
    const auto e = spectral_embed(Eigen::MatrixXd::Ones(5, 5), 1);
    CHECK(e.eigenvalues(0) == Approx(0.0).epsilon(1e-12));
    CHECK(e.eigenvalues(1) == Approx(5.0).epsilon(1e-12));
}

TEST_CASE("first eigenpair is zero and constant, embedding is unit and orthogonal to ones") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = random_similarity(7, seed, -2.0);
        const auto e = spectral_embed(w, 2);
        CHECK(std::abs(e.eigenvalues(0)) < 1e-10);
        CHECK(e.eigenvalues.size() == 3);
        for (Index c = 0; c < 2; ++c) {
            CHECK(e.coordinates.col(c).norm() == Approx(1.0));
            CHECK(std::abs(e.coordinates.col(c).sum()) < 1e-10);
        }
        // Reference: ones-direction eigenvector of L from a plain solver.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(affinity_matrix(w)));
        const Eigen::VectorXd v0 = es.eigenvectors().col(0);
        const double corr = std::abs(v0.sum()) / (v0.norm() * std::sqrt(7.0));
        CHECK(corr > 1 - 1e-10);
        CHECK(e.eigenvalues(1) == Approx(es.eigenvalues()(1)).epsilon(1e-10));
        CHECK(std::abs(e.coordinates.col(0).dot(es.eigenvectors().col(1))) == Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("sign convention: first non-negligible entry positive") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto e = spectral_embed(random_similarity(6, seed), 2);
        for (Index c = 0; c < 2; ++c) {
            Index r = 0;
            while (std::abs(e.coordinates(r, c)) <= 1e-10)
                ++r;
            CHECK(e.coordinates(r, c) > 0);
        }
    }
}

TEST_CASE("embedding follows a simultaneous permutation up to sign") {
    const auto w = random_similarity(8, 9);
    std::vector<Index> perm(8);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(10));
    Eigen::MatrixXd p(8, 8);
    for (Index i = 0; i < 8; ++i)
        for (Index j = 0; j < 8; ++j)
            p(i, j) = w(perm[i], perm[j]);
    const auto a = spectral_embed(w), b = spectral_embed(p);
    const double sign = a.coordinates(perm[0], 0) * b.coordinates(0, 0) > 0 ? 1.0 : -1.0;
    for (Index i = 0; i < 8; ++i)
        CHECK(b.coordinates(i, 0) == Approx(sign * a.coordinates(perm[i], 0)).epsilon(1e-9));

    const std::vector<int> labels{0, 0, 1, 1, 0, 1, 2, 2};
    std::vector<int> plabels(8);
    for (Index i = 0; i < 8; ++i)
        plabels[i] = labels[perm[i]];
    CHECK(davies_bouldin(a, labels).db_index == Approx(davies_bouldin(b, plabels).db_index).epsilon(1e-9));
}

TEST_CASE("davies-bouldin examples") {
    Eigen::MatrixXd pts(4, 1);
    pts << 0, 0, 1, 1;
    const std::vector<int> labels{0, 0, 1, 1};
    CHECK(davies_bouldin(pts, labels).db_index == 0.0);

    pts << -0.1, 0.1, 0.9, 1.1;
    const auto ev = davies_bouldin(pts, labels);
    CHECK(ev.spread[0] == Approx(0.5 * std::sqrt(0.02)).epsilon(1e-12));
    CHECK(ev.spread[1] == Approx(0.5 * std::sqrt(0.02)).epsilon(1e-12));
    CHECK(ev.centroid_distances(0, 1) == Approx(1.0).epsilon(1e-12));
    CHECK(ev.db_index == Approx(0.141421356).epsilon(1e-8));
    CHECK(ev.cluster_ids == std::vector<int>{0, 1});

    // Textbook spread: mean distance to the centroid.
    CHECK(davies_bouldin(pts, labels, SpreadDefinition::mean_distance).db_index == Approx(0.2).epsilon(1e-12));
}

TEST_CASE("davies-bouldin is scale invariant and falls as clusters separate") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Eigen::MatrixXd pts(30, 2);
    std::vector<int> labels(30);
    for (Index r = 0; r < 30; ++r) {
        labels[r] = static_cast<int>(r % 3);
        pts(r, 0) = 4.0 * labels[r] + g(rng);
        pts(r, 1) = g(rng);
    }
    const double base = davies_bouldin(pts, labels).db_index;
    CHECK(davies_bouldin(Eigen::MatrixXd(3.7 * pts), labels).db_index == Approx(base).epsilon(1e-12));

    Eigen::MatrixXd two(4, 1);
    const std::vector<int> l2{0, 0, 1, 1};
    double prev = 1e300;
    for (double gap : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        two << -0.1, 0.1, gap - 0.1, gap + 0.1;
        const double db = davies_bouldin(two, l2).db_index;
        CHECK(db < prev);
        prev = db;
    }
}

TEST_CASE("davies-bouldin rejects degenerate input") {
    Eigen::MatrixXd pts(4, 1);
    pts << -1, 1, -2, 2;
    CHECK_THROWS_AS(davies_bouldin(pts, std::vector<int>{0, 0, 1, 1}), NumericalError);
    CHECK_THROWS_AS(davies_bouldin(pts, std::vector<int>{0, 0, 0, 0}), DataError);
    CHECK_THROWS_AS(davies_bouldin(pts, std::vector<int>{0, -1, 1, 1}), DataError);
    CHECK_THROWS_AS(davies_bouldin(pts, std::vector<int>{0, 1, 1}), DataError);
}

TEST_CASE("dbscan on two tight blocks") {
    const Eigen::MatrixXd w = two_blocks(4, 5.0, 0.1);
    const auto d = dissimilarity_from_similarity(w);
    CHECK(d(0, 0) == Approx(std::exp(-kThetaMax)));
    // within exp(-5) ~ 0.0067, across exp(-0.1) ~ 0.905
    const auto labels = dbscan_precomputed(d, 0.1, 3);
    CHECK(labels == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
    const auto all_noise = dbscan_precomputed(d, 0.001, 2);
    CHECK(std::all_of(all_noise.begin(), all_noise.end(), [](int l) { return l == kNoiseLabel; }));

    SimilarityMatrix sm;
    sm.values = w;
    CHECK(dbscan_cluster(sm, 0.1, 3) == labels);
    const double eps = default_dbscan_eps(d, 3);
    // Every point has the same k-distance, so eps lands on it.
    CHECK(eps >= std::exp(-5.0));
    CHECK(eps < std::exp(-0.1));
    CHECK(dbscan_precomputed(d, eps, 3) == labels);
}

TEST_CASE("dbscan border points join their nearest core point") {
    // 0-1-2 dense chain, 3 sits within eps of 2 only, 4 is isolated.
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(5, 5, 10.0);
    d.diagonal().setZero();
    auto set = [&](int a, int b, double v) { d(a, b) = d(b, a) = v; };
    set(0, 1, 0.1);
    set(1, 2, 0.1);
    set(0, 2, 0.15);
    set(2, 3, 0.18);
    const auto labels = dbscan_precomputed(d, 0.2, 3);
    CHECK(labels == std::vector<int>{0, 0, 0, 0, kNoiseLabel});
}

TEST_CASE("dbscan output does not depend on input order") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    const Index k = 15;
    Eigen::MatrixXd x(k, 2);
    for (Index r = 0; r < k; ++r)
        x.row(r) << 5.0 * static_cast<double>(r % 3) + 0.3 * g(rng), 0.3 * g(rng);
    x.row(14) << 50, 50;
    Eigen::MatrixXd d(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            d(i, j) = (x.row(i) - x.row(j)).norm();
    const auto base = dbscan_precomputed(d, 1.5, 3);
    CHECK(base[14] == kNoiseLabel);
    for (std::uint64_t s = 0; s < 10; ++s) {
        std::vector<Index> perm(k);
        std::iota(perm.begin(), perm.end(), Index{0});
        std::shuffle(perm.begin(), perm.end(), std::mt19937_64(s));
        Eigen::MatrixXd p(k, k);
        for (Index i = 0; i < k; ++i)
            for (Index j = 0; j < k; ++j)
                p(i, j) = d(perm[i], perm[j]);
        const auto pl = dbscan_precomputed(p, 1.5, 3);
        std::vector<int> back(k);
        for (Index i = 0; i < k; ++i)
            back[perm[i]] = pl[i];
        CHECK(same_partition(base, back));
    }
}

TEST_CASE("dbscan rejects invalid parameters") {
    const auto d = dissimilarity_from_similarity(two_blocks(2, 3.0, 0.1));
    CHECK_THROWS_AS(dbscan_precomputed(d, 0.0, 3), ConfigError);
    CHECK_THROWS_AS(dbscan_precomputed(d, 0.1, 0), ConfigError);
}

TEST_CASE("t-ensemble similarity recovers the four clusters") {
    const auto bundle = gen_t_ensemble(0);
    const auto w = build_similarity(bundle.scores, Measure::theta_a, QuadrantLevel(0.75));
    const auto d = dissimilarity_from_similarity(w.values);
    const auto labels = dbscan_precomputed(d, default_dbscan_eps(d, 3), 3);
    CHECK(same_partition(labels, bundle.detector_cluster_labels));
}
