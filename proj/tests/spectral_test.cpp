#include <doctest.h>

#include <cmath>

#include "anderson/spectral.hpp"
#include "support.hpp"

using namespace anderson;
using testing::point;

namespace {

HamiltonianMatrix free_chain(int sites) {
    const auto r = Rectangle::from_bounds(1, 1, {0}, {sites - 1});
    return build_hamiltonian(r, testing::field_1d(0, std::vector<double>(static_cast<std::size_t>(sites), 0.0)),
                             {}, 0.0);
}

HamiltonianMatrix random_hamiltonian(std::mt19937_64& rng) {
    const int n = 1 + static_cast<int>(rng() % 2);
    const int d = 1 + static_cast<int>(rng() % 2);
    std::vector<int> lo, hi;
    for (int a = 0; a < n * d; ++a) {
        const int l = static_cast<int>(rng() % 7) - 3;
        lo.push_back(l);
        hi.push_back(l + static_cast<int>(rng() % (n * d > 2 ? 3 : 6)));
    }
    const auto r = Rectangle::from_bounds(n, d, lo, hi);
    const auto V = sample(DisorderSpec::uniform(-1, 1, 4.0), r.projection(), rng(), 0);
    return build_hamiltonian(r, V, {}, 0.3);
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("path-graph spectrum") {
    for (int l : {1, 2, 3, 17, 50, 301, 1000}) {
        const auto spec = eigensolve(free_chain(l));
        const auto oracle = testing::path_spectrum(l);
        REQUIRE(spec.size() == static_cast<std::size_t>(l));
        for (int j = 0; j < l; ++j)
            CHECK(std::abs(spec.eigenvalues[j] - oracle[static_cast<std::size_t>(j)]) <= 1e-10);
        CHECK(spec.residual_bound <= 1e-8 * 5);
        CHECK(spec.orthonormality_deviation <= 1e-10);
        const auto values_only = eigenvalues(free_chain(l));
        CHECK((values_only - spec.eigenvalues).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("one-by-one matrix") {
    const auto H = build_hamiltonian(Cube(point({0}, 1, 1), 0), testing::field_1d(0, {0.25}), {}, 0.0);
    const auto spec = eigensolve(H);
    CHECK(spec.eigenvalues[0] == 2.25);
    CHECK(std::abs(spec.eigenvectors(0, 0)) == 1.0);
}

TEST_CASE("tensor sum for two free particles") {
    const auto r = Rectangle::from_bounds(2, 1, {0, 0}, {5, 8});
    const auto H = build_hamiltonian(r, testing::field_1d(0, std::vector<double>(9, 0.0)), {}, 0.0);
    const auto a = testing::path_spectrum(6);
    const auto b = testing::path_spectrum(9);
    std::vector<double> sum;
    for (double x : a)
        for (double y : b)
            sum.push_back(x + y);
    std::sort(sum.begin(), sum.end());
    const auto ev = eigenvalues(H);
    for (std::size_t k = 0; k < sum.size(); ++k)
        CHECK(std::abs(ev[static_cast<Eigen::Index>(k)] - sum[k]) <= 1e-10);
}

TEST_CASE("dense limit") {
    CHECK_THROWS_AS(eigensolve(free_chain(20), 10), SizeLimitExceeded);
    CHECK_THROWS_AS(eigenvalues(free_chain(20), 10), SizeLimitExceeded);
}

TEST_CASE("Green function examples") {
    const auto H1 = build_hamiltonian(Cube(point({0}, 1, 1), 0), testing::field_1d(0, {0.5}), {}, 0.0);
    CHECK(green(H1, 1.0, point({0}, 1, 1), point({0}, 1, 1)) == doctest::Approx(1.0 / 1.5).epsilon(1e-15));

    const auto H3 = free_chain(3);
    // Hand inverse of tridiag(-1, 2, -1): (1/4) [[3,2,1],[2,4,2],[1,2,3]].
    CHECK(green(H3, 0.0, point({1}, 1, 1), point({1}, 1, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(green(H3, 0.0, point({0}, 1, 1), point({0}, 1, 1)) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(green(H3, 0.0, point({0}, 1, 1), point({2}, 1, 1)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(green(H3, 0.0, point({5}, 1, 1), point({0}, 1, 1)), std::out_of_range);
}

TEST_CASE("resolvent matches a dense inverse and stays symmetric") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> energy(-2.0, 14.0);
    int probes = 0;
    while (probes < 50) {
        const auto H = random_hamiltonian(rng);
        const double E = energy(rng);
        const auto ev = testing::sorted_eigenvalues(H.dense());
        double gap = 1e300;
        for (double e : ev)
            gap = std::min(gap, std::abs(e - E));
        if (gap < 1e-3)
            continue;
        ++probes;
        const Eigen::MatrixXd inv =
            (H.dense() - E * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(H.size()),
                                                       static_cast<Eigen::Index>(H.size())))
                .inverse();
        const Resolvent R(H, E);
        const std::size_t y = rng() % H.size();
        const std::size_t x = rng() % H.size();
        const auto col_y = R.column(y);
        const auto col_x = R.column(x);
        CHECK(R.residual(col_y, y) <= 1e-8);
        CHECK(std::abs(col_y[static_cast<Eigen::Index>(x)] - col_x[static_cast<Eigen::Index>(y)]) <= 1e-10);
        CHECK((col_y - inv.col(static_cast<Eigen::Index>(y))).cwiseAbs().maxCoeff() <=
              1e-9 * (1.0 + inv.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("resolvent with a wide band (two particles in d = 2)") {
    const Cube c(ConfigPoint::origin(2, 2), 2);  // 625 sites, half-bandwidth 125
    const auto V = sample(DisorderSpec::bernoulli(0, 1, 0.5, 5.0), Rectangle(c).projection(), 11, 0);
    const auto H = build_hamiltonian(c, V, {}, 1.0);
    REQUIRE(H.half_bandwidth() > 64);
    const double E = -0.64;  // below the spectrum, well conditioned
    const Eigen::MatrixXd A =
        H.dense() - E * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(H.size()),
                                                  static_cast<Eigen::Index>(H.size()));
    const Eigen::MatrixXd inv = A.inverse();
    const Resolvent R(H, E);
    for (std::size_t y : {std::size_t{0}, std::size_t{312}, std::size_t{624}}) {
        const auto col = R.column(y);
        CHECK(R.residual(col, y) <= 1e-12);
        CHECK((col - inv.col(static_cast<Eigen::Index>(y))).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("resolvent at an eigenvalue signals NearSpectrum") {
    const auto H = free_chain(5);
    const double E = 2.0;  // 2 - 2cos(3 pi / 6)
    CHECK_THROWS_AS(Resolvent(H, E), NearSpectrum);
}

TEST_CASE("gamma") {
    CHECK(gamma_rate(2.0, 256, 3, 3) == 3.0);
    CHECK(gamma_rate(1.0, 256, 1, 2) == 2.25);
    CHECK(gamma_rate(1.0, 1 << 30, 1, 1) > 1.0);
    CHECK(gamma_rate(1.0, 1 << 30, 1, 1) < 1.08);
    CHECK_THROWS_AS(gamma_rate(0.0, 4, 1, 1), std::domain_error);
    CHECK_THROWS_AS(gamma_rate(1.0, 0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(gamma_rate(1.0, 4, 3, 2), std::domain_error);
    CHECK(nonsingular_threshold(1.0, 0, 1, 1) == 1.0);
    CHECK(nonsingular_threshold(0.5, 4, 1, 1) == doctest::Approx(std::exp(-gamma_rate(0.5, 4, 1, 1) * 4)));
}

TEST_CASE("L = 0 classification is a scalar test") {
    const Cube c(point({0}, 1, 1), 0);
    const auto H = build_hamiltonian(c, testing::field_1d(0, {0.5}), {}, 0.0);
    // threshold 1: |1 / (2.5 - E)| <= 1 iff |2.5 - E| >= 1
    const auto far = classify_cube(c, H, 0.0, 0.5, 1);
    CHECK(far.nonsingular);
    CHECK(far.max_boundary_green == doctest::Approx(0.4));
    CHECK(far.spectral_gap == doctest::Approx(2.5));
    const auto near = classify_cube(c, H, 2.0, 0.5, 1);
    CHECK_FALSE(near.nonsingular);
    CHECK(near.max_boundary_green == doctest::Approx(2.0));
}

TEST_CASE("far below the spectrum every cube is nonsingular") {
    for (int L = 1; L <= 8; ++L) {
        const Cube c(point({0}, 1, 1), L);
        const auto V = sample(DisorderSpec::bernoulli(0, 1, 0.5, 8.0), Rectangle(c).projection(), 4, 0);
        const auto H = build_hamiltonian(c, V, {}, 0.0);
        const CubeClassifier classifier(c, H, 1.0, 1);
        const auto verdict = classifier.classify(classifier.eigenvalues()[0] - 1e6);
        CHECK(verdict.nonsingular);
        CHECK(verdict.spectral_gap > 0.0);
        CHECK(verdict.margin > 0.0);
    }
}

TEST_CASE("an eigenvalue is a resonance") {
    const Cube c(point({0}, 1, 1), 3);
    const auto V = sample(DisorderSpec::uniform(0, 1), Rectangle(c).projection(), 1, 0);
    const auto H = build_hamiltonian(c, V, {}, 0.0);
    const CubeClassifier classifier(c, H, 0.5, 1);
    for (Eigen::Index j = 0; j < classifier.eigenvalues().size(); ++j) {
        const auto v = classifier.classify(classifier.eigenvalues()[j]);
        CHECK_FALSE(v.nonsingular);
        CHECK(v.spectral_gap == 0.0);
    }
}

TEST_CASE("classifier coherence on random energies") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> energy(-1.0, 12.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Cube c(ConfigPoint::origin(1 + trial % 2, 1), 1 + trial % 4);
        const auto V = sample(DisorderSpec::bernoulli(0, 1, 0.5, 6.0), Rectangle(c).projection(), 9, trial);
        const CubeClassifier classifier(c, build_hamiltonian(c, V, {}, 1.0), 0.5, 2);
        for (int k = 0; k < 20; ++k) {
            const auto v = classifier.classify(energy(rng));
            if (v.nonsingular) {
                CHECK(v.spectral_gap > 0.0);
                CHECK(v.max_boundary_green <= v.threshold);
            }
            CHECK(v.nonsingular == (v.spectral_gap > 0.0 && v.max_boundary_green <= v.threshold));
        }
    }
}

TEST_CASE("classifier boundary maximum agrees with a dense inverse") {
    const Cube c(ConfigPoint::origin(2, 1), 3);
    const auto V = sample(DisorderSpec::uniform(0, 1, 3.0), Rectangle(c).projection(), 2, 0);
    const auto H = build_hamiltonian(c, V, {}, 1.0);
    const double E = 1.234;
    const auto v = classify_cube(c, H, E, 0.5, 2);
    const Eigen::MatrixXd inv =
        (H.dense() - E * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(H.size()),
                                                   static_cast<Eigen::Index>(H.size())))
            .inverse();
    const Rectangle r(c);
    const auto u = static_cast<Eigen::Index>(*r.index_of(c.center()));
    double worst = 0.0;
    for (const auto& b : internal_boundary(r))
        worst = std::max(worst, std::abs(inv(u, static_cast<Eigen::Index>(*r.index_of(b)))));
    CHECK(v.max_boundary_green == doctest::Approx(worst).epsilon(1e-9));
}

}  // TEST_SUITE
