#include <doctest.h>

#include <cmath>
#include <sstream>

#include "anderson/hamiltonian.hpp"
#include "support.hpp"

using namespace anderson;
using testing::point;

TEST_SUITE("hamiltonian") {

TEST_CASE("interaction energy") {
    InteractionSpec U;  // C = 1, c = 1, tau = 0.5
    CHECK(interaction_energy(U, point({3}, 1, 1)) == 0.0);
    CHECK(interaction_energy(U, point({0, 4}, 2, 1)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));

    U.tau = 1.0;
    const double expected = std::exp(-1.0) + std::exp(-2.0) + std::exp(-1.0);
    CHECK(interaction_energy(U, point({0, 1, 2}, 3, 1)) == doctest::Approx(expected).epsilon(1e-14));

    // Brute-force pair sum for d = 2 with sup-norm distances.
    U.tau = 0.7;
    U.C = 2.5;
    const auto x = point({0, 0, 3, -1, 1, 5}, 3, 2);
    double brute = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const int r = std::max(std::abs(x[2 * i] - x[2 * j]), std::abs(x[2 * i + 1] - x[2 * j + 1]));
            brute += 2.5 * std::exp(-std::pow(r, 0.7));
        }
    CHECK(interaction_energy(U, x) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("interaction bound validator") {
    InteractionSpec U;
    CHECK(validate_interaction_bound(U, 50).max_ratio == doctest::Approx(1.0));
    InteractionSpec truncated = U;
    truncated.kind = InteractionKind::FiniteRange;
    truncated.range = 3;
    const auto t = validate_interaction_bound(truncated, 50);
    CHECK(t.holds());
    CHECK(t.max_ratio <= 1.0);
    CHECK(truncated.kernel(4) == 0.0);
    CHECK(truncated.kernel(3) == U.kernel(3));

    InteractionSpec halved = U;
    halved.C = 0.5;
    CHECK(validate_interaction_bound(halved, 20, DecayBound{1.0, 1.0, 0.5}).max_ratio ==
          doctest::Approx(0.5));
    InteractionSpec doubled = U;
    doubled.C = 2.0;
    CHECK_FALSE(validate_interaction_bound(doubled, 20, DecayBound{1.0, 1.0, 0.5}).holds());
    CHECK_THROWS_AS(validate_interaction_bound(U, -1), std::invalid_argument);

    InteractionSpec bad = U;
    bad.tau = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("free three-site chain") {
    const Cube c(point({0}, 1, 1), 1);
    const auto H = build_hamiltonian(c, testing::field_1d(-1, {0, 0, 0}), {}, 0.0);
    Eigen::MatrixXd expected(3, 3);
    expected << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    CHECK(H.dense() == expected);
    CHECK(H.half_bandwidth() == 1);

    Eigen::VectorXd v(3);
    v << 0, 1, 0;
    Eigen::VectorXd Hv(3);
    Hv << -1, 2, -1;
    CHECK(H.apply(v) == Hv);
    CHECK(H.apply(Eigen::VectorXd::Zero(3)) == Eigen::VectorXd::Zero(3));
    CHECK_THROWS_AS(H.apply(Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("single-site matrices") {
    const auto H1 = build_hamiltonian(Cube(point({0}, 1, 1), 0), testing::field_1d(0, {0.37}), {}, 0.0);
    CHECK(H1.size() == 1);
    CHECK(H1.entry(0, 0) == 2.37);

    InteractionSpec U;
    U.C = 1.7;
    const auto H2 = build_hamiltonian(Cube(point({0, 0}, 2, 1), 0), testing::field_1d(0, {0.37}), U, 1.0);
    CHECK(H2.entry(0, 0) == doctest::Approx(4 + 2 * 0.37 + 1.7).epsilon(1e-15));
}

TEST_CASE("row structure and symmetry on a two-particle, two-dimensional cube") {
    const Cube c(ConfigPoint::origin(2, 2), 1);
    const auto proj = Rectangle(c).projection();
    const auto V = sample(DisorderSpec::uniform(0, 1, 2.0), proj, 3, 0);
    const auto H = build_hamiltonian(c, V, {}, 0.5);
    const Eigen::MatrixXd D = H.dense();
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const auto all = sites(Rectangle(c));
    for (std::size_t i = 0; i < H.size(); ++i) {
        const auto nb = H.neighbours(i);
        CHECK(nb.size() <= 8);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (std::size_t j : nb) {
            CHECK(D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == -1.0);
            CHECK(l1_norm(all[i], all[j]) == 1);
        }
        // off-diagonal entries are -1 exactly at l1 neighbours
        for (std::size_t j = 0; j < H.size(); ++j)
            if (j != i)
                CHECK((l1_norm(all[i], all[j]) == 1) ==
                      (D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == -1.0));
        const double diag = 8.0 + multi_particle_potential(V, all[i]) +
                            0.5 * interaction_energy(InteractionSpec{}, all[i]);
        CHECK(H.diagonal()[i] == doctest::Approx(diag).epsilon(1e-15));
    }
    // the center is interior: all 2nd = 8 neighbours present
    CHECK(H.neighbours(*Rectangle(c).index_of(c.center())).size() == 8);
}

TEST_CASE("apply agrees with the dense matrix") {
    const auto r = Rectangle::from_bounds(2, 1, {0, 0}, {5, 6});
    const auto V = sample(DisorderSpec::bernoulli(0, 1, 0.5, 3.0), r.projection(), 8, 1);
    const auto H = build_hamiltonian(r, V, {}, 1.0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    Eigen::VectorXd v(static_cast<Eigen::Index>(H.size()));
    for (auto& t : v) t = g(rng);
    const Eigen::MatrixXd D = H.dense();
    const Eigen::VectorXd twice = H.apply(H.apply(v));
    CHECK((twice - D * (D * v)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Gershgorin enclosure") {
    const Cube c(ConfigPoint::origin(2, 1), 4);
    const auto V = sample(DisorderSpec::uniform(-1, 1, 5.0), Rectangle(c).projection(), 1, 0);
    const auto H = build_hamiltonian(c, V, {}, 2.0);
    const auto ev = testing::sorted_eigenvalues(H.dense());
    const auto [lo, hi] = std::minmax_element(H.diagonal().begin(), H.diagonal().end());
    CHECK(ev.front() >= *lo - 4.0 - 1e-12);
    CHECK(ev.back() <= *hi + 4.0 + 1e-12);
    CHECK(std::max(std::abs(ev.front()), std::abs(ev.back())) <= H.gershgorin_norm() + 1e-12);
}

TEST_CASE("coverage gap is rejected") {
    const Cube c(point({0}, 1, 1), 2);
    CHECK_THROWS_AS(build_hamiltonian(c, testing::field_1d(-1, {0, 0, 0}), {}, 0.0), std::out_of_range);
}

TEST_CASE("coordinate list dump") {
    const auto H = build_hamiltonian(Cube(point({0}, 1, 1), 1), testing::field_1d(-1, {0.5, 0, 0}), {}, 0.0);
    std::ostringstream os;
    H.write_coordinate_list(os);
    CHECK(os.str() == "0 0 2.5\n0 1 -1\n1 0 -1\n1 1 2\n1 2 -1\n2 1 -1\n2 2 2\n");
}

}  // TEST_SUITE
