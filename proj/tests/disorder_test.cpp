#include <doctest.h>

#include <numeric>

#include "anderson/disorder.hpp"
#include "support.hpp"

using namespace anderson;

namespace {

std::vector<Site> line_sites(int lo, int hi) {
    std::vector<Site> out;
    for (int t = lo; t <= hi; ++t)
        out.push_back({t});
    return out;
}

}  // namespace

TEST_SUITE("disorder") {

TEST_CASE("spec validation") {
    CHECK_NOTHROW(DisorderSpec::bernoulli(0, 1, 0.5).validate());
    CHECK_NOTHROW(DisorderSpec::uniform(-2, 2).validate());
    CHECK_THROWS_AS(DisorderSpec::finite_discrete({3}, {1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DisorderSpec::finite_discrete({0, 1}, {0.5, 0.6}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DisorderSpec::finite_discrete({0, 1}, {1.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DisorderSpec::bernoulli(1, 0, 0.5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DisorderSpec::uniform(1, 1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DisorderSpec::bernoulli(0, 1, 0.5, -1).validate(), std::invalid_argument);
    // Probabilities summing to 1 up to rounding are accepted.
    CHECK_NOTHROW(DisorderSpec::finite_discrete({0, 1, 2}, {0.1, 0.2, 0.7}).validate());
}

TEST_CASE("assumption P report") {
    const auto b = validate_assumption_P(DisorderSpec::bernoulli(0, 1, 0.5));
    CHECK(b.passed());
    CHECK(b.M == 1.0);
    CHECK(b.support_points == 2);
    CHECK(b.contains_zero);
    CHECK(b.moment_condition);

    const auto u = validate_assumption_P(DisorderSpec::uniform(-2, 2));
    CHECK(u.passed());
    CHECK(u.M == 2.0);
    CHECK(u.support_points == 0);

    const auto f = validate_assumption_P(DisorderSpec::finite_discrete({3}, {1.0}));
    CHECK_FALSE(f.passed());

    const auto shifted = validate_assumption_P(DisorderSpec::bernoulli(1, 2, 0.5));
    CHECK(shifted.passed());
    CHECK_FALSE(shifted.contains_zero);
    CHECK_FALSE(shifted.warnings.empty());

    CHECK_FALSE(validate_assumption_P(DisorderSpec::bernoulli(0, 1, 0.5, 0.0)).passed());
}

TEST_CASE("sample is a pure function of (seed, index, site)") {
    const auto spec = DisorderSpec::uniform(-1, 1, 3.0);
    const auto a = sample(spec, line_sites(-5, 5), 42, 7);
    const auto b = sample(spec, line_sites(0, 20), 42, 7);
    for (int t = 0; t <= 5; ++t) {
        const Site s{t};
        CHECK(a.at(s) == b.at(s));
    }
    // Enumeration order of the region does not matter.
    auto reversed = line_sites(-5, 5);
    std::reverse(reversed.begin(), reversed.end());
    const auto c = sample(spec, reversed, 42, 7);
    CHECK(c.values() == a.values());
    // Different index or seed gives a different field.
    CHECK(sample(spec, line_sites(-5, 5), 42, 8).values() != a.values());
    CHECK(sample(spec, line_sites(-5, 5), 43, 7).values() != a.values());
    REQUIRE(a.provenance().has_value());
    CHECK(a.provenance()->master_seed == 42);
    CHECK(a.provenance()->realization_index == 7);
    for (const auto& [site, v] : a.values()) {
        CHECK(v >= -3.0);
        CHECK(v <= 3.0);
    }
    CHECK_THROWS_AS(a.at(Site{99}), std::out_of_range);
    CHECK_THROWS_AS(sample(spec, std::vector<Site>{}, 0, 0), std::invalid_argument);
}

TEST_CASE("Bernoulli law of large numbers") {
    const auto r = sample(DisorderSpec::bernoulli(0, 1, 0.5), line_sites(0, 99999), 1, 0);
    double sum = 0.0;
    for (const auto& [site, v] : r.values())
        sum += v;
    CHECK(std::abs(sum / 1e5 - 0.5) < 0.01);
}

TEST_CASE("finite discrete frequencies pass chi-squared at the 1% level") {
    const std::vector<double> values{-1, 0, 2, 5};
    const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
    const auto r = sample(DisorderSpec::finite_discrete(values, probs), line_sites(0, 99999), 5, 3);
    std::vector<double> counts(values.size(), 0.0);
    for (const auto& [site, v] : r.values()) {
        const auto it = std::find(values.begin(), values.end(), v);
        REQUIRE(it != values.end());
        counts[static_cast<std::size_t>(it - values.begin())] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double expected = 1e5 * probs[k];
        chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
    }
    CHECK(chi2 < 11.345);  // chi-squared, 3 degrees of freedom, 99th percentile
}

TEST_CASE("uniform variates are spread over [0, 1)") {
    const int site[] = {4, -2};
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double u = site_uniform(9, i, site);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo < 1e-3);
    CHECK(hi > 1 - 1e-3);
    CHECK(std::abs(sum / 20000 - 0.5) < 0.01);
}

TEST_CASE("multi-particle potential reads one shared field") {
    SiteField f;
    f.emplace(Site{0}, 0.3);
    f.emplace(Site{5}, 0.7);
    const DisorderRealization r(f);
    CHECK(multi_particle_potential(r, testing::point({0, 5}, 2, 1)) == doctest::Approx(1.0));
    CHECK(multi_particle_potential(r, testing::point({0, 0}, 2, 1)) == doctest::Approx(0.6));
    CHECK(multi_particle_potential(r, testing::point({5}, 1, 1)) == 0.7);
    CHECK_THROWS_AS(multi_particle_potential(r, testing::point({1}, 1, 1)), std::out_of_range);
}

TEST_CASE("quantile maps onto the scaled support") {
    const auto b = DisorderSpec::bernoulli(0, 1, 0.25, 8.0);
    CHECK(b.quantile(0.1) == 8.0);
    CHECK(b.quantile(0.3) == 0.0);
    const auto u = DisorderSpec::uniform(-1, 1, 2.0);
    CHECK(u.quantile(0.5) == doctest::Approx(0.0));
    CHECK(u.quantile(0.0) == -2.0);
    CHECK(u.support_min() == -2.0);
    CHECK(u.support_max() == 2.0);
}

}  // TEST_SUITE
