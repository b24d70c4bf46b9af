#include <doctest.h>

#include <cmath>
#include <random>

#include "gcot/core.hpp"
#include "helpers.hpp"

using namespace gcot;
using testing_util::binomial;

TEST_CASE("density validation") {
    CHECK_THROWS_AS(DiscreteDensity(1, {{0.0}, {0.0}}, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(DiscreteDensity(2, {{0.0}}, {0.5}), Error);
    CHECK_THROWS_AS(DiscreteDensity(1, {{0.0}}, {-1.0}), Error);
    CHECK_THROWS_AS(DiscreteDensity(1, {{0.0}}, {0.5, 0.5}), Error);
    DiscreteDensity rho(1, {{0.0}, {2.0}}, {1.0, 3.0});
    CHECK(rho.total_mass() == doctest::Approx(4.0));
    CHECK(rho.barycenter()[0] == doctest::Approx(1.5));
    CHECK(rho.scaled(0.5).total_mass() == doctest::Approx(2.0));
    try {
        DiscreteDensity(1, {{0.0}, {0.0}}, {0.5, 0.5});
    } catch (const Error& e) {
        CHECK(e.exit_code() == 1);
    }
}

TEST_CASE("occupation enumeration matches binomial counts") {
    for (std::size_t m = 1; m <= 5; ++m)
        for (int n = 0; n <= 5; ++n) {
            auto occ = enumerate_occupations(m, n);
            CHECK(occ.size() == static_cast<std::size_t>(binomial(n + static_cast<int>(m), static_cast<int>(m))));
            CHECK(count_occupations(m, n, 1'000'000) == occ.size());
            for (std::size_t k = 1; k < occ.size(); ++k) CHECK(particle_count(occ[k - 1]) <= particle_count(occ[k]));
        }
    auto masked = enumerate_occupations(3, 2, {true, false, true});
    for (const auto& o : masked) CHECK(o[1] == 0);
    CHECK(masked.size() == 6);
    CHECK(count_occupations(40, 40, 1000) == 1001);
}

TEST_CASE("plan density and mass distribution") {
    GCPlan p(2, 3);
    p.add({0, 0}, 0.25);
    p.add({1, 2}, 0.5);
    p.add({1, 0}, 0.25);
    auto d = plan_density(p);
    CHECK(d[0] == doctest::Approx(0.75));
    CHECK(d[1] == doctest::Approx(1.0));
    auto l = plan_mass_distribution(p);
    CHECK(l[0] == doctest::Approx(0.25));
    CHECK(l[1] == doctest::Approx(0.25));
    CHECK(l[3] == doctest::Approx(0.5));
    CHECK(plan_support(p) == std::vector<int>{0, 1, 3});
    DiscreteDensity rho(1, {{0.0}, {1.0}}, {0.75, 1.0});
    auto rep = validate_plan(p, rho);
    CHECK(rep.ok);
    CHECK(rep.support_lo == 0);
    CHECK(rep.support_hi == 3);
    auto bad = validate_plan(p, rho.with_masses({0.7, 1.0}));
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(validate_plan(GCPlan(2, 3), rho).ok);
}

TEST_CASE("poisson weights against closed form") {
    DiscreteDensity rho(1, {{0.0}, {1.0}}, {0.3, 0.9});
    // g(2,1) = e^{-1.2} 0.3^2/2 * 0.9
    double expect = std::exp(-1.2) * 0.09 / 2.0 * 0.9;
    CHECK(std::exp(poisson_log_weight(rho, {2, 1})) == doctest::Approx(expect).epsilon(1e-14));
    // tail by direct summation of the pmf
    for (double mean : {0.5, 1.2, 3.0})
        for (int nmax : {0, 2, 5, 10}) {
            double tail = 0.0, term = std::exp(-mean);
            for (int n = 0; n < 200; ++n) {
                if (n > nmax) tail += term;
                term *= mean / (n + 1);
            }
            CHECK(poisson_tail(mean, nmax) == doctest::Approx(tail).epsilon(1e-9));
        }
    auto pp = poisson_plan(rho, 20);
    CHECK(pp.plan.total_weight() == doctest::Approx(1.0));
    auto d = plan_density(pp.plan);
    CHECK(d[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(d[1] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(pp.tail < 1e-9);
}

TEST_CASE("localization keeps block structure") {
    GCPlan p(3, 3);
    p.add({1, 1, 1}, 0.5);
    p.add({0, 1, 0}, 0.5);
    auto loc = localize(p, {0, 2});
    CHECK(loc.plan.weight({1, 1}) == doctest::Approx(0.5));
    CHECK(loc.plan.weight({0, 0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(localize(p, {5}), Error);
}

TEST_CASE("two species tagging") {
    DiscreteDensity a(1, {{0.0}}, {1.0}), b(1, {{0.0}, {1.0}}, {0.5, 0.5});
    auto ab = two_species_density(a, b);
    CHECK(ab.dim() == 2);
    CHECK(ab.size() == 3);
    CHECK(ab.point(0)[1] == 1.0);
    CHECK(ab.point(1)[1] == 2.0);
    CHECK(ab.total_mass() == doctest::Approx(2.0));
}
