#include <doctest.h>

#include <cmath>
#include <random>

#include "gcot/costs.hpp"
#include "helpers.hpp"

using namespace gcot;

TEST_CASE("kernel values") {
    Point a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(coulomb()(a, b) == doctest::Approx(0.2));
    CHECK(coulomb(2)(a, b) == doctest::Approx(-std::log(5.0)));
    CHECK(coulomb(1)(a, b) == doctest::Approx(-5.0));
    CHECK(coulomb(4)(a, b) == doctest::Approx(1.0 / 25.0));
    CHECK(riesz(2.0)(a, b) == doctest::Approx(1.0 / 25.0));
    CHECK(std::isinf(riesz(1.0)(a, a)));
    CHECK(exponential_kernel(2.0)(a, b) == doctest::Approx(std::exp(-10.0)));
    CHECK(harmonic_kernel(3.0)(a, b) == doctest::Approx(75.0));
    CHECK(constant_kernel(1.5)(a, b) == doctest::Approx(1.5));
    auto lj = lennard_jones(1, 1, 12, 6);
    CHECK(lj(a, Point{1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(coulomb().inverse_profile(4.0) == doctest::Approx(0.25));
}

TEST_CASE("cost spec grammar") {
    CHECK(parse_kernel("riesz:s=1")(Point{0.0}, Point{2.0}) == doctest::Approx(0.5));
    CHECK(parse_kernel("inv:r")(Point{0.0}, Point{4.0}) == doctest::Approx(0.25));
    CHECK(parse_kernel("lj:A=1,B=1,a=12,b=6")(Point{0.0}, Point{1.0}) == doctest::Approx(0.0));
    CHECK(parse_kernel("exp:a=1")(Point{0.0}, Point{1.0}) == doctest::Approx(std::exp(-1.0)));
    CHECK(parse_kernel("const:c=2")(Point{0.0}, Point{1.0}) == doctest::Approx(2.0));
    CHECK(parse_kernel("coulomb:d=2")(Point{0.0}, Point{std::exp(1.0)}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(parse_kernel("nope"), Error);
    CHECK_THROWS_AS(parse_kernel("riesz"), Error);
    CHECK_THROWS_AS(parse_kernel("riesz:s=abc"), Error);
}

TEST_CASE("pair energy equals the sum over particle pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::size_t m = 4;
    std::vector<std::vector<double>> pair(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) pair[i][j] = pair[j][i] = U(rng);
    for (int trial = 0; trial < 50; ++trial) {
        Occupation o(m);
        std::vector<std::size_t> parts;
        for (std::size_t i = 0; i < m; ++i) {
            o[i] = static_cast<int>(U(rng) * 4);
            for (int k = 0; k < o[i]; ++k) parts.push_back(i);
        }
        double brute = 0.0;
        for (std::size_t a = 0; a < parts.size(); ++a)
            for (std::size_t b = a + 1; b < parts.size(); ++b) brute += pair[parts[a]][parts[b]];
        CHECK(pair_energy(pair, o) == doctest::Approx(brute).epsilon(1e-13));
    }
}

TEST_CASE("pairwise family metadata") {
    auto rho = testing_util::line_density({0.5, 0.5, 0.5});
    auto f = pairwise_family(coulomb(), rho);
    CHECK(f.pairwise());
    CHECK(f.monotone);
    REQUIRE(f.stability.has_value());
    CHECK(f({1, 0, 1}) == doctest::Approx(0.5));
    CHECK(std::isinf(f({2, 0, 0})));
    auto g = pairwise_family(coulomb(1), rho);
    CHECK_FALSE(g.monotone);
    // Lennard-Jones needs b > dim
    DiscreteDensity rho7(7, {Point(7, 0.0), Point(7, 1.0)}, {0.5, 0.5});
    CHECK_THROWS_AS(pairwise_family(lennard_jones(1, 1, 12, 6), rho7), Error);
}

TEST_CASE("center of mass family and number costs") {
    auto rho = testing_util::line_density({1.0, 1.0});
    auto h = [](const Point& x) { return x[0] * x[0]; };
    auto gh = [](const Point& x) { return Point{2.0 * x[0]}; };
    auto f = center_of_mass_family(h, gh, rho);
    // X = first moment of rho = 1, so c0 = h(1) - 1 * h'(1) = -1
    CHECK(f.c0 == doctest::Approx(-1.0));
    CHECK(f({0, 0}) == doctest::Approx(-1.0));
    CHECK(f({0, 1}) == doctest::Approx(1.0));
    CHECK(f({1, 2}) == doctest::Approx(4.0));
    auto nc = number_cost_family({0.0, 0.0, 1.0});
    CHECK(nc({1, 1}) == 1.0);
    CHECK(std::isinf(nc({2, 1})));
}

TEST_CASE("constant kernel on plans") {
    GCPlan p(1, 3);
    p.add({2}, 0.5);
    p.add({3}, 0.5);
    // 0.5 * 1 + 0.5 * 3
    CHECK(constant_cost_on_plan(1.0, p) == doctest::Approx(2.0));
}
