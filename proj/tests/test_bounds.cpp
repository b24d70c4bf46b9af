#include <doctest.h>

#include <cmath>
#include <random>

#include "gcot/bounds.hpp"
#include "gcot/lp.hpp"
#include "helpers.hpp"

using namespace gcot;

TEST_CASE("bounded repulsive costs") {
    auto a = bound_bounded(3.0, 1.0, 1.0);
    CHECK(a.lo == doctest::Approx(3.0));
    CHECK(a.hi == doctest::Approx(3.0));
    CHECK(a.integers() == std::vector<int>{3});
    auto b = bound_bounded(3.0, 1.0, 2.0);
    CHECK(b.lo == doctest::Approx(1.5));
    CHECK(b.hi == doctest::Approx(5.0));
    CHECK(b.integers() == std::vector<int>{2, 3, 4, 5});
    auto c = bound_bounded(0.4, 1.0, 2.0);
    REQUIRE(c.exact);
    CHECK(*c.exact == std::vector<int>{0, 1});
    CHECK(c.integers() == std::vector<int>{0, 1});
}

TEST_CASE("triangle-type costs") {
    CHECK(riesz_triangle_constant(1.0) == 1.0);
    CHECK(riesz_triangle_constant(3.0) == 4.0);
    CHECK(riesz_triangle_constant(0.5) == 1.0);
    for (int N0 = 2; N0 <= 8; ++N0) {
        auto t = bound_triangle(N0, 1.0);
        CHECK(t.lo == doctest::Approx((N0 + 1) / 3.0));
        CHECK(t.hi == doctest::Approx(3.0 * N0 - 3.0));
    }
    auto t2 = bound_triangle(2.0, 1.0);
    CHECK(t2.integers() == std::vector<int>{1, 2, 3});
    // Z = M/(2m) reproduces the bounded-cost shape
    double m = 1.0, M = 3.0, Z = M / (2 * m);
    auto t3 = bound_triangle(4.5, Z);
    CHECK(t3.hi == doctest::Approx((M / m + 1.0) * 4.0));
}

TEST_CASE("coulomb bound") {
    CHECK(bound_coulomb(3.0).integers() == std::vector<int>{2, 3, 4});
    CHECK(bound_coulomb(2.0).integers() == std::vector<int>{2});
    CHECK(coulomb_pair_admissible(4, 3));
    CHECK(coulomb_pair_admissible(5, 3));   // (5-3)^2 = 4 <= 8
    CHECK_FALSE(coulomb_pair_admissible(7, 3));
    for (double mass = 2.0; mass <= 40.0; mass += 0.25)
        CHECK(bound_triangle(mass, 1.0).contains(bound_coulomb(mass)));
}

TEST_CASE("doubling bound") {
    auto d = bound_doubling(3.0, 1.0, 0.5, 1.0, 1.0, 2.0, 2.0);
    CHECK(d.bound.lo == 0.0);
    CHECK(d.bound.hi == doctest::Approx(1.0 + 3.0 * 2.0));
    auto e = bound_doubling(3.0, 1.0, 0.5, 0.5, 1.0, 2.0, 2.0);   // Riesz s=1: C = 1/2
    CHECK(e.bound.hi == doctest::Approx(1.0 + 3.0 * 8.0));
    CHECK(e.diagonal_estimate == doctest::Approx(12.0));
    auto k = riesz(1.0);
    double r = 2.0, kappa = 0.5, mass = 3.0;
    auto f = bound_doubling(mass, r, kappa, 0.5, 1.0, k.profile(2.0), k.profile(r), &k);
    REQUIRE(f.min_separation);
    CHECK(*f.min_separation == doctest::Approx((1 - kappa) * r / mass));
    CHECK_THROWS_AS(bound_doubling(3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("doubling inputs from a density") {
    DiscreteDensity rho(1, {{-1.0}, {0.0}, {1.0}}, {0.25, 0.5, 0.25});
    auto in = doubling_inputs(rho, 0.5, riesz(1.0));
    CHECK(in.kappa == doctest::Approx(0.5));   // the ball around the centre atom
    CHECK(in.R0 == doctest::Approx(0.0));      // outside mass 1/2 is allowed
    CHECK(in.M_of_r == doctest::Approx(2.0));
    CHECK(in.m_of_2R0 == kInf);
    auto wide = doubling_inputs(rho, 1.5, riesz(1.0));
    CHECK(wide.kappa == doctest::Approx(1.0));
}

TEST_CASE("charged cost") {
    auto k = riesz(1.0);
    CHECK(charged_cost({{0.0}}, {{1.0}}, k) == doctest::Approx(-1.0));
    std::vector<Point> X{{0.0}, {1.0}, {3.0}};
    CHECK(charged_cost(X, {}, k) == doctest::Approx(1.0 + 1.0 / 3.0 + 0.5));

    // W(X;Y) - W(X_I;Y_J) - W(X_I^c;Y_J^c) keeps only the terms between the two blocks
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> A(4), B(3);
        for (auto& p : A) p = {U(rng), U(rng)};
        for (auto& p : B) p = {U(rng), U(rng)};
        std::vector<Point> XI{A[0], A[1]}, XIc{A[2], A[3]}, YJ{B[0]}, YJc{B[1], B[2]};
        double lhs = charged_cost(A, B, k) - charged_cost(XI, YJ, k) - charged_cost(XIc, YJc, k);
        double rhs = 0.0;
        auto add = [&](const std::vector<Point>& P, const std::vector<Point>& Q, double sign) {
            for (const auto& p : P)
                for (const auto& q : Q) rhs += sign * k(p, q);
        };
        add(XI, XIc, 1.0);
        add(YJ, YJc, 1.0);
        add(XI, YJc, -1.0);
        add(XIc, YJ, -1.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("monotonicity of optimal plans") {
    DiscreteDensity pair(2, {{0.0, 0.0}, {1.0, 0.0}}, {1.0, 1.0});
    auto cost = pairwise_family(coulomb(), pair);
    auto lp = solve_lp(pair, 4, cost);
    auto rep = check_c_monotonicity(lp.plan, cost);
    CHECK(rep.ok());
    CHECK(rep.pairs >= 1);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point> pts;
        std::vector<double> ms;
        for (int i = 0; i < 5; ++i) {
            pts.push_back({U(rng) * 3.0, U(rng) * 3.0});
            ms.push_back(0.2 + 0.8 * U(rng));
        }
        DiscreteDensity rho(2, pts, ms);
        auto c = pairwise_family(coulomb(), rho);
        auto r = solve_lp(rho, 5, c);
        CHECK(check_c_monotonicity(r.plan, c).ok());
    }
}

TEST_CASE("vacuum next to a canonical block breaks monotonicity") {
    DiscreteDensity line(1, {{0.0}, {1.0}, {2.0}}, {0.5, 0.5, 0.5});
    auto cost = pairwise_family(coulomb(), line);
    GCPlan single(3, 3);
    single.add({1, 1, 1}, 1.0);
    CHECK(check_c_monotonicity(single, cost).ok());

    GCPlan swapped(3, 3);
    swapped.add({1, 1, 1}, 0.5);
    swapped.add({0, 0, 0}, 0.5);
    auto rep = check_c_monotonicity(swapped, cost);
    REQUIRE_FALSE(rep.ok());
    // moving the middle particle alone drops both of its unit interactions
    CHECK(rep.min_slack == doctest::Approx(-2.0));

    GCPlan two(3, 3);
    two.add({1, 0, 1}, 0.5);
    two.add({0, 0, 0}, 0.5);
    auto r2 = check_c_monotonicity(two, cost);
    CHECK(r2.min_slack == doctest::Approx(-0.5));   // strictly negative: the split costs -c2
}

TEST_CASE("pairwise fast path agrees with direct evaluation") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        auto rho = testing_util::line_density({1.0, 1.0, 1.0, 1.0, 1.0}, 0.7);
        auto fast = pairwise_family(exponential_kernel(1.0), rho);
        CostFamily slow = fast;
        slow.pair.clear();
        auto plan = testing_util::random_plan(rng, 5, trial < 3 ? 5 : 9, 6);
        MonotoneOptions opts;
        opts.samples = 300;
        auto a = check_c_monotonicity(plan, fast, opts);
        auto b = check_c_monotonicity(plan, slow, opts);
        CHECK(a.pairs == b.pairs);
        CHECK(a.splits == b.splits);
        CHECK(a.violations.size() == b.violations.size());
        CHECK(a.min_slack == doctest::Approx(b.min_slack).epsilon(1e-10));
    }
}

TEST_CASE("LP support lies inside the coulomb bound") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Point> pts;
        std::vector<double> ms;
        const int m = 7;
        while (static_cast<int>(pts.size()) < m) {
            Point p{2.0 * U(rng), 2.0 * U(rng)};
            bool ok = true;
            for (const auto& q : pts) ok = ok && distance(p, q) > 0.2;
            if (ok) pts.push_back(p);
        }
        double target = 1.05 + 4.9 * U(rng);
        for (int i = 0; i < m; ++i) ms.push_back(0.1 + U(rng));
        double s = 0.0;
        for (double v : ms) s += v;
        for (auto& v : ms) v = std::min(1.0, v * target / s);
        DiscreteDensity rho(2, pts, ms);
        auto cost = pairwise_family(coulomb(), rho);
        auto r = solve_lp(rho, m, cost);
        auto b = bound_coulomb(rho.total_mass());
        for (int n : plan_support(r.plan)) CHECK(b.admits(n));
    }
}
