#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gcot/monge1d.hpp"

using namespace gcot;

TEST_CASE("grid density basics") {
    GridDensity1D rho({0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 2.0});
    CHECK(rho.total_mass() == doctest::Approx(3.0));
    CHECK(rho.cdf(0.5) == doctest::Approx(0.5));
    CHECK(rho.cdf(1.5) == doctest::Approx(1.0));
    CHECK(rho.quantile(1.0) == doctest::Approx(1.0));   // leftmost point of the plateau
    CHECK(rho.quantile(2.0) == doctest::Approx(2.5));
    CHECK(rho.mass_between(0.5, 2.5) == doctest::Approx(1.5));
    CHECK(rho.barycenter(2.0, 3.0) == doctest::Approx(2.5));
    CHECK_THROWS_AS(GridDensity1D({0.0, 1.0}, {-1.0}), Error);
    CHECK_THROWS_AS(GridDensity1D({1.0, 0.0}, {1.0}), Error);
}

TEST_CASE("plan shapes for uniform densities") {
    auto p2 = build_monge_plan(uniform_density(0.0, 2.0));
    CHECK(p2.n == 2);
    CHECK(p2.eta == 0.0);
    CHECK(p2.support() == std::vector<int>{2});

    auto p15 = build_monge_plan(uniform_density(0.0, 1.5));
    CHECK(p15.n == 1);
    CHECK(p15.eta == doctest::Approx(0.5));
    CHECK(p15.support() == std::vector<int>{1, 2});

    auto p23 = build_monge_plan(uniform_density(0.0, 2.3));
    CHECK(p23.n == 2);
    CHECK(p23.eta == doctest::Approx(0.3));
    REQUIRE(p23.cuts.size() == 4);
    std::vector<double> expect{0.3, 1.0, 1.3, 2.0};
    for (int i = 0; i < 4; ++i) CHECK(p23.cuts[i] == doctest::Approx(expect[i]));
    CHECK(p23.support() == std::vector<int>{2, 3});
    double total = 0.0;
    for (const auto& b : p23.blocks) total += b.weight();
    CHECK(total == doctest::Approx(1.0));

    CHECK_THROWS_AS(build_monge_plan(GridDensity1D({0.0, 1.0}, {0.0})), Error);
}

TEST_CASE("closed-form costs") {
    auto p2 = build_monge_plan(uniform_density(0.0, 2.0));
    auto c = monge_cost(p2, riesz(1.0));
    CHECK(c.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.error < 1e-9);
    CHECK(monge_cost(p2, exponential_kernel(1.0)).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(monge_cost(build_monge_plan(uniform_density(0.0, 1.5)), riesz(1.0)).value ==
          doctest::Approx(0.5).epsilon(1e-10));
}

namespace {

GridDensity1D random_density(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pieces(1, 4);
    std::uniform_real_distribution<double> width(0.3, 1.5), height(0.2, 2.0), mass(0.5, 4.0), coin(0.0, 1.0);
    int k = pieces(rng);
    std::vector<double> b{0.0}, d;
    for (int j = 0; j < k; ++j) {
        b.push_back(b.back() + width(rng));
        bool hole = j > 0 && j + 1 < k && coin(rng) < 0.2;
        d.push_back(hole ? 0.0 : height(rng));
    }
    GridDensity1D raw(b, d);
    double scale = mass(rng) / raw.total_mass();
    for (auto& v : d) v *= scale;
    return GridDensity1D(b, d);
}

}  // namespace

TEST_CASE("cut masses alternate and T moves exactly one unit of mass") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto rho = random_density(rng);
        auto plan = build_monge_plan(rho);
        const double M = rho.total_mass();
        CHECK(plan.n == static_cast<int>(std::floor(M)));
        CHECK(plan.eta == doctest::Approx(M - plan.n));
        std::vector<double> edges{rho.breakpoints().front()};
        edges.insert(edges.end(), plan.cuts.begin(), plan.cuts.end());
        edges.push_back(rho.breakpoints().back());
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            double want = (i % 2 == 0) ? plan.eta : 1.0 - plan.eta;
            CHECK(std::abs(rho.mass_between(edges[i], edges[i + 1]) - want) < 1e-10);
        }
        double prev = -kInf;
        for (int s = 0; M >= 1.0 && s <= 50; ++s) {
            double u = (M - 1.0) * s / 50.0;
            double x = rho.quantile(u);
            double tx = plan.T(x);
            CHECK(tx >= prev - 1e-12);
            prev = tx;
            CHECK(std::abs(rho.mass_between(x, tx) - 1.0) < 1e-10);
        }
        auto sup = plan.support();
        CHECK(sup.front() == plan.n);
    }
}

TEST_CASE("interlacing inequality") {
    auto w = riesz(1.0);
    auto r = interlacing_check({0.0, 2.0}, {1.0, 3.0}, w);
    CHECK(r.holds);
    CHECK(r.lhs == doctest::Approx(r.rhs));
    auto s = interlacing_check({0.0, 1.0}, {2.0, 3.0}, w);
    CHECK(s.holds);
    CHECK(s.lhs > s.rhs);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 5.0);
    std::uniform_int_distribution<int> n(1, 4);
    for (const auto& k : {riesz(1.0), exponential_kernel(1.0)}) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> Y(n(rng)), Z;
            for (auto& y : Y) y = U(rng);
            Z.resize(Y.size() + (trial % 2));
            for (auto& z : Z) z = U(rng);
            CHECK(interlacing_check(Y, Z, k).holds);
        }
    }
}

TEST_CASE("discretization keeps the mass") {
    GridDensity1D rho({0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 2.0});
    auto at = discretize(rho, 6);
    CHECK(at.size() == 4);   // two empty cells dropped
    CHECK(at.total_mass() == doctest::Approx(3.0));
}

// Spreading each atom of the LP optimum over its cell gives a continuous plan
// with the same density, whose cost is at most the LP plan's cost with every
// pair charged at the closest distance between the two cells.
TEST_CASE("monge cost is below the spread LP optimum") {
    std::mt19937_64 rng(2024);
    int used = 0;
    const int cells = 16;
    for (int trial = 0; trial < 10; ++trial) {
        auto rho = random_density(rng);
        auto plan = build_monge_plan(rho);
        for (const auto& w : {riesz(1.0), exponential_kernel(1.0)}) {
            auto rep = crosscheck_vs_lp(rho, w, cells, plan.n + 2);
            CHECK(rep.support_ok);
            const double a = rho.breakpoints().front(), b = rho.breakpoints().back(), h = (b - a) / cells;
            const auto& atoms = rep.atoms;
            std::vector<int> cell(atoms.size());
            for (std::size_t i = 0; i < atoms.size(); ++i)
                cell[i] = std::min(cells - 1, static_cast<int>(std::floor((atoms.point(i)[0] - a) / h)));
            std::vector<std::vector<double>> upper(atoms.size(), std::vector<double>(atoms.size()));
            for (std::size_t i = 0; i < atoms.size(); ++i)
                for (std::size_t j = 0; j < atoms.size(); ++j) {
                    double gap = std::max(0.0, (std::abs(cell[i] - cell[j]) - 1) * h);
                    upper[i][j] = w.profile(gap);
                }
            double bound = 0.0;
            for (const auto& [occ, wt] : rep.lp_result.plan) bound += wt * pair_energy(upper, occ);
            if (!std::isfinite(bound)) continue;
            ++used;
            auto mc = monge_cost(plan, w);
            CHECK(mc.value <= bound + mc.error + 1e-9);
        }
    }
    CHECK(used >= 10);
}
