#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "gcot/lp.hpp"
#include "helpers.hpp"

using namespace gcot;

namespace {

// Minimum over all basic feasible solutions, found by trying every column
// subset of size rank(A). Independent of the simplex code.
double vertex_oracle(const LPInstance& inst) {
    const std::size_t rows = inst.rhs.size(), n = inst.columns.size();
    auto column = [&](std::size_t k, std::size_t r) {
        return r + 1 == rows ? 1.0 : static_cast<double>(inst.columns[k][r]);
    };
    // rank of A
    std::vector<std::vector<double>> A(rows, std::vector<double>(n));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < n; ++k) A[r][k] = column(k, r);
    std::size_t rank = 0;
    {
        auto M = A;
        for (std::size_t c = 0; c < n && rank < rows; ++c) {
            std::size_t piv = rank;
            for (std::size_t r = rank; r < rows; ++r)
                if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
            if (std::abs(M[piv][c]) < 1e-12) continue;
            std::swap(M[piv], M[rank]);
            for (std::size_t r = 0; r < rows; ++r) {
                if (r == rank) continue;
                double f = M[r][c] / M[rank][c];
                for (std::size_t cc = 0; cc < n; ++cc) M[r][cc] -= f * M[rank][cc];
            }
            ++rank;
        }
    }
    double best = INFINITY;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (pick.size() == rank) {
            std::vector<std::vector<double>> M(rows, std::vector<double>(rank + 1));
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < rank; ++c) M[r][c] = A[r][pick[c]];
                M[r][rank] = inst.rhs[r];
            }
            std::size_t row = 0;
            for (std::size_t c = 0; c < rank; ++c) {
                std::size_t piv = row;
                for (std::size_t r = row; r < rows; ++r)
                    if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
                if (std::abs(M[piv][c]) < 1e-12) return;   // singular subset
                std::swap(M[piv], M[row]);
                for (std::size_t r = 0; r < rows; ++r) {
                    if (r == row) continue;
                    double f = M[r][c] / M[row][c];
                    for (std::size_t cc = 0; cc <= rank; ++cc) M[r][cc] -= f * M[row][cc];
                }
                ++row;
            }
            for (std::size_t r = rank; r < rows; ++r)
                if (std::abs(M[r][rank]) > 1e-9) return;   // inconsistent
            double cost = 0.0;
            for (std::size_t c = 0; c < rank; ++c) {
                double x = M[c][rank] / M[c][c];
                if (x < -1e-12) return;
                cost += x * inst.costs[pick[c]];
            }
            best = std::min(best, cost);
            return;
        }
        for (std::size_t k = start; k < n; ++k) {
            pick.push_back(k);
            rec(k + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return best;
}

DiscreteDensity random_density(std::mt19937_64& rng, std::size_t m, double mass) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < m; ++i) {
        pts.push_back({U(rng), U(rng)});
        w.push_back(0.2 + U(rng));
    }
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x *= mass / s;
    return DiscreteDensity(2, pts, w);
}

double constant_formula(double mass) {
    double t = mass - std::floor(mass);
    return mass * (mass - 1.0) / 2.0 - t * (t - 1.0) / 2.0;
}

}  // namespace

TEST_CASE("simplex agrees with vertex enumeration") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int compared = 0;
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t m = 2 + trial % 2;
        double mass = 0.5 + 2.0 * U(rng);
        auto rho = random_density(rng, m, mass);
        Kernel k = trial % 3 == 0 ? exponential_kernel(1.0) : (trial % 3 == 1 ? coulomb() : harmonic_kernel(1.0));
        auto cost = pairwise_family(k, rho);
        int nmax = 3;
        auto inst = build_instance(rho, nmax, cost);
        double oracle = vertex_oracle(inst);
        if (!std::isfinite(oracle)) {
            CHECK_THROWS_AS(solve_lp(rho, nmax, cost), Error);
            continue;
        }
        auto res = solve_lp(rho, nmax, cost);
        CHECK(res.value == doctest::Approx(oracle).epsilon(1e-9).scale(1.0));
        CHECK(std::abs(res.certificate.gap) <= 1e-9);
        CHECK(res.certificate.max_violation <= 1e-9);
        auto rep = validate_plan(res.plan, rho);
        CHECK(rep.ok);
        ++compared;
    }
    CHECK(compared >= 20);
}

TEST_CASE("constant cost closed form, double and rational") {
    for (double mass : {0.5, 1.0, 2.0, 2.5, 3.0, 3.7}) {
        int m = static_cast<int>(std::ceil(mass)) + 1;
        auto rho = testing_util::line_density(std::vector<double>(m, mass / m));
        auto cost = pairwise_family(constant_kernel(1.0), rho);
        int nmax = static_cast<int>(std::ceil(mass)) + 1;
        auto d = solve_lp(rho, nmax, cost);
        CHECK(d.value == doctest::Approx(constant_formula(mass)).epsilon(1e-12).scale(1.0));
        LPOptions ex;
        ex.exact = true;
        ex.exact_cap = 100000;
        auto q = solve_lp(rho, nmax, cost, ex);
        CHECK(q.exact);
        CHECK(std::abs(q.value - constant_formula(mass)) <= 1e-12);
        // support sits on the two integers around the mass
        for (int n : plan_support(d.plan)) CHECK(std::abs(n - mass) < 1.0);
    }
}

TEST_CASE("zero or one agent") {
    DiscreteDensity rho(1, {{0.0}, {0.3}, {1.0}}, {0.1, 0.1, 0.2});
    auto res = solve_lp(rho, 3, pairwise_family(exponential_kernel(1.0), rho));
    CHECK(std::abs(res.value) <= 1e-12);
    CHECK(res.plan.weight({0, 0, 0}) == doctest::Approx(0.6));
    CHECK(res.plan.weight({1, 0, 0}) == doctest::Approx(0.1));
    CHECK(res.plan.weight({0, 0, 1}) == doctest::Approx(0.2));
}

TEST_CASE("coulomb pair of unit atoms") {
    DiscreteDensity rho(2, {{0.0, 0.0}, {1.0, 0.0}}, {1.0, 1.0});
    auto cost = pairwise_family(coulomb(), rho);
    auto res = solve_lp(rho, 4, cost);
    CHECK(res.value == doctest::Approx(1.0));
    CHECK(plan_support(res.plan) == std::vector<int>{2});
    auto can = solve_canonical(rho, 2, cost);
    CHECK(can.value == doctest::Approx(1.0));
    CHECK(solve_dual(rho, 4, cost).dual_value == doctest::Approx(1.0));
    CHECK(solve_primal(rho, 4, cost).value == doctest::Approx(1.0));
}

TEST_CASE("error kinds") {
    DiscreteDensity heavy(1, {{0.0}}, {1.5});
    auto cost = pairwise_family(coulomb(), heavy);
    try {
        solve_lp(heavy, 3, cost);
        FAIL("expected infeasible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Infeasible);
        CHECK(e.exit_code() == 2);
    }
    CHECK_FALSE(lp_feasible(heavy, 3, cost));
    auto rho = testing_util::line_density({0.5, 0.5, 0.5});
    auto c2 = pairwise_family(exponential_kernel(1.0), rho);
    try {
        solve_lp(rho.scaled(4.0), 2, c2);
        FAIL("expected infeasible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Infeasible);
    }
    LPOptions small;
    small.max_columns = 10;
    try {
        solve_lp(rho, 4, c2, small);
        FAIL("expected size cap");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SizeCap);
        CHECK(e.exit_code() == 3);
    }
    LPOptions ex;
    ex.exact = true;
    ex.exact_cap = 5;
    CHECK_THROWS_AS(solve_lp(rho, 4, c2, ex), Error);
    CHECK_THROWS_AS(solve_canonical(rho, 2, c2), Error);
}

TEST_CASE("truncation sweep is nonincreasing and stabilizes") {
    auto rho = testing_util::line_density({0.7, 0.7, 0.7});
    auto cost = pairwise_family(exponential_kernel(0.5), rho);
    auto sw = truncation_sweep(rho, cost, 3, 7);
    CHECK(sw.nonincreasing);
    for (std::size_t k = 1; k < sw.values.size(); ++k) CHECK(sw.values[k].second <= sw.values[k - 1].second + 1e-9);
}

TEST_CASE("optimal blocks are canonical optima of their own densities") {
    auto rho = testing_util::line_density({0.6, 0.8, 0.9}, 0.7);
    auto cost = pairwise_family(coulomb(), rho);
    auto res = solve_lp(rho, 3, cost);
    auto hull = convex_hull_check(res.plan, rho, cost);
    CHECK(hull.ok);
}

TEST_CASE("threaded cost evaluation is deterministic") {
    std::mt19937_64 rng(5);
    auto rho = random_density(rng, 9, 3.3);
    auto cost = pairwise_family(exponential_kernel(1.0), rho);
    LPOptions one, four;
    four.threads = 4;
    auto a = solve_lp(rho, 6, cost, one);
    auto b = solve_lp(rho, 6, cost, four);
    CHECK(a.columns >= 4096);
    CHECK(a.value == b.value);
    CHECK(a.plan.entries() == b.plan.entries());
}
