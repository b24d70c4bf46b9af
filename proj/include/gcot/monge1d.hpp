#pragma once

#include <vector>

#include "gcot/core.hpp"
#include "gcot/costs.hpp"
#include "gcot/lp.hpp"

namespace gcot {

// Piecewise-constant density on the line: densities[j] on [breakpoints[j], breakpoints[j+1]).
class GridDensity1D {
public:
    GridDensity1D() = default;
    GridDensity1D(std::vector<double> breakpoints, std::vector<double> densities);

    const std::vector<double>& breakpoints() const { return b_; }
    const std::vector<double>& densities() const { return d_; }
    double total_mass() const { return cum_.back(); }
    double cdf(double x) const;
    // leftmost x with cdf(x) = u, for u in [0, mass]
    double quantile(double u) const;
    // cumulative mass at each breakpoint
    const std::vector<double>& cumulative() const { return cum_; }
    // mass and barycenter of [x0, x1)
    double mass_between(double x0, double x1) const;
    double barycenter(double x0, double x1) const;

private:
    std::vector<double> b_, d_, cum_;
};

GridDensity1D uniform_density(double a, double b, double height = 1.0);

// One block of the plan: for u in (u_lo, u_hi) the configuration
// {Q(u), Q(u+1), ..., Q(u+particles-1)}, each u carrying weight du.
struct MongeBlock {
    int particles = 0;
    double u_lo = 0.0, u_hi = 0.0;
    double weight() const { return u_hi - u_lo; }
};

struct MongePlan1D {
    GridDensity1D rho;
    int n = 0;
    double eta = 0.0;
    std::vector<double> cuts;          // x_1 .. x_{2n}
    std::vector<MongeBlock> blocks;    // n-particle block first

    // increasing map with rho((x, T(x))) = 1, defined while cdf(x) <= mass - 1
    double T(double x) const;
    std::vector<double> configuration(double u, int particles) const;
    std::vector<int> support() const;
};

MongePlan1D build_monge_plan(const GridDensity1D& rho);

struct MongeCost {
    double value = 0.0;
    double error = 0.0;       // |refined - coarse| of the composite rule
    int panels = 0;
};
MongeCost monge_cost(const MongePlan1D& plan, const Kernel& w, double quad_tol = 1e-12);

// cells equal-width atoms at the barycenter of each cell (empty cells dropped)
DiscreteDensity discretize(const GridDensity1D& rho, int cells);

struct CrosscheckReport {
    double monge = 0.0;
    double lp = 0.0;
    double gap = 0.0;                   // |lp - monge|
    std::vector<int> lp_support;
    std::vector<int> expected_support;  // {n, n+1} or {n}
    bool support_ok = false;            // lp_support is inside expected_support
    LPResult lp_result;
    DiscreteDensity atoms;
};
CrosscheckReport crosscheck_vs_lp(const GridDensity1D& rho, const Kernel& w, int cells, int nmax,
                                  const LPOptions& opts = {});

struct InterlacingResult {
    double lhs = 0.0;   // c(Y) + c(Z)
    double rhs = 0.0;   // c(odd points) + c(even points) of the merged, sorted list
    bool holds = false;
};
InterlacingResult interlacing_check(const std::vector<double>& Y, const std::vector<double>& Z, const Kernel& w,
                                    double tol = 1e-12);

}  // namespace gcot
