#pragma once

#include <string>
#include <vector>

#include "gcot/core.hpp"
#include "gcot/costs.hpp"
#include "gcot/lp.hpp"

namespace gcot {

// sum_o w(o) log(w(o)/ref(o)); +inf when w charges an occupation ref does not
double relative_entropy(const GCPlan& plan, const GCPlan& ref);
// Relative entropy against the (untruncated) Poisson state of rho, evaluated
// with the exact occupation weights g(o) = e^{-|rho|} prod rho_i^{o_i}/o_i!.
double relative_entropy_poisson(const GCPlan& plan, const DiscreteDensity& rho);
// S = -sum_o w(o) log(w(o) prod_i o_i!)
double plan_entropy(const GCPlan& plan);
// L1 distance to the Poisson state, mass the plan cannot reach included
double tv_to_poisson(const GCPlan& plan, const DiscreteDensity& rho);

struct EntropyReport {
    double S = 0.0;
    double H = 0.0;
    double growth_lhs = 0.0;        // sum_n log(n!) lambda_n
    double growth_rhs = 0.0;        // H + log 2 + |rho| log|rho|
    double entropy_bound = 0.0;     // sum rho_i - sum rho_i log rho_i
    double decomposition_residual = 0.0;   // |S - (entropy_bound - H)|
    bool growth_ok = false;
    bool max_entropy_ok = false;
};
EntropyReport entropy_report(const GCPlan& plan, const DiscreteDensity& rho, double tol = 1e-10);
bool entropy_growth_check(const GCPlan& plan, const DiscreteDensity& rho);
bool max_entropy_check(const GCPlan& plan, const DiscreteDensity& rho, double tol = 1e-10);

// Finite-cost occupations with at most nmax particles on the charged atoms,
// with log g(o) and c(o) cached.
struct GibbsColumns {
    std::vector<Occupation> occ;
    std::vector<double> log_ref;
    std::vector<double> cost;
    std::size_t sites = 0;
    int nmax = 0;
};
GibbsColumns gibbs_columns(const DiscreteDensity& rho, int nmax, const CostFamily& cost);

struct GibbsSolution {
    std::vector<double> psi;
    double T = 1.0;
    double logZ = 0.0;
    double Z = 1.0;
    double F = 0.0;                 // -T log Z
    GCPlan plan;
    std::vector<double> density;    // density of the Gibbs state
    double density_residual = 0.0;  // sup |rho_psi - rho|
    double cost = 0.0;              // P(c)
    double H = 0.0;                 // relative entropy to the Poisson state
    double primal = 0.0;            // P(c) + T H
    double dual = 0.0;              // sum psi rho - T log Z
    int iterations = 0;
    std::string method;
};

double log_partition_function(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                              const std::vector<double>& psi, double T);
double partition_function(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                          const std::vector<double>& psi, double T);
GibbsSolution gibbs_plan(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const std::vector<double>& psi,
                         double T);
GibbsSolution gibbs_plan(const GibbsColumns& cols, const DiscreteDensity& rho, const std::vector<double>& psi,
                         double T);

double dual_objective(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const std::vector<double>& psi,
                      double T);
// rho - rho_psi
std::vector<double> dual_gradient(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                                  const std::vector<double>& psi, double T);

enum class EntropicMethod { Newton, FixedPoint };

struct EntropicOptions {
    double tol = 1e-8;              // sup-norm density residual
    int max_iter = 100000;
    EntropicMethod method = EntropicMethod::Newton;
    std::vector<double> psi0;       // warm start
};
GibbsSolution solve_entropic(const DiscreteDensity& rho, int nmax, const CostFamily& cost, double T,
                             const EntropicOptions& opts = {});

struct SweepRow {
    double T = 0.0;
    double F = 0.0;
    double H = 0.0;
    double TV = 0.0;
    double cost = 0.0;
    double residual = 0.0;
    bool pinsker = false;
};
struct TemperatureSweep {
    std::vector<SweepRow> rows;        // increasing T
    bool nondecreasing = true;
    bool concave = true;
    bool pinsker = true;
    double max_slope_increase = 0.0;   // largest increase of consecutive difference quotients
    std::string csv() const;
};
TemperatureSweep temperature_sweep(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                                   const std::vector<double>& temps, const EntropicOptions& opts = {},
                                   double tol = 1e-9);
// "a:b:log:n" or "a:b:lin:n" or a comma separated list
std::vector<double> parse_temperatures(const std::string& spec);

// Upper-triangular two-agent distribution: (i, j), i < j, holds sum w o_i o_j;
// the diagonal holds sum w o_i (o_i - 1) / 2.
std::vector<std::vector<double>> two_agent_distribution(const GCPlan& plan);

struct BlockApproximation {
    GCPlan plan;
    std::vector<std::vector<int>> cells;   // integer cell label per atom
    std::vector<int> cell_of;              // atom -> cell index
    double cost_before = 0.0;
    double cost_after = 0.0;
    double cost_gap = 0.0;
    double gap_bound = 0.0;                // 2 sum osc(z, z') rho2(C_z x C_z')
    double relative_entropy = 0.0;         // of the new plan against the Poisson state
    double density_residual = 0.0;
};
// Cells z + [-h/2, h/2)^d, z in hZ^d; inside each cell the particles are
// redistributed independently according to rho.
BlockApproximation block_approximation(const GCPlan& plan, const DiscreteDensity& rho, double h,
                                       const Kernel& c2);

// rho admits a dual potential only if (1 + eps) rho is still reachable
bool dual_potential_probe(const DiscreteDensity& rho, int nmax, const CostFamily& cost, double eps = 1e-6);

struct CriticalEta {
    double eta = 0.0;     // sup of feasible multipliers found
    double lo = 0.0, hi = 0.0;
    int steps = 0;
};
// Bisection on the largest eta with a finite-cost plan for eta * rho. Only the
// finiteness pattern of the cost matters here, so it is reused for every eta.
CriticalEta critical_eta(const DiscreteDensity& rho, int nmax, const CostFamily& cost, double tol = 1e-9);

}  // namespace gcot
