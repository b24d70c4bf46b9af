#pragma once

#include <cstddef>
#include <vector>

#include "gcot/core.hpp"
#include "gcot/costs.hpp"

namespace gcot {

struct LPOptions {
    std::size_t max_columns = 5'000'000;
    bool exact = false;               // rational arithmetic (gmp)
    std::size_t exact_cap = 2000;     // exact mode refuses larger instances
    double pivot_tol = 1e-10;
    double optimality_tol = 1e-11;
    double feasibility_tol = 1e-9;
    int degenerate_switch = 50;       // consecutive degenerate pivots before Bland's rule
    int refactor_every = 64;
    int threads = 1;
};

// Columns are occupations with finite cost; rows are the m density rows and
// the normalization row.
struct LPInstance {
    std::size_t sites = 0;
    int nmax = 0;
    std::vector<Occupation> columns;
    std::vector<double> costs;
    std::vector<double> rhs;          // (rho_1, ..., rho_m, 1)
    std::size_t dropped_infinite = 0;
};

std::vector<Occupation> enumerate_configurations(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                                                 const LPOptions& opts = {});
LPInstance build_instance(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts = {});

struct DualCertificate {
    double beta = 0.0;
    std::vector<double> phi;
    double dual_value = 0.0;
    double gap = 0.0;              // primal - dual
    double max_violation = 0.0;    // max over columns of beta + <o, phi> - c(o)
    double max_slackness = 0.0;    // max |reduced cost| over positively weighted columns
};

struct LPResult {
    double value = 0.0;
    GCPlan plan;
    DualCertificate certificate;
    std::size_t columns = 0;
    int iterations = 0;
    bool exact = false;
};

// Optimal basic solution of the truncated problem and its dual certificate.
LPResult solve_lp(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts = {});
LPResult solve_instance(const LPInstance& inst, const CostFamily& cost, const LPOptions& opts = {});

struct PrimalSolution {
    double value = 0.0;
    GCPlan plan;
};
PrimalSolution solve_primal(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts = {});
DualCertificate solve_dual(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts = {});

// Problem restricted to exactly N particles; rho must have total mass N.
LPResult solve_canonical(const DiscreteDensity& rho, int N, const CostFamily& cost, const LPOptions& opts = {});

// Phase-one feasibility of the truncated problem.
bool lp_feasible(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts = {});

struct TruncationSweep {
    std::vector<std::pair<int, double>> values;
    bool nonincreasing = true;
    bool stabilized = false;
    int stabilized_at = -1;       // first N whose value equals the next one within tol
};
TruncationSweep truncation_sweep(const DiscreteDensity& rho, const CostFamily& cost, int n_from, int n_to,
                                 double tol = 1e-9, const LPOptions& opts = {});

struct HullBlock {
    int n = 0;
    double weight = 0.0;
    double block_cost = 0.0;        // P_n(c_n) / P_n(Omega^n)
    double canonical_value = 0.0;   // C_n of the normalized block density
    bool ok = false;
};
struct HullReport {
    std::vector<HullBlock> blocks;
    bool ok = true;
};
HullReport convex_hull_check(const GCPlan& plan, const DiscreteDensity& rho, const CostFamily& cost,
                             double tol = 1e-7, double weight_tol = 1e-12, const LPOptions& opts = {});

}  // namespace gcot
