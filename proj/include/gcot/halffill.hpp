#pragma once

#include <string>
#include <vector>

#include "gcot/core.hpp"
#include "gcot/costs.hpp"

namespace gcot {

// Sites carrying Bernoulli marginals; at half filling every fill is 1/2.
struct HalfFillInstance {
    std::vector<Point> points;
    std::vector<double> fill;
    Kernel c2;
    std::vector<std::vector<double>> pair;  // c2 on distinct sites

    HalfFillInstance(std::vector<Point> pts, Kernel kernel, std::vector<double> fills = {});
    std::size_t size() const { return points.size(); }
    DiscreteDensity density() const;
};

using IndexSet = std::vector<int>;

// sum of c2 over unordered pairs inside `set`
double set_energy(const std::vector<std::vector<double>>& pair, const std::vector<char>& in_set, bool inside);
// 1/4 of the ordered-pair sums inside I and inside its complement
double extreme_point_cost(const HalfFillInstance& inst, const IndexSet& I);

struct ExtremePointValue {
    IndexSet I;
    double value = 0.0;
};

// One representative per unordered pair {I, I^c}, sizes lo..floor(m/2), in
// increasing size and then lexicographic order. When |I| = m/2 the
// representative contains site 0.
std::vector<IndexSet> extreme_point_sets(std::size_t m, std::size_t lo);
std::vector<ExtremePointValue> all_extreme_points(const HalfFillInstance& inst);

struct HalfFillResult {
    double value = 0.0;
    std::vector<IndexSet> argmins;
    bool unique = false;
    double margin = 0.0;             // second best minus best
    double best_half = 0.0;          // best value among |I| = m/2 (canonical) sets
    std::size_t candidates = 0;
    GCPlan plan;                     // 1/2 on 1_I and 1/2 on 1_{I^c}
};
HalfFillResult solve_half_filling(const HalfFillInstance& inst, double unique_margin = 1e-9);

// Six sites: rhombus vertices (+-t, 0), (0, +-sqrt(1-t^2)), outer points (+-(t+1), 0).
std::vector<Point> diamond_geometry(double t);

struct TCurve {
    std::vector<IndexSet> sets;
    std::vector<double> t;
    std::vector<std::vector<double>> values;   // values[row][set]
};
TCurve tcurve(const std::vector<double>& t_grid, const Kernel& c2);
std::string tcurve_csv(const TCurve& curve);

// Scan positions of one site over a grid; true where the half-filling optimum is
// grand-canonical (|I| != m/2).
struct RegionScan {
    std::vector<double> xs, ys;
    std::vector<std::vector<char>> grand_canonical;   // [iy][ix]
    std::vector<std::vector<char>> valid;             // false when the point collides with a fixed one
};
RegionScan region_scan(const std::vector<Point>& base, int moving, const Kernel& c2, double x0, double x1,
                       double y0, double y1, int nx, int ny);

// y^{(k)}_{6i+j} = l_k X_i + y^{(k-1)}_j with X the base configuration.
std::vector<Point> multiscale_points(const std::vector<Point>& base, int k, const std::vector<double>& scales);

struct MultiscaleLevel {
    int k = 1;
    double scale = 1.0;
    IndexSet occupied;                 // optimal I at this level
    std::vector<int> cluster_state;    // per cluster: 0 keeps the previous set, 1 takes its complement
    double value = 0.0;                // extreme-point cost of the optimum
    double runner_up = 0.0;
    double leading_gap = 0.0;          // first-order (cluster monopole) gap to the runner-up
    double correction_bound = 0.0;     // bound on the neglected higher-order terms
    bool scale_ok = true;              // leading gap exceeds the correction bound for every rival
    bool monopole_agrees = true;       // the leading-order costs pick the same cluster states
};

struct MultiscaleResult {
    int n_minus = 0, n_plus = 0;
    std::vector<MultiscaleLevel> levels;
    std::vector<Point> points;
    bool scale_ok = true;
};
MultiscaleResult multiscale_support(const std::vector<Point>& base, int k, const std::vector<double>& scales,
                                    const Kernel& c2);

}  // namespace gcot
