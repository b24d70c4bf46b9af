#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gcot/core.hpp"

namespace gcot {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance(const Point& a, const Point& b);

// Symmetric two-body interaction. Radial kernels also expose their profile
// w(r) (w(0) is the diagonal value) and, when decreasing, its inverse.
struct Kernel {
    std::string name;
    std::function<double(const Point&, const Point&)> fn;
    std::function<double(double)> profile;          // empty for non-radial kernels
    std::function<double(double)> inverse_profile;  // r with profile(r) = v, when invertible
    bool nonnegative = false;                       // c2 >= 0 everywhere
    bool decreasing = false;                        // radial and nonincreasing in r
    double min_dim_exclusive = 0.0;                 // kernel requires b > dim (Lennard-Jones)

    double operator()(const Point& a, const Point& b) const { return fn(a, b); }
    bool radial() const { return static_cast<bool>(profile); }
};

Kernel radial_kernel(std::string name, std::function<double(double)> w);
// 1/|x-y|^s for s > 0, -log|x-y| for s = 0, -|x-y|^{-s} for s < 0
Kernel riesz(double s);
// Newtonian kernel of R^d: |x|^{2-d} for d >= 3, -log|x| for d = 2, -|x| for d = 1
Kernel coulomb(int d = 3);
// A/r^a - B/r^b with A, B > 0 and a > b
Kernel lennard_jones(double A, double B, double a, double b);
Kernel log_cost();
Kernel constant_kernel(double c);
Kernel exponential_kernel(double a = 1.0);   // exp(-a r)
Kernel harmonic_kernel(double k = 1.0);      // k |x-y|^2

// name[:key=val,...], e.g. "riesz:s=1" or "lj:A=1,B=1,a=12,b=6"
Kernel parse_kernel(const std::string& spec);

struct Stability {
    double A = 0.0;
    double B = 0.0;
};

// Family c = (c_n) evaluated on occupations of a fixed support.
struct CostFamily {
    std::string name;
    double c0 = 0.0;
    std::function<double(const Occupation&)> eval;
    std::optional<Stability> stability;
    bool monotone = false;
    // pairwise costs keep their site matrix; diagonal entries are self-pair costs
    std::vector<std::vector<double>> pair;
    std::optional<Kernel> kernel;

    double operator()(const Occupation& occ) const { return eval(occ); }
    bool pairwise() const { return !pair.empty(); }
};

double pair_energy(const std::vector<std::vector<double>>& pair, const Occupation& occ);

CostFamily pairwise_family(const Kernel& c2, const DiscreteDensity& rho);
CostFamily center_of_mass_family(std::function<double(const Point&)> h,
                                 std::function<Point(const Point&)> grad_h,
                                 const DiscreteDensity& rho);
// Constant cost per particle number: c_n = values[n], +inf beyond the table.
CostFamily number_cost_family(std::vector<double> values);

// double integral of c2 against rho x rho, diagonal included
double stability_probe(const Kernel& c2, const DiscreteDensity& rho);

// value of the constant kernel c on a plan: (c/2)(sum n^2 lambda_n - sum n lambda_n)
double constant_cost_on_plan(double c, const GCPlan& plan);

}  // namespace gcot
