#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcot/core.hpp"
#include "gcot/costs.hpp"

namespace gcot {

enum class BoundTheorem { Bounded, Triangle, Doubling, Coulomb };
std::string to_string(BoundTheorem t);

struct SupportBound {
    double lo = 0.0;
    double hi = 0.0;
    BoundTheorem theorem = BoundTheorem::Bounded;
    // set when the theorem pins the support down exactly (e.g. mass <= 1)
    std::optional<std::vector<int>> exact;

    std::vector<int> integers() const;   // admissible particle numbers
    bool admits(int n) const;
    bool contains(const SupportBound& other) const;   // as integer sets
};

SupportBound bound_bounded(double mass, double m_lo, double M_hi);
// Z = max(1, 2^{s-1}) for Riesz kernels
double riesz_triangle_constant(double s);
SupportBound bound_triangle(double mass, double Z);
SupportBound bound_coulomb(double mass);
// pairwise consequence of the monotonicity inequality for 1/r
bool coulomb_pair_admissible(int N, int K);

struct DoublingBound {
    SupportBound bound;
    double diagonal_estimate = 0.0;           // upper bound on c2 over the support of the two-agent distribution
    std::optional<double> min_separation;     // when the kernel profile can be inverted
};
DoublingBound bound_doubling(double mass, double r, double kappa, double C, double R0, double m_of_2R0,
                             double M_of_r, const Kernel* kernel = nullptr);

struct DoublingInputs {
    double kappa = 0.0;   // largest mass of an open ball of radius r around a support point
    double R0 = 0.0;      // smallest radius about the barycenter leaving mass <= 1/2 outside
    double m_of_2R0 = 0.0;
    double M_of_r = 0.0;
};
// For radial decreasing kernels m(r) = M(r) = w(r).
DoublingInputs doubling_inputs(const DiscreteDensity& rho, double r, const Kernel& kernel);

struct MonotoneOptions {
    std::size_t split_cap = 12;      // enumerate every split when N + K is at most this
    std::size_t samples = 2000;      // random splits per pair beyond the cap, and max pairs examined
    std::uint64_t seed = 20240601;
    double tol = 1e-9;
    double support_tol = 1e-12;
};

struct MonotoneViolation {
    Occupation X, Y;
    std::vector<int> I, J;           // particle indices moved into the first new configuration
    double slack = 0.0;              // lhs - rhs (negative)
};

struct MonotoneReport {
    std::size_t pairs = 0;
    std::size_t splits = 0;
    double min_slack = INFINITY;
    std::vector<MonotoneViolation> violations;
    bool ok() const { return violations.empty(); }
};
MonotoneReport check_c_monotonicity(const GCPlan& plan, const CostFamily& cost, const MonotoneOptions& opts = {});

// pair cost of X plus pair cost of Y minus the cross interaction
double charged_cost(const std::vector<Point>& X, const std::vector<Point>& Y, const Kernel& c2);

}  // namespace gcot
