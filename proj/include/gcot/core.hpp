#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcot {

enum class ErrorKind { Usage = 1, Infeasible = 2, SizeCap = 3, NonConvergence = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

using Point = std::vector<double>;
// occ[i] = number of particles sitting on atom i
using Occupation = std::vector<int>;

int particle_count(const Occupation& occ);

class DiscreteDensity {
public:
    DiscreteDensity() = default;
    DiscreteDensity(int dim, std::vector<Point> points, std::vector<double> masses);

    int dim() const { return dim_; }
    std::size_t size() const { return masses_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const Point& point(std::size_t i) const { return points_[i]; }
    const std::vector<double>& masses() const { return masses_; }
    double mass(std::size_t i) const { return masses_[i]; }
    double total_mass() const;

    DiscreteDensity with_masses(std::vector<double> masses) const;
    DiscreteDensity scaled(double factor) const;
    DiscreteDensity restricted(const std::vector<std::size_t>& kept) const;
    Point barycenter() const;

private:
    int dim_ = 1;
    std::vector<Point> points_;
    std::vector<double> masses_;
};

// Probability on occupations. Entries are kept in lexicographic order of the
// occupation vector so iteration order never depends on insertion order.
class GCPlan {
public:
    GCPlan() = default;
    GCPlan(std::size_t sites, int nmax) : sites_(sites), nmax_(nmax) {}

    void add(const Occupation& occ, double w);
    void set(const Occupation& occ, double w);
    double weight(const Occupation& occ) const;

    std::size_t sites() const { return sites_; }
    int nmax() const { return nmax_; }
    void set_nmax(int n) { nmax_ = n; }
    std::size_t size() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    double total_weight() const;
    void normalize();

    const std::map<Occupation, double>& entries() const { return w_; }
    auto begin() const { return w_.begin(); }
    auto end() const { return w_.end(); }

private:
    std::size_t sites_ = 0;
    int nmax_ = 0;
    std::map<Occupation, double> w_;
};

std::vector<double> plan_density(const GCPlan& plan);
// lambda[n] = total weight of occupations with n particles, n = 0..nmax
std::vector<double> plan_mass_distribution(const GCPlan& plan);
// particle numbers whose block weight exceeds tol
std::vector<int> plan_support(const GCPlan& plan, double tol = 1e-9);
// cost of a plan: sum of w(o) * eval(o)
template <class F>
double plan_expectation(const GCPlan& plan, F&& eval) {
    double s = 0.0;
    for (const auto& [occ, w] : plan)
        if (w != 0.0) s += w * eval(occ);
    return s;
}

// All occupations with at most nmax particles, ordered by particle number and
// then lexicographically decreasing. Sites flagged false in `allowed` stay empty.
std::vector<Occupation> enumerate_occupations(std::size_t sites, int nmax,
                                              const std::vector<bool>& allowed = {});
// Number of occupations enumerate_occupations would produce, saturating at cap+1.
std::size_t count_occupations(std::size_t sites, int nmax, std::size_t cap);

// log of exp(-|rho|) prod rho_i^{o_i} / o_i!  (-inf when an empty atom is occupied)
double poisson_log_weight(const DiscreteDensity& rho, const Occupation& occ);

struct PoissonPlan {
    GCPlan plan;
    double tail = 0.0;   // Poisson mass beyond nmax, discarded before renormalizing
};
PoissonPlan poisson_plan(const DiscreteDensity& rho, int nmax);
// P(Poisson(mean) > nmax)
double poisson_tail(double mean, int nmax);

struct LocalizationResult {
    GCPlan plan;
    std::vector<std::size_t> kept;
};
LocalizationResult localize(const GCPlan& plan, const std::vector<std::size_t>& kept);

// disjoint union tagged by an extra trailing coordinate (1 or 2)
DiscreteDensity two_species_density(const DiscreteDensity& rho1, const DiscreteDensity& rho2);

struct PlanReport {
    bool is_probability = false;
    double normalization_residual = 0.0;
    double density_residual = 0.0;
    double min_weight = 0.0;
    int support_lo = 0;
    int support_hi = -1;
    bool ok = false;
    std::string message;
};
PlanReport validate_plan(const GCPlan& plan, const DiscreteDensity& rho, double tol = 1e-9,
                         double norm_tol = 1e-12);

}  // namespace gcot
