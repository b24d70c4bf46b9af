#include "gcot/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gcot {

int particle_count(const Occupation& occ) {
    return std::accumulate(occ.begin(), occ.end(), 0);
}

DiscreteDensity::DiscreteDensity(int dim, std::vector<Point> points, std::vector<double> masses)
    : dim_(dim), points_(std::move(points)), masses_(std::move(masses)) {
    if (dim_ <= 0) throw Error(ErrorKind::Usage, "density: dim must be positive");
    if (points_.size() != masses_.size())
        throw Error(ErrorKind::Usage, "density: points and masses differ in length");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (static_cast<int>(points_[i].size()) != dim_)
            throw Error(ErrorKind::Usage, "density: point " + std::to_string(i) + " has wrong dimension");
        for (double x : points_[i])
            if (!std::isfinite(x)) throw Error(ErrorKind::Usage, "density: non-finite coordinate");
        if (!(masses_[i] >= 0.0) || !std::isfinite(masses_[i]))
            throw Error(ErrorKind::Usage, "density: masses must be finite and nonnegative");
    }
    std::set<Point> seen;
    for (const auto& p : points_)
        if (!seen.insert(p).second) throw Error(ErrorKind::Usage, "density: duplicate support point");
}

double DiscreteDensity::total_mass() const {
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

DiscreteDensity DiscreteDensity::with_masses(std::vector<double> masses) const {
    return DiscreteDensity(dim_, points_, std::move(masses));
}

DiscreteDensity DiscreteDensity::scaled(double factor) const {
    std::vector<double> m = masses_;
    for (double& x : m) x *= factor;
    return with_masses(std::move(m));
}

DiscreteDensity DiscreteDensity::restricted(const std::vector<std::size_t>& kept) const {
    std::vector<Point> p;
    std::vector<double> m;
    for (std::size_t i : kept) {
        p.push_back(points_.at(i));
        m.push_back(masses_.at(i));
    }
    return DiscreteDensity(dim_, std::move(p), std::move(m));
}

Point DiscreteDensity::barycenter() const {
    Point c(dim_, 0.0);
    double tot = total_mass();
    if (tot <= 0.0) return c;
    for (std::size_t i = 0; i < size(); ++i)
        for (int k = 0; k < dim_; ++k) c[k] += masses_[i] * points_[i][k];
    for (double& x : c) x /= tot;
    return c;
}

void GCPlan::add(const Occupation& occ, double w) {
    if (occ.size() != sites_) throw Error(ErrorKind::Usage, "plan: occupation length mismatch");
    w_[occ] += w;
}

void GCPlan::set(const Occupation& occ, double w) {
    if (occ.size() != sites_) throw Error(ErrorKind::Usage, "plan: occupation length mismatch");
    w_[occ] = w;
}

double GCPlan::weight(const Occupation& occ) const {
    auto it = w_.find(occ);
    return it == w_.end() ? 0.0 : it->second;
}

double GCPlan::total_weight() const {
    double s = 0.0;
    for (const auto& e : w_) s += e.second;
    return s;
}

void GCPlan::normalize() {
    double s = total_weight();
    if (s <= 0.0) throw Error(ErrorKind::Usage, "plan: cannot normalize a plan with no mass");
    for (auto& e : w_) e.second /= s;
}

std::vector<double> plan_density(const GCPlan& plan) {
    std::vector<double> rho(plan.sites(), 0.0);
    for (const auto& [occ, w] : plan)
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (occ[i]) rho[i] += occ[i] * w;
    return rho;
}

std::vector<double> plan_mass_distribution(const GCPlan& plan) {
    int top = plan.nmax();
    for (const auto& e : plan) top = std::max(top, particle_count(e.first));
    std::vector<double> lambda(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& [occ, w] : plan) lambda[particle_count(occ)] += w;
    return lambda;
}

std::vector<int> plan_support(const GCPlan& plan, double tol) {
    auto lambda = plan_mass_distribution(plan);
    std::vector<int> s;
    for (std::size_t n = 0; n < lambda.size(); ++n)
        if (lambda[n] > tol) s.push_back(static_cast<int>(n));
    return s;
}

namespace {

void fill_compositions(std::vector<Occupation>& out, Occupation& cur, const std::vector<std::size_t>& free_sites,
                       std::size_t pos, int left) {
    if (pos + 1 == free_sites.size()) {
        cur[free_sites[pos]] = left;
        out.push_back(cur);
        cur[free_sites[pos]] = 0;
        return;
    }
    for (int k = left; k >= 0; --k) {
        cur[free_sites[pos]] = k;
        fill_compositions(out, cur, free_sites, pos + 1, left - k);
    }
    cur[free_sites[pos]] = 0;
}

}  // namespace

std::vector<Occupation> enumerate_occupations(std::size_t sites, int nmax, const std::vector<bool>& allowed) {
    std::vector<std::size_t> free_sites;
    for (std::size_t i = 0; i < sites; ++i)
        if (allowed.empty() || allowed[i]) free_sites.push_back(i);
    std::vector<Occupation> out;
    Occupation cur(sites, 0);
    out.push_back(cur);
    if (free_sites.empty()) return out;
    for (int n = 1; n <= nmax; ++n) fill_compositions(out, cur, free_sites, 0, n);
    return out;
}

std::size_t count_occupations(std::size_t sites, int nmax, std::size_t cap) {
    // C(nmax + sites, sites), computed incrementally with saturation
    long double c = 1.0L;
    for (std::size_t k = 1; k <= sites; ++k) {
        c = c * static_cast<long double>(nmax + k) / static_cast<long double>(k);
        if (c > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::size_t>(std::llround(c));
}

double poisson_log_weight(const DiscreteDensity& rho, const Occupation& occ) {
    double lw = -rho.total_mass();
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i] == 0) continue;
        if (rho.mass(i) <= 0.0) return -INFINITY;
        lw += occ[i] * std::log(rho.mass(i)) - std::lgamma(occ[i] + 1.0);
    }
    return lw;
}

double poisson_tail(double mean, int nmax) {
    if (mean <= 0.0) return 0.0;
    auto log_pmf = [&](int n) { return -mean + n * std::log(mean) - std::lgamma(n + 1.0); };
    if (nmax < mean) {
        double s = 0.0;
        for (int n = 0; n <= nmax; ++n) s += std::exp(log_pmf(n));
        return std::max(0.0, 1.0 - s);
    }
    double s = 0.0;
    for (int n = nmax + 1;; ++n) {
        double t = std::exp(log_pmf(n));
        s += t;
        if (t < 1e-300 || t < s * 1e-18) break;
    }
    return s;
}

PoissonPlan poisson_plan(const DiscreteDensity& rho, int nmax) {
    if (nmax < 0) throw Error(ErrorKind::Usage, "poisson_plan: nmax must be nonnegative");
    std::vector<bool> allowed(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) allowed[i] = rho.mass(i) > 0.0;
    PoissonPlan out{GCPlan(rho.size(), nmax), poisson_tail(rho.total_mass(), nmax)};
    for (const auto& occ : enumerate_occupations(rho.size(), nmax, allowed))
        out.plan.set(occ, std::exp(poisson_log_weight(rho, occ)));
    out.plan.normalize();
    return out;
}

LocalizationResult localize(const GCPlan& plan, const std::vector<std::size_t>& kept) {
    for (std::size_t i : kept)
        if (i >= plan.sites()) throw Error(ErrorKind::Usage, "localize: index outside the support");
    LocalizationResult out{GCPlan(kept.size(), plan.nmax()), kept};
    Occupation sub(kept.size());
    for (const auto& [occ, w] : plan) {
        for (std::size_t k = 0; k < kept.size(); ++k) sub[k] = occ[kept[k]];
        out.plan.add(sub, w);
    }
    return out;
}

DiscreteDensity two_species_density(const DiscreteDensity& rho1, const DiscreteDensity& rho2) {
    if (rho2.size() > 0 && rho1.dim() != rho2.dim())
        throw Error(ErrorKind::Usage, "two_species_density: dimension mismatch");
    std::vector<Point> pts;
    std::vector<double> m;
    auto append = [&](const DiscreteDensity& r, double tag) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            Point p = r.point(i);
            p.push_back(tag);
            pts.push_back(std::move(p));
            m.push_back(r.mass(i));
        }
    };
    append(rho1, 1.0);
    append(rho2, 2.0);
    return DiscreteDensity(rho1.dim() + 1, std::move(pts), std::move(m));
}

PlanReport validate_plan(const GCPlan& plan, const DiscreteDensity& rho, double tol, double norm_tol) {
    PlanReport r;
    if (plan.empty()) {
        r.message = "not a probability: plan has no entries";
        return r;
    }
    if (plan.sites() != rho.size()) {
        r.message = "plan and density have different supports";
        return r;
    }
    r.min_weight = INFINITY;
    bool finite = true;
    for (const auto& e : plan) {
        r.min_weight = std::min(r.min_weight, e.second);
        finite = finite && std::isfinite(e.second);
    }
    r.normalization_residual = std::abs(plan.total_weight() - 1.0);
    auto d = plan_density(plan);
    for (std::size_t i = 0; i < d.size(); ++i)
        r.density_residual = std::max(r.density_residual, std::abs(d[i] - rho.mass(i)));
    auto s = plan_support(plan, 0.0);
    if (!s.empty()) {
        r.support_lo = s.front();
        r.support_hi = s.back();
    }
    r.is_probability = finite && r.min_weight >= -norm_tol && r.normalization_residual <= norm_tol;
    r.ok = r.is_probability && r.density_residual <= tol;
    if (!r.is_probability)
        r.message = "not a probability";
    else if (!r.ok)
        r.message = "density mismatch";
    return r;
}

}  // namespace gcot
