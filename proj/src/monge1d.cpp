#include "gcot/monge1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gcot {

GridDensity1D::GridDensity1D(std::vector<double> breakpoints, std::vector<double> densities)
    : b_(std::move(breakpoints)), d_(std::move(densities)) {
    if (b_.size() < 2 || d_.size() + 1 != b_.size())
        throw Error(ErrorKind::Usage, "grid density needs k+1 breakpoints for k cells");
    for (std::size_t j = 0; j + 1 < b_.size(); ++j)
        if (!(b_[j] < b_[j + 1]) || !std::isfinite(b_[j]) || !std::isfinite(b_[j + 1]))
            throw Error(ErrorKind::Usage, "grid density breakpoints must be finite and increasing");
    for (double d : d_)
        if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorKind::Usage, "grid density values must be finite and >= 0");
    cum_.assign(b_.size(), 0.0);
    for (std::size_t j = 0; j < d_.size(); ++j) cum_[j + 1] = cum_[j] + d_[j] * (b_[j + 1] - b_[j]);
}

double GridDensity1D::cdf(double x) const {
    if (x <= b_.front()) return 0.0;
    if (x >= b_.back()) return cum_.back();
    std::size_t j = std::upper_bound(b_.begin(), b_.end(), x) - b_.begin() - 1;
    return cum_[j] + d_[j] * (x - b_[j]);
}

double GridDensity1D::quantile(double u) const {
    if (u <= 0.0) {
        for (std::size_t j = 0; j < d_.size(); ++j)
            if (d_[j] > 0.0) return b_[j];
        return b_.front();
    }
    for (std::size_t j = 0; j < d_.size(); ++j) {
        if (d_[j] <= 0.0) continue;
        if (cum_[j + 1] >= u) return std::min(b_[j + 1], b_[j] + (u - cum_[j]) / d_[j]);
    }
    // u beyond the total mass (rounding): right end of the last charged cell
    for (std::size_t j = d_.size(); j-- > 0;)
        if (d_[j] > 0.0) return b_[j + 1];
    return b_.back();
}

double GridDensity1D::mass_between(double x0, double x1) const { return cdf(x1) - cdf(x0); }

double GridDensity1D::barycenter(double x0, double x1) const {
    double m = 0.0, s = 0.0;
    for (std::size_t j = 0; j < d_.size(); ++j) {
        double lo = std::max(x0, b_[j]), hi = std::min(x1, b_[j + 1]);
        if (hi <= lo || d_[j] == 0.0) continue;
        m += d_[j] * (hi - lo);
        s += d_[j] * 0.5 * (hi * hi - lo * lo);
    }
    return m > 0.0 ? s / m : 0.5 * (x0 + x1);
}

GridDensity1D uniform_density(double a, double b, double height) { return GridDensity1D({a, b}, {height}); }

double MongePlan1D::T(double x) const {
    double u = rho.cdf(x) + 1.0;
    if (u > rho.total_mass() + 1e-12) throw Error(ErrorKind::Usage, "T is undefined past the last unit of mass");
    return rho.quantile(std::min(u, rho.total_mass()));
}

std::vector<double> MongePlan1D::configuration(double u, int particles) const {
    std::vector<double> x(particles);
    for (int a = 0; a < particles; ++a) x[a] = rho.quantile(u + a);
    return x;
}

std::vector<int> MongePlan1D::support() const {
    std::vector<int> s;
    for (const auto& b : blocks)
        if (b.weight() > 0.0) s.push_back(b.particles);
    std::sort(s.begin(), s.end());
    return s;
}

MongePlan1D build_monge_plan(const GridDensity1D& rho) {
    const double mass = rho.total_mass();
    if (!(mass > 0.0)) throw Error(ErrorKind::Usage, "monge plan needs positive mass");
    MongePlan1D p;
    p.rho = rho;
    p.n = static_cast<int>(std::floor(mass));
    p.eta = mass - p.n;
    if (p.eta < 1e-12) p.eta = 0.0;
    if (1.0 - p.eta < 1e-12) {
        p.n += 1;
        p.eta = 0.0;
    }
    for (int i = 1; i <= p.n; ++i) {
        p.cuts.push_back(rho.quantile(i - 1 + p.eta));
        p.cuts.push_back(rho.quantile(i));
    }
    p.blocks.push_back({p.n, p.eta, 1.0});
    if (p.eta > 0.0) p.blocks.push_back({p.n + 1, 0.0, p.eta});
    return p;
}

namespace {

struct GaussLegendre16 {
    std::array<double, 16> x{}, w{};
    GaussLegendre16() {
        const int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule;
    return rule;
}

template <class F>
double gl_panel(F& f, double a, double b) {
    const auto& r = gl16();
    double c = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
    for (int i = 0; i < 16; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return h * s;
}

template <class F>
void adapt(F& f, double a, double b, double coarse, double tol, int depth, MongeCost& out) {
    double m = 0.5 * (a + b);
    double left = gl_panel(f, a, m), right = gl_panel(f, m, b);
    double fine = left + right;
    if (std::abs(fine - coarse) <= tol || depth >= 40) {
        out.value += fine;
        out.error += std::abs(fine - coarse);
        out.panels += 2;
        return;
    }
    adapt(f, a, m, left, 0.5 * tol, depth + 1, out);
    adapt(f, m, b, right, 0.5 * tol, depth + 1, out);
}

}  // namespace

MongeCost monge_cost(const MongePlan1D& plan, const Kernel& w, double quad_tol) {
    MongeCost out;
    const auto& cum = plan.rho.cumulative();
    double total_len = 0.0;
    for (const auto& blk : plan.blocks) total_len += blk.weight();
    for (const auto& blk : plan.blocks) {
        if (blk.particles < 2 || blk.weight() <= 0.0) continue;
        const int p = blk.particles;
        auto f = [&](double u) {
            auto x = plan.configuration(u, p);
            double s = 0.0;
            for (int a = 0; a < p; ++a)
                for (int b = a + 1; b < p; ++b) s += w(Point{x[a]}, Point{x[b]});
            if (!std::isfinite(s)) throw Error(ErrorKind::Usage, "kernel diverges inside a block of the monge plan");
            return s;
        };
        // the composed quantiles are linear between these points
        std::vector<double> knots{blk.u_lo, blk.u_hi};
        for (int a = 0; a < p; ++a)
            for (double c : cum) {
                double u = c - a;
                if (u > blk.u_lo && u < blk.u_hi) knots.push_back(u);
            }
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            double a = knots[k], b = knots[k + 1];
            if (b - a <= 0.0) continue;
            double tol = quad_tol * (b - a) / total_len;
            adapt(f, a, b, gl_panel(f, a, b), tol, 0, out);
        }
    }
    return out;
}

DiscreteDensity discretize(const GridDensity1D& rho, int cells) {
    if (cells < 1) throw Error(ErrorKind::Usage, "discretize needs at least one cell");
    const double a = rho.breakpoints().front(), b = rho.breakpoints().back();
    const double h = (b - a) / cells;
    std::vector<Point> pts;
    std::vector<double> ms;
    for (int k = 0; k < cells; ++k) {
        double x0 = a + k * h, x1 = (k + 1 == cells) ? b : a + (k + 1) * h;
        double m = rho.mass_between(x0, x1);
        if (m <= 0.0) continue;
        pts.push_back(Point{rho.barycenter(x0, x1)});
        ms.push_back(m);
    }
    return DiscreteDensity(1, std::move(pts), std::move(ms));
}

CrosscheckReport crosscheck_vs_lp(const GridDensity1D& rho, const Kernel& w, int cells, int nmax,
                                  const LPOptions& opts) {
    CrosscheckReport rep;
    MongePlan1D plan = build_monge_plan(rho);
    rep.monge = monge_cost(plan, w).value;
    rep.atoms = discretize(rho, cells);
    CostFamily cost = pairwise_family(w, rep.atoms);
    rep.lp_result = solve_lp(rep.atoms, nmax, cost, opts);
    rep.lp = rep.lp_result.value;
    rep.gap = std::abs(rep.lp - rep.monge);
    rep.lp_support = plan_support(rep.lp_result.plan);
    rep.expected_support = plan.support();
    rep.support_ok = std::all_of(rep.lp_support.begin(), rep.lp_support.end(), [&](int n) {
        return std::find(rep.expected_support.begin(), rep.expected_support.end(), n) != rep.expected_support.end();
    });
    return rep;
}

namespace {
double line_energy(const std::vector<double>& x, const Kernel& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) s += w(Point{x[i]}, Point{x[j]});
    return s;
}
}  // namespace

InterlacingResult interlacing_check(const std::vector<double>& Y, const std::vector<double>& Z, const Kernel& w,
                                    double tol) {
    std::vector<double> X = Y;
    X.insert(X.end(), Z.begin(), Z.end());
    std::sort(X.begin(), X.end());
    std::vector<double> odd, even;
    for (std::size_t i = 0; i < X.size(); ++i) (i % 2 == 0 ? odd : even).push_back(X[i]);
    InterlacingResult r;
    r.lhs = line_energy(Y, w) + line_energy(Z, w);
    r.rhs = line_energy(odd, w) + line_energy(even, w);
    r.holds = r.lhs >= r.rhs - tol * (1.0 + std::abs(r.rhs));
    if (std::isinf(r.lhs) && r.lhs > 0) r.holds = true;
    return r;
}

}  // namespace gcot
