#include "gcot/entropic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace gcot {

namespace {

double log_factorials(const Occupation& o) {
    double s = 0.0;
    for (int k : o)
        if (k > 1) s += std::lgamma(k + 1.0);
    return s;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double relative_entropy(const GCPlan& plan, const GCPlan& ref) {
    double h = 0.0;
    for (const auto& [occ, w] : plan) {
        if (w <= 0.0) continue;
        double g = ref.weight(occ);
        if (g <= 0.0) return INFINITY;
        h += w * std::log(w / g);
    }
    return std::max(h, 0.0);
}

double relative_entropy_poisson(const GCPlan& plan, const DiscreteDensity& rho) {
    double h = 0.0;
    for (const auto& [occ, w] : plan) {
        if (w <= 0.0) continue;
        double lg = poisson_log_weight(rho, occ);
        if (!std::isfinite(lg)) return INFINITY;
        h += w * (std::log(w) - lg);
    }
    return h;
}

double plan_entropy(const GCPlan& plan) {
    double s = 0.0;
    for (const auto& [occ, w] : plan)
        if (w > 0.0) s -= w * (std::log(w) + log_factorials(occ));
    return s;
}

double tv_to_poisson(const GCPlan& plan, const DiscreteDensity& rho) {
    double tv = 0.0, covered = 0.0;
    for (const auto& [occ, w] : plan) {
        double g = std::exp(poisson_log_weight(rho, occ));
        tv += std::abs(w - g);
        covered += g;
    }
    return tv + std::max(0.0, 1.0 - covered);
}

EntropyReport entropy_report(const GCPlan& plan, const DiscreteDensity& rho, double tol) {
    EntropyReport r;
    r.S = plan_entropy(plan);
    r.H = relative_entropy_poisson(plan, rho);
    auto lambda = plan_mass_distribution(plan);
    for (std::size_t n = 2; n < lambda.size(); ++n) r.growth_lhs += std::lgamma(n + 1.0) * lambda[n];
    const double mass = rho.total_mass();
    r.growth_rhs = r.H + std::log(2.0) + xlogx(mass);
    r.entropy_bound = mass;
    for (double m : rho.masses()) r.entropy_bound -= xlogx(m);
    r.decomposition_residual = std::isfinite(r.H) ? std::abs(r.S - (r.entropy_bound - r.H)) : INFINITY;
    r.growth_ok = r.growth_lhs <= r.growth_rhs + tol;
    r.max_entropy_ok = r.decomposition_residual <= tol * std::max(1.0, std::abs(r.S)) && r.S <= r.entropy_bound + tol;
    return r;
}

bool entropy_growth_check(const GCPlan& plan, const DiscreteDensity& rho) { return entropy_report(plan, rho).growth_ok; }

bool max_entropy_check(const GCPlan& plan, const DiscreteDensity& rho, double tol) {
    return entropy_report(plan, rho, tol).max_entropy_ok;
}

GibbsColumns gibbs_columns(const DiscreteDensity& rho, int nmax, const CostFamily& cost) {
    auto inst = build_instance(rho, nmax, cost);
    GibbsColumns c;
    c.sites = rho.size();
    c.nmax = nmax;
    c.occ = std::move(inst.columns);
    c.cost = std::move(inst.costs);
    c.log_ref.reserve(c.occ.size());
    for (const auto& o : c.occ) c.log_ref.push_back(poisson_log_weight(rho, o));
    return c;
}

namespace {

struct GibbsEval {
    double logZ = 0.0;
    std::vector<double> logw;       // normalized log weights
    Eigen::VectorXd density;
};

GibbsEval evaluate(const GibbsColumns& cols, const std::vector<double>& psi, double T) {
    GibbsEval e;
    const std::size_t n = cols.occ.size();
    e.logw.resize(n);
    double mx = -INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
        double s = cols.log_ref[k] - cols.cost[k] / T;
        const auto& o = cols.occ[k];
        for (std::size_t i = 0; i < o.size(); ++i)
            if (o[i]) s += o[i] * psi[i] / T;
        e.logw[k] = s;
        mx = std::max(mx, s);
    }
    double acc = 0.0;
    for (double s : e.logw) acc += std::exp(s - mx);
    e.logZ = mx + std::log(acc);
    e.density = Eigen::VectorXd::Zero(cols.sites);
    for (std::size_t k = 0; k < n; ++k) {
        e.logw[k] -= e.logZ;
        double p = std::exp(e.logw[k]);
        const auto& o = cols.occ[k];
        for (std::size_t i = 0; i < o.size(); ++i)
            if (o[i]) e.density[i] += p * o[i];
    }
    return e;
}

Eigen::MatrixXd covariance(const GibbsColumns& cols, const GibbsEval& e) {
    const std::size_t m = cols.sites;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < cols.occ.size(); ++k) {
        double p = std::exp(e.logw[k]);
        if (p == 0.0) continue;
        const auto& o = cols.occ[k];
        nz.clear();
        for (std::size_t i = 0; i < m; ++i)
            if (o[i]) nz.push_back(i);
        for (std::size_t a : nz)
            for (std::size_t b : nz) C(a, b) += p * o[a] * o[b];
    }
    C -= e.density * e.density.transpose();
    return C;
}

double dot_rho(const DiscreteDensity& rho, const std::vector<double>& psi) {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) s += psi[i] * rho.mass(i);
    return s;
}

double sup_residual(const DiscreteDensity& rho, const Eigen::VectorXd& d) {
    double r = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) r = std::max(r, std::abs(rho.mass(i) - d[i]));
    return r;
}

GibbsSolution assemble(const GibbsColumns& cols, const DiscreteDensity& rho, const std::vector<double>& psi, double T,
                       const GibbsEval& e) {
    GibbsSolution s;
    s.psi = psi;
    s.T = T;
    s.logZ = e.logZ;
    s.Z = std::exp(e.logZ);
    s.F = -T * e.logZ;
    s.plan = GCPlan(cols.sites, cols.nmax);
    double cost = 0.0, H = 0.0;
    for (std::size_t k = 0; k < cols.occ.size(); ++k) {
        double p = std::exp(e.logw[k]);
        if (p == 0.0) continue;
        s.plan.set(cols.occ[k], p);
        cost += p * cols.cost[k];
        H += p * (e.logw[k] - cols.log_ref[k]);
    }
    s.density.assign(e.density.data(), e.density.data() + e.density.size());
    s.density_residual = sup_residual(rho, e.density);
    s.cost = cost;
    s.H = H;
    s.primal = cost + T * H;
    s.dual = dot_rho(rho, psi) - T * e.logZ;
    return s;
}

void check_temperature(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::Usage, "temperature must be positive and finite");
}

void check_psi(const DiscreteDensity& rho, const std::vector<double>& psi) {
    if (psi.size() != rho.size()) throw Error(ErrorKind::Usage, "potential size does not match the density");
}

}  // namespace

double log_partition_function(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                              const std::vector<double>& psi, double T) {
    check_temperature(T);
    check_psi(rho, psi);
    return evaluate(gibbs_columns(rho, nmax, cost), psi, T).logZ;
}

double partition_function(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                          const std::vector<double>& psi, double T) {
    return std::exp(log_partition_function(rho, nmax, cost, psi, T));
}

GibbsSolution gibbs_plan(const GibbsColumns& cols, const DiscreteDensity& rho, const std::vector<double>& psi,
                         double T) {
    check_temperature(T);
    check_psi(rho, psi);
    auto s = assemble(cols, rho, psi, T, evaluate(cols, psi, T));
    s.method = "gibbs";
    return s;
}

GibbsSolution gibbs_plan(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const std::vector<double>& psi,
                         double T) {
    return gibbs_plan(gibbs_columns(rho, nmax, cost), rho, psi, T);
}

double dual_objective(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const std::vector<double>& psi,
                      double T) {
    return dot_rho(rho, psi) - T * log_partition_function(rho, nmax, cost, psi, T);
}

std::vector<double> dual_gradient(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                                  const std::vector<double>& psi, double T) {
    check_temperature(T);
    check_psi(rho, psi);
    auto e = evaluate(gibbs_columns(rho, nmax, cost), psi, T);
    std::vector<double> g(rho.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = rho.mass(i) - e.density[i];
    return g;
}

namespace {

void check_reachable(const GibbsColumns& cols, const DiscreteDensity& rho) {
    std::vector<int> top(cols.sites, 0);
    for (const auto& o : cols.occ)
        for (std::size_t i = 0; i < o.size(); ++i) top[i] = std::max(top[i], o[i]);
    for (std::size_t i = 0; i < cols.sites; ++i) {
        if (rho.mass(i) <= 0.0) continue;
        if (rho.mass(i) >= top[i]) {
            std::ostringstream os;
            os << "density " << rho.mass(i) << " at atom " << i << " is not below the largest reachable occupation "
               << top[i];
            throw Error(ErrorKind::Infeasible, os.str());
        }
    }
    if (rho.total_mass() >= cols.nmax)
        throw Error(ErrorKind::Infeasible, "total mass must stay below the truncation for a Gibbs state to exist");
}

GibbsSolution newton(const GibbsColumns& cols, const DiscreteDensity& rho, double T, std::vector<double> psi,
                     const EntropicOptions& opts) {
    const std::size_t m = rho.size();
    Eigen::VectorXd target(m);
    for (std::size_t i = 0; i < m; ++i) target[i] = rho.mass(i);
    std::vector<char> live(m);
    for (std::size_t i = 0; i < m; ++i) live[i] = rho.mass(i) > 0.0;
    auto e = evaluate(cols, psi, T);
    auto D = [&](const std::vector<double>& p, const GibbsEval& ev) { return dot_rho(rho, p) - T * ev.logZ; };
    double d = D(psi, e);
    // potentials live on the scale of the costs, so cap each step there
    double radius = 1.0;
    for (double c : cols.cost) radius = std::max(radius, std::abs(c));
    int it = 0;
    double res = sup_residual(rho, e.density);
    for (; it < opts.max_iter && res > opts.tol; ++it) {
        Eigen::VectorXd g = target - e.density;
        Eigen::MatrixXd H = covariance(cols, e) / T;
        for (std::size_t i = 0; i < m; ++i)
            if (!live[i]) {
                H.row(i).setZero();
                H.col(i).setZero();
                H(i, i) = 1.0;
                g[i] = 0.0;
            }
        Eigen::VectorXd step;
        double mu = 0.0;
        const double scale = std::max(1e-300, H.diagonal().maxCoeff());
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd A = H;
            A.diagonal().array() += mu;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
            if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
                step = ldlt.solve(g);
                if (step.allFinite() && step.dot(g) > 0.0) break;
            }
            mu = mu == 0.0 ? 1e-12 * scale : mu * 10.0;
            step.resize(0);
        }
        if (step.size() == 0) step = g;
        bool accepted = false;
        std::vector<double> trial(m);
        GibbsEval et;
        // Newton direction first, then plain ascent; both capped to the trust radius
        for (int dir = 0; dir < 2 && !accepted; ++dir) {
            if (dir == 1) step = g;
            double len = step.cwiseAbs().maxCoeff();
            double t = len > radius ? radius / len : 1.0;
            const double slope = step.dot(g);
            for (int ls = 0; ls < 80; ++ls) {
                for (std::size_t i = 0; i < m; ++i) trial[i] = psi[i] + t * step[i];
                et = evaluate(cols, trial, T);
                double dt = D(trial, et);
                double rt = sup_residual(rho, et.density);
                if (dt >= d + 1e-4 * t * slope || (dt >= d - 1e-15 * std::abs(d) && rt < res)) {
                    accepted = true;
                    psi = trial;
                    e = std::move(et);
                    d = dt;
                    res = rt;
                    break;
                }
                t *= 0.5;
            }
        }
        if (!accepted) break;
    }
    auto s = assemble(cols, rho, psi, T, e);
    s.iterations = it;
    s.method = "newton";
    return s;
}

GibbsSolution fixed_point(const GibbsColumns& cols, const DiscreteDensity& rho, double T, std::vector<double> psi,
                          const EntropicOptions& opts) {
    const std::size_t m = rho.size();
    auto e = evaluate(cols, psi, T);
    double res = sup_residual(rho, e.density);
    double gamma = 0.5;
    int rises = 0;
    bool ascent = false;
    double step = 1.0;
    int it = 0;
    std::vector<double> trial(m);
    for (; it < opts.max_iter && res > opts.tol; ++it) {
        if (!ascent) {
            for (std::size_t i = 0; i < m; ++i)
                trial[i] = rho.mass(i) > 0.0 ? psi[i] + gamma * T * std::log(rho.mass(i) / e.density[i]) : psi[i];
            auto et = evaluate(cols, trial, T);
            double rt = sup_residual(rho, et.density);
            if (rt < res) {
                psi = trial;
                e = std::move(et);
                res = rt;
                gamma = std::min(1.0, 2.0 * gamma);
                rises = 0;
            } else {
                gamma *= 0.5;
                if (++rises >= 3) ascent = true;   // oscillating: switch to dual ascent
            }
            continue;
        }
        // gradient ascent on the concave dual with backtracking
        double d = dot_rho(rho, psi) - T * e.logZ;
        std::vector<double> g(m);
        double gg = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            g[i] = rho.mass(i) - e.density[i];
            gg += g[i] * g[i];
        }
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < m; ++i) trial[i] = psi[i] + step * g[i];
            auto et = evaluate(cols, trial, T);
            double dt = dot_rho(rho, trial) - T * et.logZ;
            if (dt >= d + 1e-4 * step * gg) {
                psi = trial;
                e = std::move(et);
                res = sup_residual(rho, e.density);
                step *= 2.0;
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
    }
    auto s = assemble(cols, rho, psi, T, e);
    s.iterations = it;
    s.method = ascent ? "fixed-point+ascent" : "fixed-point";
    return s;
}

}  // namespace

GibbsSolution solve_entropic(const DiscreteDensity& rho, int nmax, const CostFamily& cost, double T,
                             const EntropicOptions& opts) {
    check_temperature(T);
    auto cols = gibbs_columns(rho, nmax, cost);
    check_reachable(cols, rho);
    std::vector<double> psi = opts.psi0.empty() ? std::vector<double>(rho.size(), 0.0) : opts.psi0;
    check_psi(rho, psi);
    GibbsSolution s = opts.method == EntropicMethod::Newton ? newton(cols, rho, T, psi, opts)
                                                            : fixed_point(cols, rho, T, psi, opts);
    if (!(s.density_residual <= opts.tol)) {
        std::ostringstream os;
        os << "entropic solver stopped after " << s.iterations << " iterations with density residual "
           << s.density_residual;
        throw Error(ErrorKind::NonConvergence, os.str());
    }
    return s;
}

std::string TemperatureSweep::csv() const {
    std::ostringstream os;
    os << "T,F,H,TV,cost,residual,pinsker\r\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g,%.3g,%d\r\n", r.T, r.F, r.H, r.TV, r.cost,
                      r.residual, r.pinsker ? 1 : 0);
        os << buf;
    }
    return os.str();
}

TemperatureSweep temperature_sweep(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                                   const std::vector<double>& temps, const EntropicOptions& opts, double tol) {
    if (temps.empty()) throw Error(ErrorKind::Usage, "temperature sweep needs at least one temperature");
    for (std::size_t k = 0; k < temps.size(); ++k) {
        check_temperature(temps[k]);
        if (k > 0 && !(temps[k] > temps[k - 1]))
            throw Error(ErrorKind::Usage, "temperatures must be strictly increasing");
    }
    TemperatureSweep sw;
    sw.rows.resize(temps.size());
    EntropicOptions o = opts;
    // hot to cold, each solve warm-started from the previous potential
    for (std::size_t k = temps.size(); k-- > 0;) {
        auto s = solve_entropic(rho, nmax, cost, temps[k], o);
        o.psi0 = s.psi;
        SweepRow& r = sw.rows[k];
        r.T = temps[k];
        r.F = s.primal;
        r.H = s.H;
        r.cost = s.cost;
        r.residual = s.density_residual;
        r.TV = tv_to_poisson(s.plan, rho);
        r.pinsker = r.TV <= std::sqrt(2.0 * std::max(0.0, r.H)) + tol;
        sw.pinsker = sw.pinsker && r.pinsker;
    }
    for (std::size_t k = 0; k + 1 < sw.rows.size(); ++k)
        if (sw.rows[k + 1].F < sw.rows[k].F - tol) sw.nondecreasing = false;
    for (std::size_t k = 0; k + 2 < sw.rows.size(); ++k) {
        const auto &a = sw.rows[k], &b = sw.rows[k + 1], &c = sw.rows[k + 2];
        double s1 = (b.F - a.F) / (b.T - a.T), s2 = (c.F - b.F) / (c.T - b.T);
        sw.max_slope_increase = std::max(sw.max_slope_increase, s2 - s1);
    }
    sw.concave = sw.max_slope_increase <= tol;
    return sw;
}

std::vector<double> parse_temperatures(const std::string& spec) {
    auto fail = [&]() -> std::vector<double> {
        throw Error(ErrorKind::Usage, "bad temperature list '" + spec + "'");
    };
    std::vector<std::string> parts;
    char sep = spec.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, sep);) parts.push_back(p);
    auto num = [&](const std::string& t) {
        try {
            std::size_t used = 0;
            double v = std::stod(t, &used);
            if (used != t.size()) fail();
            return v;
        } catch (const std::logic_error&) {
            fail();
        }
        return 0.0;
    };
    std::vector<double> out;
    if (sep == ',') {
        for (const auto& p : parts) out.push_back(num(p));
        return out;
    }
    if (parts.size() != 4) return fail();
    double a = num(parts[0]), b = num(parts[1]);
    int n = static_cast<int>(num(parts[3]));
    if (n < 1 || !(a > 0.0) || !(b >= a)) return fail();
    if (n == 1) return {a};
    for (int k = 0; k < n; ++k) {
        double f = static_cast<double>(k) / (n - 1);
        if (parts[2] == "log") out.push_back(a * std::pow(b / a, f));
        else if (parts[2] == "lin") out.push_back(a + (b - a) * f);
        else return fail();
    }
    out.back() = b;
    return out;
}

std::vector<std::vector<double>> two_agent_distribution(const GCPlan& plan) {
    const std::size_t m = plan.sites();
    std::vector<std::vector<double>> r(m, std::vector<double>(m, 0.0));
    for (const auto& [o, w] : plan) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!o[i]) continue;
            r[i][i] += w * 0.5 * o[i] * (o[i] - 1);
            for (std::size_t j = i + 1; j < m; ++j)
                if (o[j]) r[i][j] += w * o[i] * o[j];
        }
    }
    return r;
}

namespace {

// all ways of placing n particles on k atoms with their multinomial probabilities
void compositions(int n, const std::vector<double>& p, std::size_t at, Occupation& cur, double logprob,
                  const std::function<void(const Occupation&, double)>& emit) {
    if (at + 1 == p.size()) {
        cur[at] = n;
        double lp = logprob + (n ? n * std::log(p[at]) : 0.0) - std::lgamma(n + 1.0);
        emit(cur, lp);
        return;
    }
    for (int k = 0; k <= n; ++k) {
        cur[at] = k;
        double lp = logprob + (k ? k * std::log(p[at]) : 0.0) - std::lgamma(k + 1.0);
        compositions(n - k, p, at + 1, cur, lp, emit);
    }
}

}  // namespace

BlockApproximation block_approximation(const GCPlan& plan, const DiscreteDensity& rho, double h, const Kernel& c2) {
    if (!(h > 0.0)) throw Error(ErrorKind::Usage, "block size must be positive");
    if (plan.sites() != rho.size()) throw Error(ErrorKind::Usage, "plan and density have different supports");
    BlockApproximation out;
    const std::size_t m = rho.size();
    out.cell_of.assign(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<int> z;
        for (double x : rho.point(i)) z.push_back(static_cast<int>(std::floor(x / h + 0.5)));
        auto it = std::find(out.cells.begin(), out.cells.end(), z);
        if (it == out.cells.end()) {
            out.cell_of[i] = static_cast<int>(out.cells.size());
            out.cells.push_back(z);
        } else {
            out.cell_of[i] = static_cast<int>(it - out.cells.begin());
        }
    }
    const std::size_t nc = out.cells.size();
    std::vector<std::vector<std::size_t>> members(nc);
    std::vector<double> cell_mass(nc, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        members[out.cell_of[i]].push_back(i);
        cell_mass[out.cell_of[i]] += rho.mass(i);
    }
    out.plan = GCPlan(m, plan.nmax());
    for (const auto& [o, w] : plan) {
        if (w <= 0.0) continue;
        // per-cell redistribution, expanded cell by cell
        std::vector<std::pair<Occupation, double>> acc{{Occupation(m, 0), std::log(w)}};
        for (std::size_t z = 0; z < nc; ++z) {
            int n = 0;
            for (std::size_t i : members[z]) n += o[i];
            if (n == 0) continue;
            std::vector<double> p;
            for (std::size_t i : members[z]) p.push_back(rho.mass(i) / cell_mass[z]);
            std::vector<std::pair<Occupation, double>> local;
            Occupation cur(p.size(), 0);
            compositions(n, p, 0, cur, std::lgamma(n + 1.0), [&](const Occupation& c, double lp) {
                if (std::isfinite(lp)) local.emplace_back(c, lp);
            });
            std::vector<std::pair<Occupation, double>> next;
            next.reserve(acc.size() * local.size());
            for (const auto& [base, lb] : acc)
                for (const auto& [c, lp] : local) {
                    Occupation o2 = base;
                    for (std::size_t k = 0; k < c.size(); ++k) o2[members[z][k]] = c[k];
                    next.emplace_back(std::move(o2), lb + lp);
                }
            acc = std::move(next);
        }
        for (const auto& [o2, lw] : acc) out.plan.add(o2, std::exp(lw));
    }
    auto pair_cost = [&](const Occupation& o) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!o[i]) continue;
            if (o[i] > 1) s += 0.5 * o[i] * (o[i] - 1) * c2(rho.point(i), rho.point(i));
            for (std::size_t j = i + 1; j < m; ++j)
                if (o[j]) s += o[i] * o[j] * c2(rho.point(i), rho.point(j));
        }
        return s;
    };
    out.cost_before = plan_expectation(plan, pair_cost);
    out.cost_after = plan_expectation(out.plan, pair_cost);
    out.cost_gap = std::abs(out.cost_after - out.cost_before);
    // oscillation of c2 on each pair of cells, against its value at the cell centers
    auto rho2 = two_agent_distribution(plan);
    std::vector<std::vector<double>> cell_rho2(nc, std::vector<double>(nc, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            int a = out.cell_of[i], b = out.cell_of[j];
            cell_rho2[std::min(a, b)][std::max(a, b)] += rho2[i][j];
        }
    for (std::size_t a = 0; a < nc; ++a)
        for (std::size_t b = a; b < nc; ++b) {
            if (cell_rho2[a][b] <= 0.0) continue;
            Point za, zb;
            for (int v : out.cells[a]) za.push_back(v * h);
            for (int v : out.cells[b]) zb.push_back(v * h);
            double ref = c2(za, zb), osc = 0.0;
            for (std::size_t i : members[a])
                for (std::size_t j : members[b]) {
                    double v = c2(rho.point(i), rho.point(j));
                    double dv = std::abs(v - ref);
                    osc = std::isnan(dv) ? INFINITY : std::max(osc, dv);
                }
            out.gap_bound += 2.0 * osc * cell_rho2[a][b];
        }
    out.relative_entropy = relative_entropy_poisson(out.plan, rho);
    auto d = plan_density(out.plan);
    for (std::size_t i = 0; i < m; ++i) out.density_residual = std::max(out.density_residual, std::abs(d[i] - rho.mass(i)));
    return out;
}

bool dual_potential_probe(const DiscreteDensity& rho, int nmax, const CostFamily& cost, double eps) {
    return lp_feasible(rho.scaled(1.0 + eps), nmax, cost);
}

CriticalEta critical_eta(const DiscreteDensity& rho, int nmax, const CostFamily& cost, double tol) {
    const double mass = rho.total_mass();
    if (!(mass > 0.0)) throw Error(ErrorKind::Usage, "critical eta needs positive mass");
    CriticalEta r;
    r.lo = 0.0;
    r.hi = nmax / mass;
    if (lp_feasible(rho.scaled(r.hi), nmax, cost)) {
        r.lo = r.eta = r.hi;
        return r;
    }
    while (r.hi - r.lo > tol * std::max(1.0, r.hi)) {
        double mid = 0.5 * (r.lo + r.hi);
        (lp_feasible(rho.scaled(mid), nmax, cost) ? r.lo : r.hi) = mid;
        ++r.steps;
    }
    r.eta = r.lo;
    return r;
}

}  // namespace gcot
