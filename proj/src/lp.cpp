#include "gcot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "simplex.hpp"

namespace gcot {

namespace {

std::vector<bool> occupied_sites(const DiscreteDensity& rho) {
    std::vector<bool> allowed(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) allowed[i] = rho.mass(i) > 0.0;
    return allowed;
}

std::vector<double> evaluate_costs(const std::vector<Occupation>& occs, const CostFamily& cost, int threads) {
    std::vector<double> c(occs.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) c[k] = particle_count(occs[k]) == 0 ? cost.c0 : cost(occs[k]);
    };
    std::size_t T = static_cast<std::size_t>(std::max(1, threads));
    if (T == 1 || occs.size() < 4096) {
        work(0, occs.size());
        return c;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (occs.size() + T - 1) / T;
    for (std::size_t t = 0; t < T; ++t) {
        std::size_t lo = t * chunk, hi = std::min(occs.size(), lo + chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
    return c;
}

void check_size(std::size_t sites, int nmax, const LPOptions& opts) {
    std::size_t count = count_occupations(sites, nmax, opts.max_columns);
    if (count > opts.max_columns) {
        std::ostringstream os;
        os << "configuration count exceeds the cap of " << opts.max_columns << " (sites=" << sites
           << ", nmax=" << nmax << ")";
        throw Error(ErrorKind::SizeCap, os.str());
    }
}

LPInstance make_instance(const DiscreteDensity& rho, std::vector<Occupation> occs, int nmax, const CostFamily& cost,
                         const LPOptions& opts) {
    LPInstance inst;
    inst.sites = rho.size();
    inst.nmax = nmax;
    auto c = evaluate_costs(occs, cost, opts.threads);
    for (std::size_t k = 0; k < occs.size(); ++k) {
        if (std::isnan(c[k])) throw Error(ErrorKind::Usage, "cost evaluated to NaN");
        if (c[k] == kInf) {
            ++inst.dropped_infinite;
            continue;
        }
        if (c[k] == -kInf) throw Error(ErrorKind::Usage, "cost evaluated to -inf; the problem is unbounded");
        inst.columns.push_back(std::move(occs[k]));
        inst.costs.push_back(c[k]);
    }
    inst.rhs = rho.masses();
    inst.rhs.push_back(1.0);
    return inst;
}

template <class S>
detail::StandardLP<S> to_standard(const LPInstance& inst) {
    detail::StandardLP<S> lp;
    const int m = static_cast<int>(inst.sites);
    lp.rows = m + 1;
    lp.cols.resize(inst.columns.size());
    lp.cost.reserve(inst.columns.size());
    for (std::size_t j = 0; j < inst.columns.size(); ++j) {
        const auto& occ = inst.columns[j];
        for (int i = 0; i < m; ++i)
            if (occ[i]) lp.cols[j].emplace_back(i, S(occ[i]));
        lp.cols[j].emplace_back(m, S(1));
        lp.cost.push_back(S(inst.costs[j]));
    }
    for (double b : inst.rhs) lp.rhs.push_back(S(b));
    return lp;
}

double to_double(double v) { return v; }
double to_double(const mpq_class& v) { return v.get_d(); }

void precheck(const LPInstance& inst) {
    double mass = 0.0;
    for (std::size_t i = 0; i < inst.sites; ++i) mass += inst.rhs[i];
    if (mass > inst.nmax + 1e-12) {
        std::ostringstream os;
        os << "infeasible: total mass " << mass << " exceeds nmax " << inst.nmax;
        throw Error(ErrorKind::Infeasible, os.str());
    }
    std::vector<int> top(inst.sites, 0);
    for (const auto& occ : inst.columns)
        for (std::size_t i = 0; i < inst.sites; ++i) top[i] = std::max(top[i], occ[i]);
    for (std::size_t i = 0; i < inst.sites; ++i)
        if (inst.rhs[i] > top[i] + 1e-12) {
            std::ostringstream os;
            os << "infeasible: density row " << i << " (mass " << inst.rhs[i]
               << ") exceeds the largest finite-cost multiplicity " << top[i];
            throw Error(ErrorKind::Infeasible, os.str());
        }
}

detail::SimplexParams params_from(const LPOptions& opts) {
    detail::SimplexParams p;
    p.pivot_tol = opts.pivot_tol;
    p.optimality_tol = opts.optimality_tol;
    p.feasibility_tol = opts.feasibility_tol;
    p.degenerate_switch = opts.degenerate_switch;
    p.refactor_every = opts.refactor_every;
    return p;
}

template <class S>
LPResult run_simplex(const LPInstance& inst, const LPOptions& opts) {
    auto lp = to_standard<S>(inst);
    detail::RevisedSimplex<S> solver(lp, params_from(opts));
    auto res = solver.run();
    if (res.status == detail::SimplexStatus::Infeasible) {
        std::ostringstream os;
        os << "infeasible: phase one leaves residual " << to_double(res.infeasibility);
        if (res.worst_row >= 0)
            os << (res.worst_row == static_cast<int>(inst.sites) ? " on the normalization row"
                                                                 : " on density row " + std::to_string(res.worst_row));
        throw Error(ErrorKind::Infeasible, os.str());
    }
    if (res.status == detail::SimplexStatus::Unbounded)
        throw Error(ErrorKind::Usage, "LP reported unbounded; the cost family is not stable");
    if (res.status == detail::SimplexStatus::IterationLimit)
        throw Error(ErrorKind::NonConvergence, "simplex iteration limit reached");

    const std::size_t m = inst.sites;
    LPResult out;
    out.exact = detail::Arith<S>::exact;
    out.iterations = res.iterations;
    out.columns = inst.columns.size();
    out.plan = GCPlan(m, inst.nmax);
    std::vector<double> w(inst.columns.size(), 0.0);
    S value(0);
    for (int r = 0; r < lp.rows; ++r) {
        int j = res.basis[r];
        if (j >= static_cast<int>(inst.columns.size())) continue;
        value += lp.cost[j] * res.x_basic[r];
        double x = to_double(res.x_basic[r]);
        if (std::abs(x) < 1e-14) x = 0.0;
        w[j] = x;
    }
    for (std::size_t j = 0; j < w.size(); ++j)
        if (w[j] > 0.0) out.plan.add(inst.columns[j], w[j]);
    out.value = to_double(value);

    auto& cert = out.certificate;
    cert.beta = to_double(res.y[m]);
    cert.phi.resize(m);
    S dual = res.y[m];
    for (std::size_t i = 0; i < m; ++i) {
        cert.phi[i] = to_double(res.y[i]);
        dual += res.y[i] * lp.rhs[i];
    }
    cert.dual_value = to_double(dual);
    cert.gap = to_double(value - dual);
    for (std::size_t j = 0; j < inst.columns.size(); ++j) {
        S lhs = res.y[m];
        for (const auto& [row, v] : lp.cols[j])
            if (row < static_cast<int>(m)) lhs += res.y[row] * v;
        double viol = to_double(lhs - lp.cost[j]);
        cert.max_violation = std::max(cert.max_violation, viol);
        if (w[j] > 0.0) cert.max_slackness = std::max(cert.max_slackness, std::abs(viol));
    }
    return out;
}

}  // namespace

std::vector<Occupation> enumerate_configurations(const DiscreteDensity& rho, int nmax, const CostFamily& cost,
                                                 const LPOptions& opts) {
    return build_instance(rho, nmax, cost, opts).columns;
}

LPInstance build_instance(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts) {
    if (nmax < 0) throw Error(ErrorKind::Usage, "nmax must be nonnegative");
    auto allowed = occupied_sites(rho);
    std::size_t live = static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), true));
    check_size(live, nmax, opts);
    return make_instance(rho, enumerate_occupations(rho.size(), nmax, allowed), nmax, cost, opts);
}

LPResult solve_instance(const LPInstance& inst, const CostFamily&, const LPOptions& opts) {
    precheck(inst);
    if (opts.exact) {
        if (inst.columns.size() > opts.exact_cap) {
            std::ostringstream os;
            os << "exact mode is limited to " << opts.exact_cap << " variables (instance has "
               << inst.columns.size() << ")";
            throw Error(ErrorKind::SizeCap, os.str());
        }
        return run_simplex<mpq_class>(inst, opts);
    }
    return run_simplex<double>(inst, opts);
}

LPResult solve_lp(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts) {
    return solve_instance(build_instance(rho, nmax, cost, opts), cost, opts);
}

PrimalSolution solve_primal(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts) {
    auto r = solve_lp(rho, nmax, cost, opts);
    return {r.value, std::move(r.plan)};
}

DualCertificate solve_dual(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts) {
    return solve_lp(rho, nmax, cost, opts).certificate;
}

LPResult solve_canonical(const DiscreteDensity& rho, int N, const CostFamily& cost, const LPOptions& opts) {
    if (N < 0) throw Error(ErrorKind::Usage, "canonical problem needs N >= 0");
    double mass = rho.total_mass();
    if (std::abs(mass - N) > 1e-9) {
        std::ostringstream os;
        os << "infeasible: canonical problem with N=" << N << " needs total mass N, got " << mass;
        throw Error(ErrorKind::Infeasible, os.str());
    }
    DiscreteDensity r = N > 0 ? rho.scaled(N / mass) : rho;
    auto allowed = occupied_sites(r);
    std::size_t live = static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), true));
    check_size(live, N, opts);
    std::vector<Occupation> occs;
    for (auto& o : enumerate_occupations(r.size(), N, allowed))
        if (particle_count(o) == N) occs.push_back(std::move(o));
    auto inst = make_instance(r, std::move(occs), N, cost, opts);
    return solve_instance(inst, cost, opts);
}

bool lp_feasible(const DiscreteDensity& rho, int nmax, const CostFamily& cost, const LPOptions& opts) {
    auto inst = build_instance(rho, nmax, cost, opts);
    try {
        precheck(inst);
    } catch (const Error&) {
        return false;
    }
    auto lp = to_standard<double>(inst);
    detail::RevisedSimplex<double> solver(lp, params_from(opts));
    return solver.run(true).status == detail::SimplexStatus::Optimal;
}

TruncationSweep truncation_sweep(const DiscreteDensity& rho, const CostFamily& cost, int n_from, int n_to,
                                 double tol, const LPOptions& opts) {
    if (n_from < std::ceil(rho.total_mass() - 1e-12))
        throw Error(ErrorKind::Usage, "truncation sweep must start at or above the total mass");
    TruncationSweep s;
    for (int N = n_from; N <= n_to; ++N) s.values.emplace_back(N, solve_lp(rho, N, cost, opts).value);
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
        double a = s.values[k].second, b = s.values[k + 1].second;
        if (b > a + tol) s.nonincreasing = false;
        if (!s.stabilized && std::abs(a - b) <= tol) {
            s.stabilized = true;
            s.stabilized_at = s.values[k].first;
        }
    }
    return s;
}

HullReport convex_hull_check(const GCPlan& plan, const DiscreteDensity& rho, const CostFamily& cost, double tol,
                             double weight_tol, const LPOptions& opts) {
    HullReport rep;
    auto lambda = plan_mass_distribution(plan);
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        if (lambda[n] <= weight_tol) continue;
        HullBlock b;
        b.n = static_cast<int>(n);
        b.weight = lambda[n];
        std::vector<double> dens(rho.size(), 0.0);
        double c = 0.0;
        for (const auto& [occ, w] : plan) {
            if (particle_count(occ) != b.n) continue;
            c += w * (n == 0 ? cost.c0 : cost(occ));
            for (std::size_t i = 0; i < occ.size(); ++i) dens[i] += occ[i] * w;
        }
        for (double& d : dens) d /= lambda[n];
        b.block_cost = c / lambda[n];
        b.canonical_value = solve_canonical(rho.with_masses(dens), b.n, cost, opts).value;
        b.ok = std::abs(b.block_cost - b.canonical_value) <= tol * std::max(1.0, std::abs(b.canonical_value));
        rep.ok = rep.ok && b.ok;
        rep.blocks.push_back(b);
    }
    return rep;
}

}  // namespace gcot
