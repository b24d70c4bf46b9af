#include "gcot/halffill.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gcot {

HalfFillInstance::HalfFillInstance(std::vector<Point> pts, Kernel kernel, std::vector<double> fills)
    : points(std::move(pts)), fill(std::move(fills)), c2(std::move(kernel)) {
    const std::size_t m = points.size();
    if (fill.empty()) fill.assign(m, 0.5);
    if (fill.size() != m) throw Error(ErrorKind::Usage, "half filling: one fill per site required");
    for (double f : fill)
        if (!(f > 0.0 && f < 1.0)) throw Error(ErrorKind::Usage, "half filling: fills must lie in (0,1)");
    pair.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) pair[i][j] = pair[j][i] = c2(points[i], points[j]);
}

DiscreteDensity HalfFillInstance::density() const {
    int d = points.empty() ? 1 : static_cast<int>(points[0].size());
    return DiscreteDensity(d, points, fill);
}

double set_energy(const std::vector<std::vector<double>>& pair, const std::vector<char>& in_set, bool inside) {
    double e = 0.0;
    const std::size_t m = in_set.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (static_cast<bool>(in_set[i]) != inside) continue;
        for (std::size_t j = i + 1; j < m; ++j)
            if (static_cast<bool>(in_set[j]) == inside) e += pair[i][j];
    }
    return e;
}

namespace {

std::vector<char> indicator(std::size_t m, const IndexSet& I) {
    std::vector<char> in(m, 0);
    for (int i : I) {
        if (i < 0 || static_cast<std::size_t>(i) >= m) throw Error(ErrorKind::Usage, "index set outside the sites");
        in[i] = 1;
    }
    return in;
}

void combinations(std::size_t m, std::size_t k, std::size_t start, IndexSet& cur, std::vector<IndexSet>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= m; ++i) {
        cur.push_back(static_cast<int>(i));
        combinations(m, k, i + 1, cur, out);
        cur.pop_back();
    }
}

double half_cost(const std::vector<std::vector<double>>& pair, const std::vector<char>& in) {
    return 0.5 * (set_energy(pair, in, true) + set_energy(pair, in, false));
}

}  // namespace

double extreme_point_cost(const HalfFillInstance& inst, const IndexSet& I) {
    return half_cost(inst.pair, indicator(inst.size(), I));
}

std::vector<IndexSet> extreme_point_sets(std::size_t m, std::size_t lo) {
    std::vector<IndexSet> out;
    for (std::size_t s = lo; 2 * s <= m; ++s) {
        std::vector<IndexSet> all;
        IndexSet cur;
        combinations(m, s, 0, cur, all);
        for (auto& I : all)
            if (2 * s < m || (!I.empty() && I[0] == 0)) out.push_back(std::move(I));
    }
    return out;
}

std::vector<ExtremePointValue> all_extreme_points(const HalfFillInstance& inst) {
    const std::size_t m = inst.size();
    std::vector<ExtremePointValue> out;
    for (auto& I : extreme_point_sets(m, std::min<std::size_t>(2, m / 2))) {
        double v = extreme_point_cost(inst, I);
        out.push_back({std::move(I), v});
    }
    return out;
}

HalfFillResult solve_half_filling(const HalfFillInstance& inst, double unique_margin) {
    for (double f : inst.fill)
        if (std::abs(f - 0.5) > 1e-12) throw Error(ErrorKind::Usage, "half filling: every fill must be 1/2");
    const std::size_t m = inst.size();
    auto eps = all_extreme_points(inst);
    if (eps.empty()) throw Error(ErrorKind::Usage, "half filling: no sites");
    HalfFillResult r;
    r.candidates = eps.size();
    double best = INFINITY;
    for (const auto& e : eps) best = std::min(best, e.value);
    double second = INFINITY;
    r.best_half = INFINITY;
    for (const auto& e : eps) {
        if (e.value - best <= unique_margin)
            r.argmins.push_back(e.I);
        else
            second = std::min(second, e.value);
        if (2 * e.I.size() == m) r.best_half = std::min(r.best_half, e.value);
    }
    r.value = best;
    r.unique = r.argmins.size() == 1;
    r.margin = r.unique ? second - best : 0.0;
    r.plan = GCPlan(m, static_cast<int>(m));
    auto in = indicator(m, r.argmins.front());
    Occupation a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = in[i];
        b[i] = 1 - in[i];
    }
    r.plan.add(a, 0.5);
    r.plan.add(b, 0.5);
    return r;
}

std::vector<Point> diamond_geometry(double t) {
    if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::Usage, "diamond: t must lie in (0,1)");
    double h = std::sqrt(1.0 - t * t);
    return {{t, 0.0}, {-t, 0.0}, {0.0, h}, {0.0, -h}, {t + 1.0, 0.0}, {-t - 1.0, 0.0}};
}

TCurve tcurve(const std::vector<double>& t_grid, const Kernel& c2) {
    TCurve c;
    c.sets = extreme_point_sets(6, 2);
    c.t = t_grid;
    for (double t : t_grid) {
        HalfFillInstance inst(diamond_geometry(t), c2);
        std::vector<double> row;
        for (const auto& I : c.sets) row.push_back(extreme_point_cost(inst, I));
        c.values.push_back(std::move(row));
    }
    return c;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string set_label(const IndexSet& I) {
    std::string s;
    for (std::size_t k = 0; k < I.size(); ++k) s += (k ? "-" : "") + std::to_string(I[k]);
    return s;
}

}  // namespace

std::string tcurve_csv(const TCurve& curve) {
    std::ostringstream os;
    os << "t";
    for (const auto& I : curve.sets) os << ',' << (2 * I.size() == 6 ? "can:" : "gc:") << set_label(I);
    os << ",min_value,min_set,min_kind\r\n";
    for (std::size_t r = 0; r < curve.t.size(); ++r) {
        os << num(curve.t[r]);
        std::size_t best = 0;
        for (std::size_t k = 0; k < curve.sets.size(); ++k) {
            os << ',' << num(curve.values[r][k]);
            if (curve.values[r][k] < curve.values[r][best]) best = k;
        }
        os << ',' << num(curve.values[r][best]) << ',' << set_label(curve.sets[best]) << ','
           << (2 * curve.sets[best].size() == 6 ? "canonical" : "grand-canonical") << "\r\n";
    }
    return os.str();
}

RegionScan region_scan(const std::vector<Point>& base, int moving, const Kernel& c2, double x0, double x1, double y0,
                       double y1, int nx, int ny) {
    if (moving < 0 || static_cast<std::size_t>(moving) >= base.size())
        throw Error(ErrorKind::Usage, "region scan: moving index outside the configuration");
    if (nx < 2 || ny < 2) throw Error(ErrorKind::Usage, "region scan: grid needs at least 2x2 nodes");
    RegionScan s;
    for (int i = 0; i < nx; ++i) s.xs.push_back(x0 + (x1 - x0) * i / (nx - 1));
    for (int j = 0; j < ny; ++j) s.ys.push_back(y0 + (y1 - y0) * j / (ny - 1));
    const std::size_t m = base.size();
    for (double y : s.ys) {
        std::vector<char> gc, ok;
        for (double x : s.xs) {
            auto pts = base;
            pts[moving] = {x, y};
            bool collide = false;
            for (std::size_t k = 0; k < m; ++k)
                if (static_cast<int>(k) != moving && distance(pts[k], pts[moving]) < 1e-9) collide = true;
            if (collide) {
                gc.push_back(0);
                ok.push_back(0);
                continue;
            }
            auto r = solve_half_filling(HalfFillInstance(pts, c2));
            gc.push_back(2 * r.argmins.front().size() != m);
            ok.push_back(1);
        }
        s.grand_canonical.push_back(std::move(gc));
        s.valid.push_back(std::move(ok));
    }
    return s;
}

std::vector<Point> multiscale_points(const std::vector<Point>& base, int k, const std::vector<double>& scales) {
    if (k < 1) throw Error(ErrorKind::Usage, "multiscale: k must be at least 1");
    if (static_cast<int>(scales.size()) < k - 1) throw Error(ErrorKind::Usage, "multiscale: need k-1 scales");
    for (std::size_t s = 0; s + 1 < scales.size(); ++s)
        if (!(scales[s + 1] > scales[s])) throw Error(ErrorKind::Usage, "multiscale: scales must increase");
    std::vector<Point> y = base;
    for (int level = 2; level <= k; ++level) {
        double l = scales[level - 2];
        std::vector<Point> next;
        for (const auto& X : base)
            for (const auto& p : y) {
                Point q(p.size());
                for (std::size_t c = 0; c < p.size(); ++c) q[c] = l * X[c] + p[c];
                next.push_back(std::move(q));
            }
        y = std::move(next);
    }
    return y;
}

MultiscaleResult multiscale_support(const std::vector<Point>& base, int k, const std::vector<double>& scales,
                                    const Kernel& c2) {
    const std::size_t B = base.size();
    MultiscaleResult out;
    auto first = solve_half_filling(HalfFillInstance(base, c2));
    MultiscaleLevel lvl;
    lvl.k = 1;
    lvl.occupied = first.argmins.front();
    lvl.value = first.value;
    lvl.runner_up = first.value + first.margin;
    out.levels.push_back(lvl);
    std::vector<Point> prev = base;
    std::vector<char> prev_in(B, 0);
    for (int i : lvl.occupied) prev_in[i] = 1;

    for (int level = 2; level <= k; ++level) {
        double l = scales.at(level - 2);
        auto pts = multiscale_points(base, level, scales);
        const std::size_t M = prev.size();
        const std::size_t n = pts.size();
        std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) pair[a][b] = pair[b][a] = c2(pts[a], pts[b]);

        double diam = 0.0;
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = a + 1; b < M; ++b) diam = std::max(diam, distance(prev[a], prev[b]));
        double prev_count = 0;
        for (char c : prev_in) prev_count += c;

        // cluster i takes the previous optimum (state 0) or its complement (state 1);
        // cluster 0 is pinned to state 0 since flipping every cluster gives the same cost
        const std::size_t configs = std::size_t(1) << (B - 1);
        std::vector<double> exact(configs), lead(configs), bound(configs);
        for (std::size_t code = 0; code < configs; ++code) {
            std::vector<char> in(n);
            std::vector<double> cnt(B);
            for (std::size_t i = 0; i < B; ++i) {
                bool flip = i > 0 && ((code >> (i - 1)) & 1);
                for (std::size_t j = 0; j < M; ++j) in[i * M + j] = flip ? !prev_in[j] : prev_in[j];
                cnt[i] = flip ? M - prev_count : prev_count;
            }
            exact[code] = half_cost(pair, in);
            double L = 0.0, E = 0.0;
            for (std::size_t i = 0; i < B; ++i)
                for (std::size_t j = i + 1; j < B; ++j) {
                    double d = l * distance(base[i], base[j]);
                    double pairs = 0.5 * (cnt[i] * cnt[j] + (M - cnt[i]) * (M - cnt[j]));
                    L += pairs / d;
                    E += pairs * (d > diam ? diam / (d * (d - diam)) : INFINITY);
                }
            lead[code] = L;
            bound[code] = E;
        }
        std::size_t best = 0;
        std::size_t lead_best = 0;
        for (std::size_t code = 1; code < configs; ++code) {
            if (exact[code] < exact[best]) best = code;
            if (lead[code] < lead[lead_best]) lead_best = code;
        }
        MultiscaleLevel L;
        L.k = level;
        L.scale = l;
        L.value = exact[best];
        L.runner_up = INFINITY;
        L.leading_gap = INFINITY;
        L.correction_bound = 0.0;
        L.monopole_agrees = lead_best == best;
        for (std::size_t code = 0; code < configs; ++code) {
            if (code == best) continue;
            L.runner_up = std::min(L.runner_up, exact[code]);
            double gap = lead[code] - lead[best];
            double corr = bound[code] + bound[best];
            L.leading_gap = std::min(L.leading_gap, gap);
            L.correction_bound = std::max(L.correction_bound, corr);
            if (!(gap > corr)) L.scale_ok = false;
        }
        L.cluster_state.push_back(0);
        for (std::size_t i = 1; i < B; ++i) L.cluster_state.push_back(static_cast<int>((best >> (i - 1)) & 1));
        std::vector<char> in(n);
        for (std::size_t i = 0; i < B; ++i)
            for (std::size_t j = 0; j < M; ++j) in[i * M + j] = L.cluster_state[i] ? !prev_in[j] : prev_in[j];
        for (std::size_t a = 0; a < n; ++a)
            if (in[a]) L.occupied.push_back(static_cast<int>(a));
        out.scale_ok = out.scale_ok && L.scale_ok;
        out.levels.push_back(L);
        prev = std::move(pts);
        prev_in = std::move(in);
    }
    out.points = prev;
    std::size_t occ = out.levels.back().occupied.size();
    std::size_t total = prev.size();
    out.n_minus = static_cast<int>(std::min(occ, total - occ));
    out.n_plus = static_cast<int>(std::max(occ, total - occ));
    return out;
}

}  // namespace gcot
