#include "gcot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gcot {

std::string to_string(BoundTheorem t) {
    switch (t) {
        case BoundTheorem::Bounded: return "bounded";
        case BoundTheorem::Triangle: return "triangle";
        case BoundTheorem::Doubling: return "doubling";
        case BoundTheorem::Coulomb: return "coulomb";
    }
    return "?";
}

std::vector<int> SupportBound::integers() const {
    if (exact) return *exact;
    std::vector<int> out;
    int a = std::max(0, static_cast<int>(std::ceil(lo - 1e-9)));
    int b = static_cast<int>(std::floor(hi + 1e-9));
    for (int n = a; n <= b; ++n) out.push_back(n);
    return out;
}

bool SupportBound::admits(int n) const {
    auto s = integers();
    return std::find(s.begin(), s.end(), n) != s.end();
}

bool SupportBound::contains(const SupportBound& other) const {
    for (int n : other.integers())
        if (!admits(n)) return false;
    return true;
}

namespace {

SupportBound at_most_one(BoundTheorem t) {
    SupportBound b;
    b.lo = 0.0;
    b.hi = 1.0;
    b.theorem = t;
    b.exact = std::vector<int>{0, 1};
    return b;
}

void check_mass(double mass) {
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw Error(ErrorKind::Usage, "bound: mass must be finite and >= 0");
}

}  // namespace

SupportBound bound_bounded(double mass, double m_lo, double M_hi) {
    check_mass(mass);
    if (!(m_lo > 0.0 && m_lo <= M_hi && std::isfinite(M_hi)))
        throw Error(ErrorKind::Usage, "bounded cost bound needs 0 < m <= M < inf");
    if (mass <= 1.0) return at_most_one(BoundTheorem::Bounded);
    SupportBound b;
    b.theorem = BoundTheorem::Bounded;
    b.lo = (m_lo / M_hi) * std::floor(mass);
    b.hi = 1.0 + (M_hi / m_lo) * (std::ceil(mass) - 1.0);
    return b;
}

double riesz_triangle_constant(double s) { return std::max(1.0, std::pow(2.0, s - 1.0)); }

SupportBound bound_triangle(double mass, double Z) {
    check_mass(mass);
    if (!(Z > 0.0)) throw Error(ErrorKind::Usage, "triangle bound needs Z > 0");
    if (mass <= 1.0) return at_most_one(BoundTheorem::Triangle);
    SupportBound b;
    b.theorem = BoundTheorem::Triangle;
    b.lo = (std::floor(mass) + 1.0) / (2.0 * Z + 1.0);
    b.hi = (2.0 * Z + 1.0) * (std::ceil(mass) - 1.0);
    return b;
}

SupportBound bound_coulomb(double mass) {
    check_mass(mass);
    if (mass <= 1.0) return at_most_one(BoundTheorem::Coulomb);
    SupportBound b;
    b.theorem = BoundTheorem::Coulomb;
    if (std::abs(mass - 2.0) <= 1e-12) {
        b.lo = b.hi = 2.0;
        b.exact = std::vector<int>{2};
        return b;
    }
    double fl = std::floor(mass), ce = std::ceil(mass);
    b.lo = fl - 0.5 * std::sqrt(8.0 * fl + 9.0) + 1.5;
    b.hi = ce + 0.5 * std::sqrt(8.0 * ce - 7.0) - 0.5;
    return b;
}

bool coulomb_pair_admissible(int N, int K) {
    long d = static_cast<long>(N) - K;
    return d * d <= static_cast<long>(N) + K;
}

DoublingBound bound_doubling(double mass, double r, double kappa, double C, double R0, double m_of_2R0,
                             double M_of_r, const Kernel* kernel) {
    check_mass(mass);
    if (!(kappa < 1.0)) throw Error(ErrorKind::Usage, "doubling bound needs kappa < 1");
    if (!(kappa >= 0.0 && r > 0.0 && C > 0.0 && R0 >= 0.0 && m_of_2R0 > 0.0 && M_of_r > 0.0))
        throw Error(ErrorKind::Usage, "doubling bound needs positive inputs");
    DoublingBound out;
    out.bound.theorem = BoundTheorem::Doubling;
    out.bound.lo = 0.0;
    out.bound.hi = 1.0 + mass * std::max(2.0 / (C * C), M_of_r / ((1.0 - kappa) * m_of_2R0));
    out.diagonal_estimate = mass * M_of_r / (1.0 - kappa);
    if (kernel && kernel->decreasing && kernel->inverse_profile)
        out.min_separation = kernel->inverse_profile(out.diagonal_estimate);
    return out;
}

DoublingInputs doubling_inputs(const DiscreteDensity& rho, double r, const Kernel& kernel) {
    if (!kernel.radial() || !kernel.decreasing)
        throw Error(ErrorKind::Usage, "doubling inputs need a radial decreasing kernel");
    DoublingInputs in;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j)
            if (distance(rho.point(i), rho.point(j)) < r) s += rho.mass(j);
        in.kappa = std::max(in.kappa, s);
    }
    Point c = rho.barycenter();
    std::vector<std::pair<double, double>> dm;
    for (std::size_t i = 0; i < rho.size(); ++i) dm.emplace_back(distance(rho.point(i), c), rho.mass(i));
    std::sort(dm.begin(), dm.end());
    in.R0 = 0.0;
    // mass strictly outside the closed ball of radius R
    auto outside_of = [&](double R) {
        double s = 0.0;
        for (const auto& [d, w] : dm)
            if (d > R) s += w;
        return s;
    };
    if (outside_of(0.0) > 0.5) {
        for (const auto& [d, w] : dm) {
            if (outside_of(d) <= 0.5) {
                in.R0 = d;
                break;
            }
        }
    }
    in.m_of_2R0 = kernel.profile(2.0 * in.R0);
    in.M_of_r = kernel.profile(r);
    return in;
}

namespace {

std::vector<int> particles(const Occupation& o) {
    std::vector<int> p;
    for (std::size_t i = 0; i < o.size(); ++i)
        for (int c = 0; c < o[i]; ++c) p.push_back(static_cast<int>(i));
    return p;
}

class SplitEvaluator {
public:
    SplitEvaluator(const CostFamily& cost, const Occupation& X, const Occupation& Y)
        : cost_(cost), m_(X.size()) {
        px_ = particles(X);
        py_ = particles(Y);
        N_ = px_.size();
        K_ = py_.size();
        all_ = px_;
        all_.insert(all_.end(), py_.begin(), py_.end());
        cX_ = value(X);
        cY_ = value(Y);
        fast_ = cost.pairwise() && cost.c0 == 0.0;
        if (fast_) {
            const std::size_t n = all_.size();
            C_.assign(n * n, 0.0);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                    if (p != q) C_[p * n + q] = cost.pair[all_[p]][all_[q]];
            rowX_.assign(n, 0.0);
            rowY_.assign(n, 0.0);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q) (q < N_ ? rowX_ : rowY_)[p] += C_[p * n + q];
            T_ = 0.0;
            for (std::size_t p = 0; p < N_; ++p) T_ += rowY_[p];
        }
    }

    std::size_t N() const { return N_; }
    std::size_t K() const { return K_; }
    std::size_t total() const { return N_ + K_; }

    // slack for the split whose first configuration holds the particles flagged in `mask`
    double slack(const std::vector<char>& mask) const {
        if (fast_) {
            const std::size_t n = all_.size();
            double s = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) {
                    double c = C_[p * n + q];
                    bool px = p < N_, qx = q < N_;
                    bool together = mask[p] == mask[q];
                    if (px != qx) {
                        if (together) s += c;
                    } else if (!together) {
                        s -= c;
                    }
                }
            return s;
        }
        Occupation a(m_, 0), b(m_, 0);
        for (std::size_t p = 0; p < all_.size(); ++p) (mask[p] ? a : b)[all_[p]] += 1;
        return value(a) + value(b) - cX_ - cY_;
    }

    // I and J of size at most one (complements are covered by symmetry of the split)
    double small_slack(int a, int b, bool J_complement) const {
        if (!fast_) {
            std::vector<char> mask(total(), 0);
            if (a >= 0) mask[a] = 1;
            if (J_complement)
                for (std::size_t q = N_; q < total(); ++q) mask[q] = 1;
            if (b >= 0) mask[N_ + b] ^= 1;
            return slack(mask);
        }
        const std::size_t n = all_.size();
        double cross_IJ = 0.0, cross_IcJc = T_, xx = 0.0, yy = 0.0;
        // cross(X_I, Y_J) and cross(X_{I^c}, Y_{J^c}) = T - cross(X_I,Y) - cross(X,Y_J) + cross(X_I,Y_J)
        double xI_Y = a >= 0 ? rowY_[a] : 0.0;
        double X_YJ = 0.0;
        if (J_complement) {
            X_YJ = T_;
            if (b >= 0) X_YJ -= rowX_[N_ + b];
        } else if (b >= 0) {
            X_YJ = rowX_[N_ + b];
        }
        if (a >= 0) {
            if (J_complement) {
                cross_IJ = rowY_[a];
                if (b >= 0) cross_IJ -= C_[a * n + N_ + b];
            } else if (b >= 0) {
                cross_IJ = C_[a * n + N_ + b];
            }
            xx = rowX_[a];
        }
        cross_IcJc = T_ - xI_Y - X_YJ + cross_IJ;
        if (b >= 0) yy = rowY_[N_ + b];
        return cross_IJ + cross_IcJc - xx - yy;
    }

private:
    double value(const Occupation& o) const { return particle_count(o) == 0 ? cost_.c0 : cost_(o); }

    const CostFamily& cost_;
    std::size_t m_;
    std::vector<int> px_, py_, all_;
    std::size_t N_ = 0, K_ = 0;
    double cX_ = 0.0, cY_ = 0.0;
    bool fast_ = false;
    std::vector<double> C_, rowX_, rowY_;
    double T_ = 0.0;
};

}  // namespace

MonotoneReport check_c_monotonicity(const GCPlan& plan, const CostFamily& cost, const MonotoneOptions& opts) {
    MonotoneReport rep;
    std::vector<Occupation> supp;
    for (const auto& [occ, w] : plan)
        if (w > opts.support_tol) supp.push_back(occ);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < supp.size(); ++a)
        for (std::size_t b = a; b < supp.size(); ++b) pairs.emplace_back(a, b);
    std::mt19937_64 rng(opts.seed);
    if (pairs.size() > opts.samples) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(opts.samples);
        std::sort(pairs.begin(), pairs.end());
    }
    auto record = [&](const SplitEvaluator& ev, const Occupation& X, const Occupation& Y, double s,
                      const std::vector<char>& mask) {
        ++rep.splits;
        if (std::isnan(s)) s = INFINITY;
        rep.min_slack = std::min(rep.min_slack, s);
        if (s < -opts.tol) {
            MonotoneViolation v;
            v.X = X;
            v.Y = Y;
            v.slack = s;
            for (std::size_t p = 0; p < ev.total(); ++p)
                if (mask[p]) (p < ev.N() ? v.I : v.J).push_back(static_cast<int>(p < ev.N() ? p : p - ev.N()));
            rep.violations.push_back(std::move(v));
        }
    };
    for (const auto& [a, b] : pairs) {
        const Occupation& X = supp[a];
        const Occupation& Y = supp[b];
        SplitEvaluator ev(cost, X, Y);
        const std::size_t n = ev.total();
        if (n == 0) continue;
        ++rep.pairs;
        std::vector<char> mask(n, 0);
        if (n <= opts.split_cap) {
            // the split and its complement give the same inequality: keep the last particle out
            const std::uint64_t count = std::uint64_t(1) << (n - 1);
            for (std::uint64_t code = 0; code < count; ++code) {
                for (std::size_t p = 0; p < n; ++p) mask[p] = (code >> p) & 1;
                record(ev, X, Y, ev.slack(mask), mask);
            }
            continue;
        }
        // beyond the cap: every split moving at most one particle of each side, then random splits
        for (int ia = -1; ia < static_cast<int>(ev.N()); ++ia)
            for (int ib = -1; ib < static_cast<int>(ev.K()); ++ib)
                for (int comp = 0; comp < 2; ++comp) {
                    double s = ev.small_slack(ia, ib, comp == 1);
                    std::fill(mask.begin(), mask.end(), 0);
                    if (ia >= 0) mask[ia] = 1;
                    if (comp)
                        for (std::size_t q = ev.N(); q < n; ++q) mask[q] = 1;
                    if (ib >= 0) mask[ev.N() + ib] ^= 1;
                    record(ev, X, Y, s, mask);
                }
        for (std::size_t t = 0; t < opts.samples; ++t) {
            for (std::size_t p = 0; p < n; ++p) mask[p] = static_cast<char>(rng() >> 63);
            record(ev, X, Y, ev.slack(mask), mask);
        }
    }
    if (rep.splits == 0) rep.min_slack = 0.0;
    return rep;
}

double charged_cost(const std::vector<Point>& X, const std::vector<Point>& Y, const Kernel& c2) {
    double w = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j) w += c2(X[i], X[j]);
    for (std::size_t i = 0; i < Y.size(); ++i)
        for (std::size_t j = i + 1; j < Y.size(); ++j) w += c2(Y[i], Y[j]);
    for (const auto& x : X)
        for (const auto& y : Y) w -= c2(x, y);
    return w;
}

}  // namespace gcot
