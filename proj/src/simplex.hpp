#pragma once

// Dense-basis revised simplex for equality-form LPs  min c.x, A x = b, x >= 0,
// with b >= 0 and few rows. Templated on the scalar so the same code runs in
// double precision and in exact rational arithmetic.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace gcot::detail {

template <class S>
struct StandardLP {
    int rows = 0;
    std::vector<std::vector<std::pair<int, S>>> cols;
    std::vector<S> cost;
    std::vector<S> rhs;
};

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <class S>
struct SimplexResult {
    SimplexStatus status = SimplexStatus::IterationLimit;
    std::vector<int> basis;   // column per row; values >= ncols are artificials
    std::vector<S> x_basic;
    std::vector<S> y;         // simplex multipliers c_B B^{-1}
    S infeasibility{};
    int worst_row = -1;
    int iterations = 0;
};

struct SimplexParams {
    double pivot_tol = 1e-10;
    double optimality_tol = 1e-11;
    double feasibility_tol = 1e-9;
    int degenerate_switch = 50;
    int refactor_every = 64;
    long max_iterations = 0;  // 0 = automatic
};

template <class S>
struct Arith;

template <>
struct Arith<double> {
    static constexpr bool exact = false;
    static bool negative(double v, double tol) { return v < -tol; }
    static bool positive(double v, double tol) { return v > tol; }
    static double abs(double v) { return std::fabs(v); }
    static bool tie(double a, double b) { return std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(b)); }
};

template <>
struct Arith<mpq_class> {
    static constexpr bool exact = true;
    static bool negative(const mpq_class& v, double) { return sgn(v) < 0; }
    static bool positive(const mpq_class& v, double) { return sgn(v) > 0; }
    static mpq_class abs(const mpq_class& v) { return ::abs(v); }
    static bool tie(const mpq_class& a, const mpq_class& b) { return a == b; }
};

template <class S>
class RevisedSimplex {
public:
    RevisedSimplex(const StandardLP<S>& lp, const SimplexParams& p)
        : lp_(lp), p_(p), R_(lp.rows), N_(static_cast<int>(lp.cols.size())) {}

    SimplexResult<S> run(bool feasibility_only = false) {
        SimplexResult<S> out;
        basis_.resize(R_);
        in_basis_.assign(N_ + R_, 0);
        for (int r = 0; r < R_; ++r) {
            basis_[r] = N_ + r;
            in_basis_[N_ + r] = 1;
        }
        binv_.assign(static_cast<std::size_t>(R_) * R_, S(0));
        for (int r = 0; r < R_; ++r) at(r, r) = S(1);
        xb_ = lp_.rhs;
        long limit = p_.max_iterations > 0 ? p_.max_iterations : 50L * (N_ + R_) + 10000;

        // phase one: minimize the sum of artificials
        auto st = iterate(true, limit);
        out.iterations = iters_;
        S infeas(0);
        int worst = -1;
        S worst_val(0);
        for (int r = 0; r < R_; ++r)
            if (basis_[r] >= N_) {
                infeas += xb_[r];
                if (worst < 0 || xb_[r] > worst_val) {
                    worst = lp_.rows > 0 ? basis_[r] - N_ : -1;
                    worst_val = xb_[r];
                }
            }
        out.infeasibility = infeas;
        out.worst_row = worst;
        if (st == SimplexStatus::IterationLimit) {
            out.status = st;
            return out;
        }
        if (Arith<S>::positive(infeas, p_.feasibility_tol)) {
            out.status = SimplexStatus::Infeasible;
            return out;
        }
        if (feasibility_only) {
            out.status = SimplexStatus::Optimal;
            return out;
        }
        drive_out_artificials();
        st = iterate(false, limit);
        out.status = st;
        out.iterations = iters_;
        out.basis = basis_;
        out.x_basic = xb_;
        out.y = duals(false);
        return out;
    }

private:
    const StandardLP<S>& lp_;
    SimplexParams p_;
    int R_, N_;
    std::vector<int> basis_;
    std::vector<char> in_basis_;
    std::vector<S> binv_;
    std::vector<S> xb_;
    int iters_ = 0;
    int since_refactor_ = 0;

    S& at(int r, int c) { return binv_[static_cast<std::size_t>(r) * R_ + c]; }

    S cost_of(int j, bool phase1) const {
        if (j >= N_) return phase1 ? S(1) : S(0);
        return phase1 ? S(0) : lp_.cost[j];
    }

    std::vector<S> duals(bool phase1) {
        std::vector<S> y(R_, S(0));
        for (int r = 0; r < R_; ++r) {
            S cb = cost_of(basis_[r], phase1);
            if (cb == S(0)) continue;
            for (int k = 0; k < R_; ++k) y[k] += cb * at(r, k);
        }
        return y;
    }

    S reduced_cost(int j, const std::vector<S>& y, bool phase1) const {
        S d = cost_of(j, phase1);
        for (const auto& [row, v] : lp_.cols[j]) d -= y[row] * v;
        return d;
    }

    std::vector<S> ftran(int j) {
        std::vector<S> u(R_, S(0));
        if (j >= N_) {
            for (int r = 0; r < R_; ++r) u[r] = at(r, j - N_);
            return u;
        }
        for (const auto& [row, v] : lp_.cols[j])
            for (int r = 0; r < R_; ++r) u[r] += at(r, row) * v;
        return u;
    }

    void pivot(int r, int q, const std::vector<S>& u) {
        S piv = u[r];
        S theta = xb_[r] / piv;
        for (int i = 0; i < R_; ++i)
            if (i != r) xb_[i] -= theta * u[i];
        xb_[r] = theta;
        for (int k = 0; k < R_; ++k) at(r, k) /= piv;
        for (int i = 0; i < R_; ++i) {
            if (i == r || u[i] == S(0)) continue;
            S f = u[i];
            for (int k = 0; k < R_; ++k) at(i, k) -= f * at(r, k);
        }
        in_basis_[basis_[r]] = 0;
        basis_[r] = q;
        in_basis_[q] = 1;
        ++iters_;
        ++since_refactor_;
    }

    // Rebuild B^{-1} and x_B from scratch (Gauss-Jordan, partial pivoting).
    void refactor() {
        std::vector<S> B(static_cast<std::size_t>(R_) * R_, S(0));
        for (int c = 0; c < R_; ++c) {
            int j = basis_[c];
            if (j >= N_)
                B[static_cast<std::size_t>(j - N_) * R_ + c] = S(1);
            else
                for (const auto& [row, v] : lp_.cols[j]) B[static_cast<std::size_t>(row) * R_ + c] = v;
        }
        std::vector<S> inv(static_cast<std::size_t>(R_) * R_, S(0));
        for (int r = 0; r < R_; ++r) inv[static_cast<std::size_t>(r) * R_ + r] = S(1);
        auto b = [&](int r, int c) -> S& { return B[static_cast<std::size_t>(r) * R_ + c]; };
        auto iv = [&](int r, int c) -> S& { return inv[static_cast<std::size_t>(r) * R_ + c]; };
        for (int c = 0; c < R_; ++c) {
            int best = c;
            for (int r = c + 1; r < R_; ++r)
                if (Arith<S>::abs(b(r, c)) > Arith<S>::abs(b(best, c))) best = r;
            if (b(best, c) == S(0)) return;  // singular; keep the product-form inverse
            if (best != c)
                for (int k = 0; k < R_; ++k) {
                    std::swap(b(best, k), b(c, k));
                    std::swap(iv(best, k), iv(c, k));
                }
            S piv = b(c, c);
            for (int k = 0; k < R_; ++k) {
                b(c, k) /= piv;
                iv(c, k) /= piv;
            }
            for (int r = 0; r < R_; ++r) {
                if (r == c || b(r, c) == S(0)) continue;
                S f = b(r, c);
                for (int k = 0; k < R_; ++k) {
                    b(r, k) -= f * b(c, k);
                    iv(r, k) -= f * iv(c, k);
                }
            }
        }
        binv_ = std::move(inv);
        for (int r = 0; r < R_; ++r) {
            S s(0);
            for (int k = 0; k < R_; ++k) s += at(r, k) * lp_.rhs[k];
            xb_[r] = s;
        }
        since_refactor_ = 0;
    }

    SimplexStatus iterate(bool phase1, long limit) {
        bool bland = false;
        int degenerate_run = 0;
        bool verified = false;
        while (true) {
            if (iters_ >= limit) return SimplexStatus::IterationLimit;
            if (!Arith<S>::exact && since_refactor_ >= p_.refactor_every) refactor();
            auto y = duals(phase1);
            int q = -1;
            S best(0);
            for (int j = 0; j < N_; ++j) {
                if (in_basis_[j]) continue;
                S d = reduced_cost(j, y, phase1);
                if (!Arith<S>::negative(d, p_.optimality_tol)) continue;
                if (bland) {
                    q = j;
                    break;
                }
                if (q < 0 || d < best) {
                    q = j;
                    best = d;
                }
            }
            if (q < 0) {
                // confirm optimality on a fresh factorization before stopping
                if (!Arith<S>::exact && !verified && since_refactor_ > 0) {
                    refactor();
                    verified = true;
                    continue;
                }
                return SimplexStatus::Optimal;
            }
            verified = false;
            auto u = ftran(q);
            int r = -1;
            S theta(0);
            for (int i = 0; i < R_; ++i) {
                if (!Arith<S>::positive(u[i], p_.pivot_tol)) continue;
                S xi = xb_[i];
                if (Arith<S>::negative(xi, 0.0)) xi = S(0);
                S t = xi / u[i];
                if (r < 0 || t < theta) {
                    r = i;
                    theta = t;
                    continue;
                }
                if (Arith<S>::tie(t, theta)) {
                    bool take = bland ? basis_[i] < basis_[r] : Arith<S>::abs(u[i]) > Arith<S>::abs(u[r]);
                    // artificials leave first when tied
                    if (basis_[i] >= N_ && basis_[r] < N_) take = true;
                    if (basis_[r] >= N_ && basis_[i] < N_) take = false;
                    if (take) {
                        r = i;
                        theta = t;
                    }
                }
            }
            if (r < 0) return SimplexStatus::Unbounded;
            bool degenerate = !Arith<S>::positive(theta, 1e-13);
            degenerate_run = degenerate ? degenerate_run + 1 : 0;
            if (degenerate_run >= p_.degenerate_switch) bland = true;
            pivot(r, q, u);
        }
    }

    void drive_out_artificials() {
        for (int r = 0; r < R_; ++r) {
            if (basis_[r] < N_) continue;
            int best = -1;
            S best_abs(0);
            for (int j = 0; j < N_; ++j) {
                if (in_basis_[j]) continue;
                S alpha(0);
                for (const auto& [row, v] : lp_.cols[j]) alpha += at(r, row) * v;
                S a = Arith<S>::abs(alpha);
                if (Arith<S>::positive(a, p_.pivot_tol) && (best < 0 || a > best_abs)) {
                    best = j;
                    best_abs = a;
                }
            }
            if (best < 0) continue;  // redundant row: the artificial stays at zero
            auto u = ftran(best);
            xb_[r] = S(0);
            pivot(r, best, u);
        }
        if (!Arith<S>::exact) refactor();
    }
};

}  // namespace gcot::detail
