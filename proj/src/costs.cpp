#include "gcot/costs.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace gcot {

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

Kernel radial_kernel(std::string name, std::function<double(double)> w) {
    Kernel k;
    k.name = std::move(name);
    k.profile = w;
    k.fn = [w](const Point& a, const Point& b) { return w(distance(a, b)); };
    return k;
}

Kernel riesz(double s) {
    if (!std::isfinite(s)) throw Error(ErrorKind::Usage, "riesz: exponent must be finite");
    std::ostringstream nm;
    nm << "riesz:s=" << s;
    Kernel k;
    if (s > 0) {
        k = radial_kernel(nm.str(), [s](double r) { return r == 0.0 ? kInf : std::pow(r, -s); });
        k.inverse_profile = [s](double v) { return std::pow(v, -1.0 / s); };
        k.nonnegative = true;
    } else if (s == 0) {
        k = radial_kernel(nm.str(), [](double r) { return r == 0.0 ? kInf : -std::log(r); });
        k.inverse_profile = [](double v) { return std::exp(-v); };
    } else {
        double p = -s;
        k = radial_kernel(nm.str(), [p](double r) { return -std::pow(r, p); });
        k.inverse_profile = [p](double v) { return std::pow(-v, 1.0 / p); };
    }
    k.decreasing = true;
    return k;
}

Kernel coulomb(int d) {
    if (d < 1) throw Error(ErrorKind::Usage, "coulomb: dimension must be positive");
    Kernel k = d >= 3 ? riesz(d - 2.0) : d == 2 ? riesz(0.0) : riesz(-1.0);
    k.name = "coulomb:d=" + std::to_string(d);
    return k;
}

Kernel lennard_jones(double A, double B, double a, double b) {
    if (!(A > 0 && B > 0)) throw Error(ErrorKind::Usage, "lennard_jones: A and B must be positive");
    if (!(a > b && b > 0)) throw Error(ErrorKind::Usage, "lennard_jones: need a > b > 0");
    std::ostringstream nm;
    nm << "lj:A=" << A << ",B=" << B << ",a=" << a << ",b=" << b;
    Kernel k = radial_kernel(nm.str(), [=](double r) {
        return r == 0.0 ? kInf : A * std::pow(r, -a) - B * std::pow(r, -b);
    });
    k.min_dim_exclusive = b;
    return k;
}

Kernel log_cost() {
    Kernel k = riesz(0.0);
    k.name = "log";
    return k;
}

Kernel constant_kernel(double c) {
    std::ostringstream nm;
    nm << "const:c=" << c;
    Kernel k = radial_kernel(nm.str(), [c](double) { return c; });
    k.nonnegative = c >= 0;
    k.decreasing = true;
    return k;
}

Kernel exponential_kernel(double a) {
    if (!(a > 0)) throw Error(ErrorKind::Usage, "exp: rate must be positive");
    std::ostringstream nm;
    nm << "exp:a=" << a;
    Kernel k = radial_kernel(nm.str(), [a](double r) { return std::exp(-a * r); });
    k.inverse_profile = [a](double v) { return -std::log(v) / a; };
    k.nonnegative = true;
    k.decreasing = true;
    return k;
}

Kernel harmonic_kernel(double kk) {
    std::ostringstream nm;
    nm << "harmonic:k=" << kk;
    Kernel k = radial_kernel(nm.str(), [kk](double r) { return kk * r * r; });
    k.nonnegative = kk >= 0;
    return k;
}

namespace {

std::map<std::string, double> parse_params(const std::string& s, const std::string& spec) {
    std::map<std::string, double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            out[item] = NAN;  // bare flag such as "inv:r"
            continue;
        }
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            out[key] = v;
        } catch (const std::exception&) {
            throw Error(ErrorKind::Usage, "cost spec '" + spec + "': bad value for " + key);
        }
    }
    return out;
}

double param(const std::map<std::string, double>& p, const std::string& key, double dflt, bool required,
             const std::string& spec) {
    auto it = p.find(key);
    if (it == p.end() || std::isnan(it->second)) {
        if (required) throw Error(ErrorKind::Usage, "cost spec '" + spec + "': missing " + key);
        return dflt;
    }
    return it->second;
}

}  // namespace

Kernel parse_kernel(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    auto p = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1), spec);
    if (name == "coulomb") return coulomb(static_cast<int>(param(p, "d", 3, false, spec)));
    if (name == "riesz") return riesz(param(p, "s", 0, true, spec));
    if (name == "log") return log_cost();
    if (name == "inv") {
        Kernel k = riesz(1.0);
        k.name = "inv";
        return k;
    }
    if (name == "lj" || name == "lennard-jones")
        return lennard_jones(param(p, "A", 1, false, spec), param(p, "B", 1, false, spec),
                             param(p, "a", 12, false, spec), param(p, "b", 6, false, spec));
    if (name == "const" || name == "constant") return constant_kernel(param(p, "c", 1, false, spec));
    if (name == "zero") return constant_kernel(0.0);
    if (name == "exp") return exponential_kernel(param(p, "a", 1, false, spec));
    if (name == "harmonic") return harmonic_kernel(param(p, "k", 1, false, spec));
    throw Error(ErrorKind::Usage, "unknown cost '" + name + "'");
}

double pair_energy(const std::vector<std::vector<double>>& pair, const Occupation& occ) {
    double e = 0.0;
    const std::size_t m = occ.size();
    for (std::size_t i = 0; i < m; ++i) {
        const int oi = occ[i];
        if (!oi) continue;
        if (oi >= 2) e += 0.5 * oi * (oi - 1) * pair[i][i];
        for (std::size_t j = i + 1; j < m; ++j)
            if (occ[j]) e += static_cast<double>(oi) * occ[j] * pair[i][j];
    }
    return e;
}

CostFamily pairwise_family(const Kernel& c2, const DiscreteDensity& rho) {
    if (c2.min_dim_exclusive > 0 && !(c2.min_dim_exclusive > rho.dim()))
        throw Error(ErrorKind::Usage, c2.name + ": needs exponents a > b > dimension");
    CostFamily f;
    f.name = c2.name;
    f.kernel = c2;
    const std::size_t m = rho.size();
    f.pair.assign(m, std::vector<double>(m, 0.0));
    bool nonneg = true;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double v = c2(rho.point(i), rho.point(j));
            f.pair[i][j] = f.pair[j][i] = v;
            nonneg = nonneg && v >= 0.0;
        }
    if (nonneg) {
        f.stability = Stability{0.0, 0.0};
        f.monotone = true;
    }
    auto pair = f.pair;
    f.eval = [pair](const Occupation& occ) { return pair_energy(pair, occ); };
    return f;
}

CostFamily center_of_mass_family(std::function<double(const Point&)> h, std::function<Point(const Point&)> grad_h,
                                 const DiscreteDensity& rho) {
    CostFamily f;
    f.name = "center-of-mass";
    const int d = rho.dim();
    Point X(d, 0.0);
    for (std::size_t i = 0; i < rho.size(); ++i)
        for (int k = 0; k < d; ++k) X[k] += rho.mass(i) * rho.point(i)[k];
    Point g = grad_h(X);
    double dot = 0.0;
    for (int k = 0; k < d; ++k) dot += X[k] * g[k];
    f.c0 = h(X) - dot;
    auto pts = rho.points();
    const double c0 = f.c0;
    f.eval = [pts, h, d, c0](const Occupation& occ) {
        Point s(d, 0.0);
        bool any = false;
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (occ[i]) {
                any = true;
                for (int k = 0; k < d; ++k) s[k] += occ[i] * pts[i][k];
            }
        return any ? h(s) : c0;
    };
    return f;
}

CostFamily number_cost_family(std::vector<double> values) {
    CostFamily f;
    f.name = "number";
    f.c0 = values.empty() ? kInf : values[0];
    f.eval = [values](const Occupation& occ) {
        std::size_t n = static_cast<std::size_t>(particle_count(occ));
        return n < values.size() ? values[n] : kInf;
    };
    return f;
}

double stability_probe(const Kernel& c2, const DiscreteDensity& rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho.mass(i) == 0.0) continue;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            if (rho.mass(j) == 0.0) continue;
            s += rho.mass(i) * rho.mass(j) * c2(rho.point(i), rho.point(j));
        }
    }
    return s;
}

double constant_cost_on_plan(double c, const GCPlan& plan) {
    double second = 0.0, first = 0.0;
    auto lambda = plan_mass_distribution(plan);
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        second += static_cast<double>(n * n) * lambda[n];
        first += static_cast<double>(n) * lambda[n];
    }
    return 0.5 * c * (second - first);
}

}  // namespace gcot
