#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "gcot/bounds.hpp"
#include "gcot/entropic.hpp"
#include "gcot/halffill.hpp"
#include "gcot/io.hpp"
#include "gcot/lp.hpp"
#include "gcot/monge1d.hpp"

using namespace gcot;

namespace {

struct Common {
    int threads = 1;
    std::uint64_t seed = 20240601;
    std::string out;
};

// JSON goes to --out when given (summary on stdout), otherwise to stdout (summary on stderr)
void emit(const Common& c, const json& doc, const std::string& summary) {
    if (c.out.empty()) {
        std::cerr << summary;
        std::cout << dump(doc);
    } else {
        write_text_file(c.out, dump(doc));
        std::cout << summary;
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Usage, "bad number list '" + s + "'");
        }
    }
    return v;
}

std::string fmt(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

std::string join(const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

DiscreteDensity diamond_density(double t) { return DiscreteDensity(2, diamond_geometry(t), std::vector<double>(6, 0.5)); }

LPOptions lp_options(const Common& c, bool exact) {
    LPOptions o;
    o.threads = c.threads;
    o.exact = exact;
    return o;
}

json diamond_report(double t, const Common& c) {
    auto rho = diamond_density(t);
    Kernel k = coulomb(3);
    auto hf = solve_half_filling(HalfFillInstance(rho.points(), k));
    auto cost = pairwise_family(k, rho);
    auto lp = solve_lp(rho, 6, cost, lp_options(c, false));
    auto can = solve_canonical(rho, 3, cost, lp_options(c, false));
    json j = document("diamond");
    j["t"] = t;
    j["points"] = rho.points();
    j["halffill"] = to_json(hf);
    j["lp_value"] = lp.value;
    j["lp_gap"] = lp.certificate.gap;
    j["lp_support"] = plan_support(lp.plan);
    j["canonical_value"] = can.value;
    j["grand_canonical_lower"] = hf.value < can.value;
    j["margin_vs_canonical"] = can.value - hf.value;
    return j;
}

std::string tcurve_for(double from, double to, int steps) {
    if (steps < 2 || !(to > from)) throw Error(ErrorKind::Usage, "tcurve needs from < to and at least 2 steps");
    std::vector<double> ts;
    for (int i = 0; i < steps; ++i) ts.push_back(from + (to - from) * i / (steps - 1));
    return tcurve_csv(tcurve(ts, coulomb(3)));
}

std::string region_csv(const RegionScan& s) {
    std::ostringstream os;
    os << "x,y,grand_canonical,valid\r\n";
    for (std::size_t j = 0; j < s.ys.size(); ++j)
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            os << fmt(s.xs[i]) << ',' << fmt(s.ys[j]) << ',' << int(s.grand_canonical[j][i]) << ','
               << int(s.valid[j][i]) << "\r\n";
    return os.str();
}

int reproduce(std::string tag, const std::string& dir) {
    namespace fs = std::filesystem;
    static const char* figures[] = {"fig1-geometry", "fig2-tcurve", "fig3-region", "fig4-multiscale"};
    if (tag == "all") {
        for (const char* f : figures) reproduce(f, dir);
        return 0;
    }
    for (std::string f : figures)
        if (f.substr(0, f.find('-')) == tag) tag = f;   // "fig2" is short for "fig2-tcurve"

    fs::path base = dir.empty() ? fs::path(".") : fs::path(dir);
    fs::create_directories(base);
    if (tag == "fig1-geometry") {
        json j = document("geometry");
        j["t"] = 0.7;
        j["points"] = diamond_geometry(0.7);
        j["labels"] = {"rhombus right", "rhombus left", "rhombus top", "rhombus bottom", "outer right", "outer left"};
        write_text_file((base / "fig1-geometry.json").string(), dump(j));
        std::cout << "wrote " << (base / "fig1-geometry.json").string() << "\n";
    } else if (tag == "fig2-tcurve") {
        write_text_file((base / "fig2-tcurve.csv").string(), tcurve_for(0.05, 0.95, 181));
        write_text_file((base / "fig2-tcurve-zoom.csv").string(), tcurve_for(0.65, 0.75, 101));
        std::cout << "wrote " << (base / "fig2-tcurve.csv").string() << " and the zoom around t = 0.7\n";
    } else if (tag == "fig3-region") {
        auto scan = region_scan(diamond_geometry(0.7), 4, coulomb(3), 0.5, 3.5, -1.5, 1.5, 121, 121);
        write_text_file((base / "fig3-region.csv").string(), region_csv(scan));
        std::cout << "wrote " << (base / "fig3-region.csv").string() << "\n";
    } else if (tag == "fig4-multiscale") {
        json j = document("multiscale_points");
        auto pts = diamond_geometry(0.7);
        j["scales"] = {5.0, 25.0};
        j["k2"] = multiscale_points(pts, 2, {5.0});
        j["k3"] = multiscale_points(pts, 3, {5.0, 25.0});
        write_text_file((base / "fig4-multiscale.json").string(), dump(j));
        std::cout << "wrote " << (base / "fig4-multiscale.json").string() << "\n";
    } else {
        throw Error(ErrorKind::Usage, "unknown figure '" + tag +
                                          "' (expected fig1-geometry, fig2-tcurve, fig3-region, fig4-multiscale, a short form such as fig2, or all)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grand-canonical optimal transport toolkit"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--threads", c.threads, "worker threads for cost evaluation")->capture_default_str();
    app.add_option("--seed", c.seed, "seed for randomized checks")->capture_default_str();

    // solve
    auto* solve = app.add_subcommand("solve", "exact truncated LP with dual certificate");
    std::string density_path, cost_spec = "coulomb", plan_path;
    int nmax = 0;
    bool exact = false;
    solve->add_option("--density", density_path, "density JSON")->required();
    solve->add_option("--cost", cost_spec, "pair cost, e.g. riesz:s=1")->capture_default_str();
    solve->add_option("--nmax", nmax, "truncation")->required();
    solve->add_flag("--exact", exact, "rational arithmetic");
    solve->add_option("--out", c.out, "result JSON");

    auto* diamond = app.add_subcommand("diamond", "six-point half-filling instance");
    double t = 0.7;
    diamond->add_option("--t", t, "half diagonal")->capture_default_str();
    diamond->add_option("--out", c.out, "result JSON");

    auto* tc = app.add_subcommand("tcurve", "extreme-point costs along the diamond family");
    double from = 0.05, to = 0.95;
    int steps = 200;
    tc->add_option("--from", from)->capture_default_str();
    tc->add_option("--to", to)->capture_default_str();
    tc->add_option("--steps", steps)->capture_default_str();
    tc->add_option("--out", c.out, "CSV file");

    auto* ms = app.add_subcommand("multiscale", "nested diamond construction");
    int k = 2;
    std::string scales = "5,25";
    ms->add_option("--k", k)->capture_default_str();
    ms->add_option("--scales", scales, "comma separated scales for levels 2..k")->capture_default_str();
    ms->add_option("--out", c.out, "result JSON");

    auto* mg = app.add_subcommand("monge1d", "1D Monge plan and LP crosscheck");
    std::string kernel_spec = "inv:r";
    int cells = 0;
    int mg_nmax = -1;
    mg->add_option("--density", density_path, "grid1d JSON")->required();
    mg->add_option("--kernel", kernel_spec)->capture_default_str();
    mg->add_option("--crosscheck", cells, "number of cells for the LP crosscheck (0 skips it)");
    mg->add_option("--nmax", mg_nmax, "LP truncation (default: integer part of the mass + 2)");
    mg->add_option("--out", c.out, "result JSON");

    auto* bd = app.add_subcommand("bounds", "support bounds");
    std::string theorem = "coulomb";
    double mass = 2.0, m_lo = 1.0, M_hi = 1.0, Z = 1.0, r = 1.0, kappa = 0.0, C = 0.5, R0 = 1.0, m2R0 = 1.0,
           Mr = 1.0;
    bd->add_option("--theorem", theorem, "bounded | triangle | coulomb | doubling")->capture_default_str();
    bd->add_option("--mass", mass)->capture_default_str();
    bd->add_option("--m", m_lo, "lower cost bound (bounded)");
    bd->add_option("--M", M_hi, "upper cost bound (bounded)");
    bd->add_option("--Z", Z, "triangle constant");
    bd->add_option("--r", r, "radius (doubling)");
    bd->add_option("--kappa", kappa, "ball mass (doubling)");
    bd->add_option("--C", C, "doubling constant");
    bd->add_option("--R0", R0);
    bd->add_option("--m2R0", m2R0, "m(2 R0)");
    bd->add_option("--Mr", Mr, "M(r)");
    bd->add_option("--out", c.out, "result JSON");

    auto* cm = app.add_subcommand("check-monotone", "c-monotonicity of a plan");
    MonotoneOptions mopts;
    cm->add_option("--plan", plan_path, "plan or LP result JSON")->required();
    cm->add_option("--density", density_path, "density JSON (when the plan file carries none)");
    cm->add_option("--cost", cost_spec)->capture_default_str();
    cm->add_option("--samples", mopts.samples)->capture_default_str();
    cm->add_option("--split-cap", mopts.split_cap)->capture_default_str();
    cm->add_option("--out", c.out, "result JSON");

    auto* en = app.add_subcommand("entropic", "Gibbs state at positive temperature");
    double temp = 0.1, tol = 1e-8;
    std::string method = "newton";
    int en_nmax = 6;
    en->add_option("--density", density_path, "density JSON (default: the diamond at t = 0.7)");
    en->add_option("--cost", cost_spec)->capture_default_str();
    en->add_option("--nmax", en_nmax)->capture_default_str();
    en->add_option("--temp", temp)->capture_default_str();
    en->add_option("--tol", tol)->capture_default_str();
    en->add_option("--method", method, "newton | fixed-point")->capture_default_str();
    en->add_option("--out", c.out, "result JSON");

    auto* ts = app.add_subcommand("tsweep", "temperature sweep");
    std::string temps = "0.01:10:log:30";
    ts->add_option("--density", density_path, "density JSON (default: the diamond at t = 0.7)");
    ts->add_option("--cost", cost_spec)->capture_default_str();
    ts->add_option("--nmax", en_nmax)->capture_default_str();
    ts->add_option("--temps", temps, "a:b:log:n, a:b:lin:n or a list")->capture_default_str();
    ts->add_option("--tol", tol)->capture_default_str();
    ts->add_option("--out", c.out, "CSV file");
    std::string json_out;
    ts->add_option("--json", json_out, "also write the sweep as JSON");

    auto* rp = app.add_subcommand("reproduce", "data behind the figures");
    std::string figure;
    rp->add_option("figure", figure, "fig1-geometry | fig2-tcurve | fig3-region | fig4-multiscale")->required();
    rp->add_option("--out", c.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*solve) {
            auto rho = density_from_json(read_json_file(density_path));
            auto cost = pairwise_family(parse_kernel(cost_spec), rho);
            auto res = solve_lp(rho, nmax, cost, lp_options(c, exact));
            json j = to_json(res);
            j["cost"] = cost_spec;
            j["nmax"] = nmax;
            j["density"] = to_json(rho);
            auto rep = validate_plan(res.plan, rho);
            j["density_residual"] = rep.density_residual;
            j["normalization_residual"] = rep.normalization_residual;
            emit(c, j,
                 "value " + fmt(res.value) + "  support " + join(plan_support(res.plan)) + "  gap " +
                     fmt(res.certificate.gap) + "  columns " + std::to_string(res.columns) + "\n");
        } else if (*diamond) {
            json j = diamond_report(t, c);
            std::string s = "half-filling value " + fmt(j["halffill"]["value"].get<double>()) + "  argmin " +
                            j["halffill"]["argmins"].dump() + "  unique " +
                            (j["halffill"]["unique"].get<bool>() ? "yes" : "no") + "\nLP value " +
                            fmt(j["lp_value"].get<double>()) + "  canonical (N=3) value " +
                            fmt(j["canonical_value"].get<double>()) + "\n";
            emit(c, j, s);
        } else if (*tc) {
            auto csv = tcurve_for(from, to, steps);
            if (c.out.empty()) std::cout << csv;
            else {
                write_text_file(c.out, csv);
                std::cout << "wrote " << steps << " rows to " << c.out << "\n";
            }
        } else if (*ms) {
            auto sc = parse_list(scales);
            auto res = multiscale_support(diamond_geometry(0.7), k, sc, coulomb(3));
            bool agrees = true;
            for (const auto& l : res.levels) agrees = agrees && l.monopole_agrees;
            emit(c, to_json(res),
                 "support {" + std::to_string(res.n_minus) + "," + std::to_string(res.n_plus) +
                     "}  scale certificate " + (res.scale_ok ? "met" : "not met at these scales") +
                     "  leading-order argmin " + (agrees ? "agrees" : "differs") + "\n");
        } else if (*mg) {
            auto grid = grid_from_json(read_json_file(density_path));
            Kernel w = parse_kernel(kernel_spec);
            auto plan = build_monge_plan(grid);
            auto mc = monge_cost(plan, w);
            json j = document("monge1d_run");
            j["plan"] = to_json(plan);
            j["kernel"] = kernel_spec;
            j["monge_cost"] = mc.value;
            j["quadrature_error"] = mc.error;
            std::string s = "monge cost " + fmt(mc.value) + "  support " + join(plan.support()) + "\n";
            if (cells > 0) {
                int nm = mg_nmax >= 0 ? mg_nmax : static_cast<int>(std::floor(grid.total_mass())) + 2;
                auto cc = crosscheck_vs_lp(grid, w, cells, nm, lp_options(c, false));
                j["crosscheck"] = to_json(cc);
                s += "LP value " + fmt(cc.lp) + "  gap " + fmt(cc.gap) + "  LP support " + join(cc.lp_support) +
                     (cc.support_ok ? "  (inside n, n+1)" : "  (OUTSIDE n, n+1)") + "\n";
            }
            emit(c, j, s);
        } else if (*bd) {
            SupportBound b;
            json extra;
            if (theorem == "bounded") b = bound_bounded(mass, m_lo, M_hi);
            else if (theorem == "triangle") b = bound_triangle(mass, Z);
            else if (theorem == "coulomb") b = bound_coulomb(mass);
            else if (theorem == "doubling") {
                auto d = bound_doubling(mass, r, kappa, C, R0, m2R0, Mr);
                b = d.bound;
                extra["diagonal_estimate"] = d.diagonal_estimate;
            } else throw Error(ErrorKind::Usage, "unknown theorem '" + theorem + "'");
            json j = to_json(b);
            j["mass"] = mass;
            for (auto& [key, v] : extra.items()) j[key] = v;
            emit(c, j, to_string(b.theorem) + ": [" + fmt(b.lo) + ", " + fmt(b.hi) + "]  integers " +
                           join(b.integers()) + "\n");
        } else if (*cm) {
            json doc = read_json_file(plan_path);
            GCPlan plan = plan_from_json(doc);
            DiscreteDensity rho;
            if (!density_path.empty()) rho = density_from_json(read_json_file(density_path));
            else if (doc.is_object() && doc.contains("density")) rho = density_from_json(doc["density"]);
            else throw Error(ErrorKind::Usage, "check-monotone needs --density when the plan file has none");
            if (rho.size() != plan.sites()) throw Error(ErrorKind::Usage, "plan and density sizes differ");
            mopts.seed = c.seed;
            auto rep = check_c_monotonicity(plan, pairwise_family(parse_kernel(cost_spec), rho), mopts);
            emit(c, to_json(rep),
                 std::string(rep.ok() ? "no violations" : "VIOLATIONS found") + "  pairs " +
                     std::to_string(rep.pairs) + "  splits " + std::to_string(rep.splits) + "  min slack " +
                     fmt(rep.min_slack) + "\n");
        } else if (*en || *ts) {
            DiscreteDensity rho = density_path.empty() ? diamond_density(0.7)
                                                       : density_from_json(read_json_file(density_path));
            auto cost = pairwise_family(parse_kernel(cost_spec), rho);
            EntropicOptions eo;
            eo.tol = tol;
            if (method == "fixed-point") eo.method = EntropicMethod::FixedPoint;
            else if (method != "newton") throw Error(ErrorKind::Usage, "unknown method '" + method + "'");
            if (*en) {
                auto s = solve_entropic(rho, en_nmax, cost, temp, eo);
                json j = to_json(s);
                j["TV"] = tv_to_poisson(s.plan, rho);
                emit(c, j, "F_T " + fmt(s.primal) + "  dual " + fmt(s.dual) + "  H " + fmt(s.H) + "  residual " +
                               fmt(s.density_residual) + "  iterations " + std::to_string(s.iterations) + "\n");
            } else {
                auto sw = temperature_sweep(rho, en_nmax, cost, parse_temperatures(temps), eo);
                if (!json_out.empty()) write_text_file(json_out, dump(to_json(sw)));
                std::string s = std::string("nondecreasing ") + (sw.nondecreasing ? "yes" : "no") + "  concave " +
                                (sw.concave ? "yes" : "no") + "  pinsker " + (sw.pinsker ? "yes" : "no") + "\n";
                if (c.out.empty()) {
                    std::cerr << s;
                    std::cout << sw.csv();
                } else {
                    write_text_file(c.out, sw.csv());
                    std::cout << s;
                }
            }
        } else if (*rp) {
            return reproduce(figure, c.out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
