#include "gcot/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gcot {

namespace {

// JSON has no infinity; encode non-finite values as strings
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Usage, "schema error: " + what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object()) bad("expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing field '") + key + "'");
    return *it;
}

double as_double(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
    }
    bad(where + " must be a number");
}

int as_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) bad(where + " must be an integer");
    return j.get<int>();
}

const json& body(const json& j, const char* kind) {
    if (j.is_object() && j.contains("schema")) {
        if (!j["schema"].is_string() || j["schema"].get<std::string>() != kSchema)
            bad(std::string("unsupported schema (expected ") + kSchema + ")");
        if (j.contains("kind") && j["kind"].is_string() && j["kind"].get<std::string>() != kind) {
            // results embed the object under its kind
            if (j.contains(kind)) return j[kind];
            bad(std::string("expected a document of kind '") + kind + "'");
        }
    }
    return j;
}

}  // namespace

json document(const std::string& kind) {
    json j;
    j["schema"] = kSchema;
    j["kind"] = kind;
    return j;
}

json to_json(const DiscreteDensity& rho) {
    json j = document("density");
    j["dim"] = rho.dim();
    j["points"] = rho.points();
    j["masses"] = rho.masses();
    return j;
}

json to_json(const GCPlan& plan) {
    json j = document("plan");
    j["sites"] = plan.sites();
    j["nmax"] = plan.nmax();
    json entries = json::array();
    for (const auto& [occ, w] : plan) entries.push_back(json{{"occ", occ}, {"w", w}});
    j["entries"] = entries;
    return j;
}

json to_json(const GridDensity1D& rho) {
    json j = document("grid1d");
    j["breakpoints"] = rho.breakpoints();
    j["densities"] = rho.densities();
    return j;
}

json to_json(const DualCertificate& c) {
    json j;
    j["beta"] = num(c.beta);
    j["phi"] = c.phi;
    j["dual_value"] = num(c.dual_value);
    j["gap"] = num(c.gap);
    j["max_violation"] = num(c.max_violation);
    j["max_slackness"] = num(c.max_slackness);
    return j;
}

json to_json(const LPResult& r) {
    json j = document("lp_result");
    j["value"] = num(r.value);
    j["exact"] = r.exact;
    j["columns"] = r.columns;
    j["iterations"] = r.iterations;
    j["support"] = plan_support(r.plan);
    j["mass_distribution"] = plan_mass_distribution(r.plan);
    j["certificate"] = to_json(r.certificate);
    j["plan"] = to_json(r.plan);
    return j;
}

json to_json(const HalfFillResult& r) {
    json j = document("halffill");
    j["value"] = num(r.value);
    j["argmins"] = r.argmins;
    j["unique"] = r.unique;
    j["margin"] = num(r.margin);
    j["best_half"] = num(r.best_half);
    j["candidates"] = r.candidates;
    j["plan"] = to_json(r.plan);
    return j;
}

json to_json(const MultiscaleResult& r) {
    json j = document("multiscale");
    j["support"] = {r.n_minus, r.n_plus};
    j["scale_ok"] = r.scale_ok;
    json lv = json::array();
    for (const auto& l : r.levels) {
        json x;
        x["k"] = l.k;
        x["scale"] = l.scale;
        x["occupied"] = l.occupied;
        x["cluster_state"] = l.cluster_state;
        x["value"] = num(l.value);
        x["runner_up"] = num(l.runner_up);
        x["leading_gap"] = num(l.leading_gap);
        x["correction_bound"] = num(l.correction_bound);
        x["monopole_agrees"] = l.monopole_agrees;
        x["scale_ok"] = l.scale_ok;
        lv.push_back(x);
    }
    j["levels"] = lv;
    j["points"] = r.points;
    return j;
}

json to_json(const SupportBound& b) {
    json j = document("support_bound");
    j["theorem"] = to_string(b.theorem);
    j["lo"] = num(b.lo);
    j["hi"] = num(b.hi);
    j["integers"] = b.integers();
    j["exact"] = b.exact.has_value();
    return j;
}

json to_json(const MonotoneReport& r) {
    json j = document("monotonicity");
    j["ok"] = r.ok();
    j["pairs"] = r.pairs;
    j["splits"] = r.splits;
    j["min_slack"] = num(r.min_slack);
    json v = json::array();
    for (const auto& x : r.violations)
        v.push_back(json{{"X", x.X}, {"Y", x.Y}, {"I", x.I}, {"J", x.J}, {"slack", num(x.slack)}});
    j["violations"] = v;
    return j;
}

json to_json(const MongePlan1D& p) {
    json j = document("monge1d");
    j["n"] = p.n;
    j["eta"] = p.eta;
    j["cuts"] = p.cuts;
    json b = json::array();
    for (const auto& blk : p.blocks)
        b.push_back(json{{"particles", blk.particles}, {"u_lo", blk.u_lo}, {"u_hi", blk.u_hi}, {"weight", blk.weight()}});
    j["blocks"] = b;
    j["support"] = p.support();
    j["density"] = to_json(p.rho);
    return j;
}

json to_json(const CrosscheckReport& r) {
    json j = document("monge1d_crosscheck");
    j["monge"] = num(r.monge);
    j["lp"] = num(r.lp);
    j["gap"] = num(r.gap);
    j["lp_support"] = r.lp_support;
    j["expected_support"] = r.expected_support;
    j["support_ok"] = r.support_ok;
    j["atoms"] = to_json(r.atoms);
    j["lp_result"] = to_json(r.lp_result);
    return j;
}

json to_json(const GibbsSolution& s) {
    json j = document("gibbs");
    j["T"] = s.T;
    j["psi"] = s.psi;
    j["logZ"] = num(s.logZ);
    j["Z"] = num(s.Z);
    j["F"] = num(s.F);
    j["cost"] = num(s.cost);
    j["H"] = num(s.H);
    j["primal"] = num(s.primal);
    j["dual"] = num(s.dual);
    j["density_residual"] = num(s.density_residual);
    j["iterations"] = s.iterations;
    j["method"] = s.method;
    j["density"] = s.density;
    j["plan"] = to_json(s.plan);
    return j;
}

json to_json(const TemperatureSweep& s) {
    json j = document("temperature_sweep");
    j["nondecreasing"] = s.nondecreasing;
    j["concave"] = s.concave;
    j["pinsker"] = s.pinsker;
    j["max_slope_increase"] = num(s.max_slope_increase);
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back(json{{"T", r.T},
                            {"F", num(r.F)},
                            {"H", num(r.H)},
                            {"TV", num(r.TV)},
                            {"cost", num(r.cost)},
                            {"residual", num(r.residual)},
                            {"pinsker", r.pinsker}});
    j["rows"] = rows;
    return j;
}

json to_json(const EntropyReport& r) {
    json j = document("entropy");
    j["S"] = num(r.S);
    j["H"] = num(r.H);
    j["growth_lhs"] = num(r.growth_lhs);
    j["growth_rhs"] = num(r.growth_rhs);
    j["entropy_bound"] = num(r.entropy_bound);
    j["decomposition_residual"] = num(r.decomposition_residual);
    j["growth_ok"] = r.growth_ok;
    j["max_entropy_ok"] = r.max_entropy_ok;
    return j;
}

DiscreteDensity density_from_json(const json& doc) {
    const json& j = body(doc, "density");
    const json& pts = field(j, "points");
    const json& ms = field(j, "masses");
    if (!pts.is_array()) bad("'points' must be an array");
    if (!ms.is_array()) bad("'masses' must be an array");
    int dim = j.contains("dim") ? as_int(j["dim"], "'dim'") : -1;
    std::vector<Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const json& p = pts[i];
        Point x;
        if (p.is_number()) {
            x.push_back(p.get<double>());
        } else if (p.is_array()) {
            for (const auto& c : p) x.push_back(as_double(c, "point coordinate"));
        } else {
            bad("point " + std::to_string(i) + " must be a number or an array");
        }
        if (dim < 0) dim = static_cast<int>(x.size());
        if (static_cast<int>(x.size()) != dim) bad("point " + std::to_string(i) + " has the wrong dimension");
        points.push_back(std::move(x));
    }
    std::vector<double> masses;
    for (const auto& m : ms) masses.push_back(as_double(m, "mass"));
    if (dim < 1) dim = 1;
    return DiscreteDensity(dim, std::move(points), std::move(masses));
}

GCPlan plan_from_json(const json& doc) {
    const json& j = body(doc, "plan");
    const json& entries = field(j, "entries");
    if (!entries.is_array()) bad("'entries' must be an array");
    std::size_t sites = j.contains("sites") ? static_cast<std::size_t>(as_int(j["sites"], "'sites'")) : 0;
    if (sites == 0 && !entries.empty()) {
        const json& o = field(entries[0], "occ");
        if (!o.is_array()) bad("'occ' must be an array");
        sites = o.size();
    }
    int nmax = 0;
    std::vector<std::pair<Occupation, double>> items;
    for (const auto& e : entries) {
        const json& o = field(e, "occ");
        if (!o.is_array() || o.size() != sites) bad("every 'occ' needs one count per site");
        Occupation occ;
        for (const auto& c : o) {
            int k = as_int(c, "occupation count");
            if (k < 0) bad("occupation counts must be nonnegative");
            occ.push_back(k);
        }
        double w = as_double(field(e, "w"), "'w'");
        if (!(w >= 0.0) || !std::isfinite(w)) bad("weights must be finite and nonnegative");
        nmax = std::max(nmax, particle_count(occ));
        items.emplace_back(std::move(occ), w);
    }
    if (j.contains("nmax")) nmax = std::max(nmax, as_int(j["nmax"], "'nmax'"));
    GCPlan plan(sites, nmax);
    for (const auto& [occ, w] : items) plan.add(occ, w);
    return plan;
}

GridDensity1D grid_from_json(const json& doc) {
    const json& j = body(doc, "grid1d");
    const json& b = field(j, "breakpoints");
    const json& d = field(j, "densities");
    if (!b.is_array() || !d.is_array()) bad("'breakpoints' and 'densities' must be arrays");
    std::vector<double> bp, dv;
    for (const auto& x : b) bp.push_back(as_double(x, "breakpoint"));
    for (const auto& x : d) dv.push_back(as_double(x, "density value"));
    return GridDensity1D(std::move(bp), std::move(dv));
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Usage, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Usage, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Usage, "cannot write '" + path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace gcot
