#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "sphcurve/oracle.hpp"
#include "sphcurve/reconstruct.hpp"

namespace sphcurve::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CurveFlags {
    std::string family;
    std::vector<std::string> params;
    std::optional<double> c;
    double s_span = 2.0 * M_PI;
    int n = 1001;
    std::string format = "csv";
    std::string output;
};

struct Law {
    Family family;
    Params params;
    CurvatureLaw law;
    MomentumLaw K;
};

bool takes_c(Family f) {
    return f == Family::Constant || f == Family::SmallCircle || f == Family::GreatCircle ||
           f == Family::Elastica;
}

Law resolve(const CurveFlags& fl) {
    if (fl.family.empty()) throw UsageError("--family is required");
    const Family f = family_from_name(fl.family);
    Params given;
    for (const auto& kv : fl.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("--param expects key=value, got '" + kv + "'");
        const std::string val = kv.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != val.size() || val.empty())
            throw UsageError("--param " + kv + ": value is not a number");
        given[kv.substr(0, eq)] = v;
    }
    if (fl.c) {
        if (!takes_c(f))
            throw std::invalid_argument(fl.family + ": the momentum constant is fixed; --c not accepted");
        if (given.count("c")) throw UsageError("give c either as --c or as --param c=...");
        given["c"] = *fl.c;
    }
    Params p = canonical_params(f, given);
    return {f, p, law_for(f, p), momentum_for(f, p)};
}

void check_grid(const CurveFlags& fl) {
    if (!(fl.s_span > 0.0) || !std::isfinite(fl.s_span)) throw UsageError("--s-span must be positive");
    if (fl.n < 5) throw UsageError("--n must be at least 5");
}

void add_curve_flags(CLI::App* app, CurveFlags& fl, bool with_format) {
    app->add_option("--family", fl.family, "Family name (see family-list)");
    app->add_option("--param", fl.params, "Family parameter key=value (repeatable)");
    app->add_option("--c", fl.c, "Momentum constant c for families that take one");
    app->add_option("--s-span", fl.s_span, "Arc-length span, centred on s = 0");
    app->add_option("--n", fl.n, "Number of samples");
    if (with_format)
        app->add_option("--format", fl.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--output", fl.output, "Output file (default stdout)");
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

CurveTrace load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    return read_csv(f);
}

// Interval containing the trace near s = 0, else the family's own.
AdmissibleInterval interval_for(const Law& L, const CurveTrace& t) {
    if (L.family != Family::Elastica || t.size() == 0) {
        try {
            const FamilyGauge g = reconstruction_gauge(L.family, L.params);
            if (t.size() == 0) return g.interval;
        } catch (const std::invalid_argument&) {
        }
    }
    std::size_t mid = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::abs(t.s[i]) < std::abs(t.s[mid])) mid = i;
    const auto all = admissible_intervals(L.K);
    if (all.empty()) throw std::invalid_argument(family_info(L.family).name + ": empty admissible set");
    if (t.size() > 0)
        for (const auto& I : all)
            if (t.z[mid] >= I.z_lo && t.z[mid] <= I.z_hi) return I;
    return all.front();
}

std::string trace_text(const CurveTrace& t) {
    std::ostringstream s;
    write_csv(s, t);
    return s.str();
}

std::string report_text(const Law& L, const CurveTrace& t, const Thresholds& th, bool& pass) {
    const DiagnosticsReport r = verify_trace(t, L.law, L.K, th);
    pass = r.verdict.pass();
    nlohmann::json j = report_json(family_info(L.family).name, L.params, L.K.c(), interval_for(L, t), r);
    if (t.meta.truncated) j["truncation_reason"] = t.meta.truncation_reason;
    return j.dump(2) + "\n";
}

std::string curve_output(const CurveFlags& fl, const Law& L, const CurveTrace& t, std::ostream& err) {
    if (t.meta.truncated) err << "note: trace truncated: " << t.meta.truncation_reason << "\n";
    if (fl.format == "csv") return trace_text(t);
    bool pass = false;
    return report_text(L, t, Thresholds{}, pass);
}

nlohmann::json number(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json report_json(const std::string& law, const Params& params, double c,
                           const AdmissibleInterval& interval, const DiagnosticsReport& r) {
    nlohmann::json j;
    j["law"] = law;
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : params) j["params"][k] = v;
    j["c"] = c;
    j["interval"] = {{"z_lo", interval.z_lo},
                     {"z_hi", interval.z_hi},
                     {"lo_kind", to_string(interval.lo_kind)},
                     {"hi_kind", to_string(interval.hi_kind)}};
    nlohmann::json res = {{"sphere", number(r.max_sphere_residual)},
                          {"speed", number(r.max_speed_residual)},
                          {"curvature", number(r.max_curvature_residual)},
                          {"momentum", number(r.max_momentum_residual)},
                          {"n_samples", r.n_samples}};
    if (r.el_residual) res["el"] = number(*r.el_residual);
    if (r.energy_residual) res["energy"] = number(*r.energy_residual);
    j["residuals"] = res;
    j["verdict"] = r.verdict.pass() ? "pass" : "fail";
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spherical curves with prescribed geodesic curvature kappa(z)", "sphcurve"};
    app.set_help_all_flag("--help-all");
    app.require_subcommand(1);

    std::string list_format = "text";
    auto* list = app.add_subcommand("family-list", "List the family catalog");
    list->add_option("--format", list_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    CurveFlags sample_f;
    auto* sample = app.add_subcommand("sample", "Evaluate a family's closed form");
    add_curve_flags(sample, sample_f, true);

    CurveFlags rec_f;
    std::optional<double> z0, lambda0;
    int dz_sign = 1;
    double quad_tol = 1e-10, lambda_cap = 1e6;
    std::string policy = "continue";
    auto* rec = app.add_subcommand("reconstruct", "Reconstruct a curve from its kappa(z) law");
    add_curve_flags(rec, rec_f, true);
    rec->add_option("--z0", z0, "Initial height (default: the family gauge)");
    rec->add_option("--lambda0", lambda0, "Initial longitude");
    rec->add_option("--dz-sign", dz_sign, "Initial sign of dz/ds")->check(CLI::IsMember({-1, 1}));
    rec->add_option("--quad-tol", quad_tol, "Quadrature tolerance");
    rec->add_option("--lambda-cap", lambda_cap, "Stop once |lambda - lambda0| exceeds this");
    rec->add_option("--pole-policy", policy, "continue or truncate")
        ->check(CLI::IsMember({"continue", "truncate"}));

    CurveFlags orc_f;
    double ds = 1e-4;
    auto* orc = app.add_subcommand("oracle", "Integrate the Frenet equations directly");
    add_curve_flags(orc, orc_f, true);
    orc->add_option("--ds", ds, "RK4 step (at most 1e-3)");

    CurveFlags ver_f;
    ver_f.format = "json";
    std::string input;
    Thresholds th;
    auto* ver = app.add_subcommand("verify", "Check a trace against its law");
    add_curve_flags(ver, ver_f, false);
    ver->add_option("--format", ver_f.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    ver->add_option("--input", input, "Trace CSV (default: reconstruct from the flags)");
    ver->add_option("--tol-sphere", th.sphere);
    ver->add_option("--tol-speed", th.speed);
    ver->add_option("--tol-curvature", th.curvature);
    ver->add_option("--tol-momentum", th.momentum);
    ver->add_option("--tol-el", th.el);
    ver->add_option("--tol-energy", th.energy);

    std::string cmp_a, cmp_b, cmp_format = "text";
    std::optional<double> cmp_tol;
    auto* cmp = app.add_subcommand("compare", "Sup chordal distance between two traces modulo z-rotation");
    cmp->add_option("--a", cmp_a, "First trace CSV")->required();
    cmp->add_option("--b", cmp_b, "Second trace CSV")->required();
    cmp->add_option("--tol", cmp_tol, "Exit 1 if the distance exceeds this");
    cmp->add_option("--format", cmp_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (list->parsed()) {
            if (list_format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& f : family_catalog())
                    j.push_back({{"name", f.name},
                                 {"params", f.params},
                                 {"summary", f.summary},
                                 {"closed_form", f.has_closed_form}});
                out << j.dump(2) << "\n";
            } else {
                for (const auto& f : family_catalog()) {
                    std::string ps;
                    for (const auto& p : f.params) ps += (ps.empty() ? "" : ",") + p;
                    out << std::left << std::setw(14) << f.name << std::setw(16) << ps << f.summary
                        << (f.has_closed_form ? "" : "  (no closed form)") << "\n";
                }
            }
            return 0;
        }
        if (sample->parsed()) {
            check_grid(sample_f);
            const Law L = resolve(sample_f);
            const CurveTrace t = closed_form(L.family, L.params).sample(sample_f.s_span, sample_f.n);
            emit(sample_f.output, out, curve_output(sample_f, L, t, err));
            return 0;
        }
        if (rec->parsed()) {
            check_grid(rec_f);
            const Law L = resolve(rec_f);
            ReconstructionConfig cfg;
            cfg.s_span = rec_f.s_span;
            cfg.n_samples = rec_f.n;
            cfg.quad_tol = quad_tol;
            cfg.lambda_cap = lambda_cap;
            cfg.pole_policy = policy == "truncate" ? PolePolicy::Truncate : PolePolicy::Continue;
            CurveTrace t;
            if (z0) {
                std::optional<AdmissibleInterval> pick;
                for (const auto& I : admissible_intervals(L.K))
                    if (*z0 >= I.z_lo && *z0 <= I.z_hi) pick = I;
                if (!pick)
                    throw std::invalid_argument("--z0 lies outside every admissible interval (1 - z^2 - K(z)^2 <= 0)");
                cfg.z0 = *z0;
                cfg.dz_sign0 = dz_sign;
                cfg.lambda0 = lambda0.value_or(0.0);
                t = reconstruct(L.K, *pick, cfg);
            } else {
                const FamilyGauge g = reconstruction_gauge(L.family, L.params);
                cfg.z0 = g.z0;
                cfg.dz_sign0 = g.dz_sign0;
                cfg.lambda0 = lambda0.value_or(g.lambda0);
                t = reconstruct(L.K, g.interval, cfg);
            }
            t.meta.law = family_info(L.family).name;
            emit(rec_f.output, out, curve_output(rec_f, L, t, err));
            return 0;
        }
        if (orc->parsed()) {
            check_grid(orc_f);
            if (orc_f.n % 2 == 0) throw UsageError("oracle: --n must be odd (s = 0 is a sample)");
            const Law L = resolve(orc_f);
            FrenetState st;
            if (family_info(L.family).has_closed_form) {
                const ClosedFormCurve cf = closed_form(L.family, L.params);
                st.xi = cf.eval(0.0).xi;
                st.t = cf.tangent(0.0).normalized();
                st.t -= st.t.dot(st.xi) * st.xi;
                st.t.normalize();
            } else {
                const FamilyGauge g = reconstruction_gauge(L.family, L.params);
                st = state_from_momentum(L.K, g.z0, g.dz_sign0, g.lambda0);
            }
            CurveTrace t = frenet_integrate(L.law, st, orc_f.s_span, ds, orc_f.n);
            t.meta.law = family_info(L.family).name;
            emit(orc_f.output, out, curve_output(orc_f, L, t, err));
            return 0;
        }
        if (ver->parsed()) {
            check_grid(ver_f);
            const Law L = resolve(ver_f);
            CurveTrace t;
            if (!input.empty()) {
                t = load(input);
            } else {
                ReconstructionConfig cfg;
                cfg.s_span = ver_f.s_span;
                cfg.n_samples = ver_f.n;
                t = reconstruct_family(L.family, L.params, cfg);
            }
            bool pass = false;
            std::string text = report_text(L, t, th, pass);
            if (ver_f.format == "text") {
                const auto j = nlohmann::json::parse(text);
                std::ostringstream line;
                line << j["verdict"].get<std::string>();
                for (const auto& [k, v] : j["residuals"].items()) line << " " << k << "=" << v.dump();
                text = line.str() + "\n";
            }
            emit(ver_f.output, out, text);
            return pass ? 0 : 1;
        }
        if (cmp->parsed()) {
            const CurveTrace a = load(cmp_a), b = load(cmp_b);
            const double d = compare_traces(a, b);
            if (cmp_format == "json") {
                out << nlohmann::json{{"distance", number(d)}, {"rotation", optimal_z_rotation(a, b)}}.dump(2)
                    << "\n";
            } else {
                out << std::setprecision(17) << d << "\n";
            }
            if (cmp_tol && !(d <= *cmp_tol)) return 1;
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace sphcurve::cli
