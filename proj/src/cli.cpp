#include "zl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zl/closed_forms.hpp"
#include "zl/constants.hpp"
#include "zl/divisor.hpp"
#include "zl/special.hpp"
#include "zl/spectral.hpp"
#include "zl/transforms.hpp"
#include "zl/types.hpp"

namespace zl {
namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

double parse_double_strict(const std::string& s, const char* what) {
    std::string u = (!s.empty() && s[0] == '+') ? s.substr(1) : s;
    double v{};
    auto res = std::from_chars(u.data(), u.data() + u.size(), v);
    if (u.empty() || res.ec != std::errc() || res.ptr != u.data() + u.size() ||
        !std::isfinite(v))
        throw UsageError(std::string(what) + ": cannot parse number '" + s +
                         "'");
    return v;
}

long parse_long_strict(const std::string& s, const char* what) {
    long v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw UsageError(std::string(what) + ": cannot parse integer '" + s +
                         "'");
    return v;
}

// Comma-separated list with per-element space trimming; empty input gives
// an empty list, empty elements are rejected.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string cur;
    auto flush = [&] {
        std::size_t a = cur.find_first_not_of(" \t");
        std::size_t b = cur.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw UsageError("empty element in list '" + s + "'");
        out.push_back(cur.substr(a, b - a + 1));
        cur.clear();
    };
    for (char ch : s) {
        if (ch == ',') flush();
        else cur.push_back(ch);
    }
    flush();
    return out;
}

}  // namespace

Cplx parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ' && ch != '\t') t.push_back(ch);
    if (t.empty()) throw UsageError("empty complex literal");
    if (t.back() != 'i')
        return Cplx(parse_double_strict(t, "complex literal"), 0.0);

    std::string body = t.substr(0, t.size() - 1);
    // Split real and imaginary parts at the last sign that is not an
    // exponent sign and not a leading sign.
    std::size_t split = std::string::npos;
    for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' &&
            body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    std::string re_s, im_s;
    if (split == std::string::npos) {
        im_s = body;
    } else {
        re_s = body.substr(0, split);
        im_s = body.substr(split);
    }
    double re = re_s.empty() ? 0.0 : parse_double_strict(re_s, "complex real part");
    double im;
    if (im_s.empty() || im_s == "+") im = 1.0;
    else if (im_s == "-") im = -1.0;
    else im = parse_double_strict(im_s, "complex imaginary part");
    return Cplx(re, im);
}

std::vector<double> parse_grid_spec(const std::string& text, bool geometric) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw UsageError("grid spec must be start:stop:count, got '" + text +
                         "'");
    double a = parse_double_strict(parts[0], "grid start");
    double b = parse_double_strict(parts[1], "grid stop");
    long n = parse_long_strict(parts[2], "grid count");
    if (n < 1) throw UsageError("grid count must be >= 1");
    std::vector<double> out;
    if (n == 1) {
        out.push_back(a);
        return out;
    }
    if (geometric) {
        if (!(a > 0.0 && b > 0.0))
            throw UsageError("geometric grid requires positive endpoints");
        double r = std::log(b / a);
        for (long i = 0; i < n; ++i)
            out.push_back(a * std::exp(r * static_cast<double>(i) /
                                       static_cast<double>(n - 1)));
    } else {
        for (long i = 0; i < n; ++i)
            out.push_back(a + (b - a) * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
    }
    out.front() = a;
    out.back() = b;  // endpoints exactly, independent of rounding
    return out;
}

namespace {

// ------------------------------------------------------------- arguments

const char* command_name(Command c) {
    switch (c) {
        case Command::eval: return "eval";
        case Command::compare: return "compare";
        case Command::fit: return "fit";
        case Command::moments: return "moments";
        case Command::spectral_check: return "spectral-check";
        case Command::verify: return "verify";
    }
    return "?";
}

std::string canonical_method(const std::string& m) {
    if (m == "quadrature") return "quadrature";
    if (m == "kober") return "kober";
    if (m == "atkinson" || m == "atkinson_series") return "atkinson_series";
    if (m == "k0" || m == "k0_series") return "k0_series";
    if (m == "theorem" || m == "theorem_spectral") return "theorem_spectral";
    throw UsageError("unknown method '" + m +
                     "' (expected quadrature, kober, atkinson, k0, theorem)");
}

bool needs_spectral_table(const RunConfig& cfg) {
    if (cfg.command == Command::spectral_check) return true;
    return std::find(cfg.methods.begin(), cfg.methods.end(),
                     "theorem_spectral") != cfg.methods.end();
}

}  // namespace

ParsedArgs parse_args(const std::vector<std::string>& args) {
    CLI::App app{
        "Laplace transforms of power moments of the Riemann zeta function "
        "on the critical line.\n"
        "Complex points are written a+bi (e.g. 0.3+0.2i); grids are "
        "start:stop:count.\n"
        "Exit codes: 0 success, 2 failed computation or check, 64 usage "
        "error, 65 data error.",
        "zl"};
    app.require_subcommand(1);

    // Raw option values; converted into RunConfig after parsing.
    int k = 2;
    std::string s_list, grid_spec, methods_str, format_str = "csv";
    std::string table_path, coeffs = "main", sigma_grid, suite = "all";
    std::string t_list, coeff_source = "paper";
    double tol = 1e-6, verify_tol = 1e-5, c_exponent = 1.0;
    bool geometric = false, linear = false;
    long n_terms = 0, seed = 0;
    int degree = 3;

    CLI::App* eval = app.add_subcommand(
        "eval", "Evaluate L_k(s) at points by one or more methods");
    eval->add_option("--k", k, "Moment order k (1 or 2)");
    eval->add_option("--s", s_list, "Comma-separated complex points a+bi");
    eval->add_option("--grid", grid_spec, "Real grid start:stop:count");
    eval->add_flag("--geometric", geometric, "Geometric grid spacing");
    eval->add_option("--method", methods_str,
                     "Methods: quadrature, kober, atkinson, k0, theorem");
    eval->add_option("--tol", tol, "Quadrature tolerance / series target");
    eval->add_option("--terms", n_terms, "Series length (0 = auto from tol)");
    eval->add_option("--table", table_path,
                     "Spectral table CSV (default $ZL_SPECTRAL_TABLE)");
    eval->add_option("--coeffs", coeff_source,
                     "theorem main-term coefficients: paper | fit (fit "
                     "recomputes the C,D,E regression; slow)");
    eval->add_option("--format", format_str, "Output format: csv | json");

    CLI::App* cmp = app.add_subcommand(
        "compare", "Evaluate two methods and report per-point differences");
    cmp->add_option("--k", k, "Moment order k (1 or 2)");
    cmp->add_option("--s", s_list, "Comma-separated complex points a+bi");
    cmp->add_option("--grid", grid_spec, "Real grid start:stop:count");
    cmp->add_flag("--geometric", geometric, "Geometric grid spacing");
    cmp->add_option("--method", methods_str, "Exactly two method names");
    cmp->add_option("--tol", tol, "Quadrature tolerance / series target");
    cmp->add_option("--terms", n_terms, "Series length (0 = auto from tol)");
    cmp->add_option("--table", table_path,
                    "Spectral table CSV (default $ZL_SPECTRAL_TABLE)");
    cmp->add_option("--coeffs", coeff_source,
                    "theorem main-term coefficients: paper | fit");
    cmp->add_option("--format", format_str, "Output format: csv | json");

    CLI::App* fit = app.add_subcommand(
        "fit", "Fit expansion coefficients against the quadrature oracle");
    fit->add_option("--coeffs", coeffs,
                    "main: A..E of the L_2 main term; kober: correction "
                    "series of L_1");
    fit->add_option("--sigma-grid", sigma_grid,
                    "Fit grid start:stop:count (default main "
                    "1e-3:0.3:16 geometric, kober 0.012:0.045:16 linear)");
    fit->add_flag("--linear", linear, "Force linear grid spacing");
    fit->add_option("--degree", degree, "kober series degree (default 3)");
    fit->add_option("--seed", seed,
                    "Jitter interior grid points (0 = no jitter)");
    fit->add_option("--format", format_str, "Output format: csv | json");

    CLI::App* mom = app.add_subcommand(
        "moments", "Moment integrals I_k(T) of |zeta(1/2+it)|^{2k}");
    mom->add_option("--k", k, "Moment order k (1 or 2)");
    mom->add_option("--T", t_list, "Comma-separated T values");
    mom->add_option("--grid", grid_spec, "T grid start:stop:count");
    mom->add_flag("--geometric", geometric, "Geometric grid spacing");
    mom->add_option("--format", format_str, "Output format: csv | json");

    CLI::App* spc = app.add_subcommand(
        "spectral-check", "Validate a spectral table and its bounds");
    spc->add_option("--table", table_path,
                    "Spectral table CSV (default $ZL_SPECTRAL_TABLE)");
    spc->add_option("--c-exponent", c_exponent,
                    "Exponent of log K in the partial-sum ratio");
    spc->add_option("--format", format_str, "Output format: csv | json");

    CLI::App* ver = app.add_subcommand(
        "verify", "Run verification suites; nonzero exit iff a check fails");
    ver->add_option("--suite", suite, "identities | symmetries | all");
    ver->add_option("--tol", verify_tol, "Relative tolerance per check");
    ver->add_option("--format", format_str, "Output format: csv | json");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        ParsedArgs p;
        p.help_only = true;
        std::vector<CLI::App*> subs = app.get_subcommands();
        p.help_text = subs.empty() ? app.help() : subs[0]->help();
        return p;
    } catch (const CLI::Error& e) {
        throw UsageError(e.what());
    }

    ParsedArgs parsed;
    RunConfig& cfg = parsed.config;
    CLI::App* sub = app.get_subcommands().at(0);

    if (sub == eval) cfg.command = Command::eval;
    else if (sub == cmp) cfg.command = Command::compare;
    else if (sub == fit) cfg.command = Command::fit;
    else if (sub == mom) cfg.command = Command::moments;
    else if (sub == spc) cfg.command = Command::spectral_check;
    else cfg.command = Command::verify;

    if (k != 1 && k != 2) throw UsageError("--k must be 1 or 2");
    cfg.k = k;
    cfg.tol = (cfg.command == Command::verify) ? verify_tol : tol;
    if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
    if (format_str == "csv") cfg.output_format = OutputFormat::csv;
    else if (format_str == "json") cfg.output_format = OutputFormat::json;
    else throw UsageError("--format must be csv or json");
    cfg.table_path = table_path;
    cfg.seed = seed;
    cfg.coeffs = coeffs;
    cfg.fit_degree = degree;
    cfg.sigma_grid = sigma_grid;
    cfg.linear_fit_grid = linear;
    cfg.suite = suite;
    cfg.c_exponent = c_exponent;
    if (n_terms < 0) throw UsageError("--terms must be >= 0");
    cfg.n_terms = n_terms;
    cfg.coeff_source = coeff_source;
    if (coeff_source != "paper" && coeff_source != "fit")
        throw UsageError("--coeffs (theorem source) must be paper or fit");

    if (cfg.command == Command::eval || cfg.command == Command::compare) {
        for (const std::string& tok : split_list(s_list))
            cfg.points.push_back(parse_complex(tok));
        if (!grid_spec.empty())
            for (double x : parse_grid_spec(grid_spec, geometric))
                cfg.points.push_back(Cplx(x, 0.0));
        if (cfg.points.empty())
            throw UsageError("at least one point required (--s or --grid)");
        std::string def = cfg.command == Command::eval ? "quadrature" : "";
        std::string ms = methods_str.empty() ? def : methods_str;
        for (const std::string& m : split_list(ms))
            cfg.methods.push_back(canonical_method(m));
        if (cfg.command == Command::compare && cfg.methods.size() != 2)
            throw UsageError("compare requires exactly two --method names");
        if (cfg.methods.empty()) throw UsageError("--method required");
    }

    if (cfg.command == Command::fit) {
        if (coeffs != "main" && coeffs != "kober")
            throw UsageError("--coeffs must be main or kober");
        if (degree < 1) throw UsageError("--degree must be >= 1");
    }

    if (cfg.command == Command::moments) {
        for (const std::string& tok : split_list(t_list))
            cfg.moment_ts.push_back(parse_double_strict(tok, "--T value"));
        if (!grid_spec.empty())
            for (double x : parse_grid_spec(grid_spec, geometric))
                cfg.moment_ts.push_back(x);
        if (cfg.moment_ts.empty())
            throw UsageError("at least one T required (--T or --grid)");
    }

    if (cfg.command == Command::verify && suite != "identities" &&
        suite != "symmetries" && suite != "all")
        throw UsageError("--suite must be identities, symmetries, or all");

    if (needs_spectral_table(cfg) && cfg.table_path.empty()) {
        const char* env = std::getenv("ZL_SPECTRAL_TABLE");
        if (env != nullptr) cfg.table_path = env;
        if (cfg.table_path.empty())
            throw UsageError(
                "spectral table required: pass --table or set "
                "ZL_SPECTRAL_TABLE");
    }
    return parsed;
}

namespace {

// --------------------------------------------------------------- engine

SpectralTable load_table(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw DataError("cannot open spectral table: " + path);
    try {
        return parse_spectral_table(f);
    } catch (const ParseError& e) {
        throw DataError(std::string(e.what()) + " (" + path + ")");
    } catch (const ValidationError& e) {
        throw DataError(std::string(e.what()) + " (" + path + ")");
    }
}

const DivisorTable& d2_table() {
    static const DivisorTable t = divisor_sieve(2, 512);
    return t;
}

const DivisorTable& d4_table() {
    static const DivisorTable t = divisor_sieve(4, 512);
    return t;
}

// One-time correction-series fit for the kober method (the tested
// configuration: degree 3 on 16 equispaced points in [0.012, 0.045]).
const KoberCoeffs& kober_series_fit() {
    static const KoberCoeffs kc = [] {
        std::vector<double> g;
        for (int i = 0; i < 16; ++i)
            g.push_back(0.012 + 0.033 * static_cast<double>(i) / 15.0);
        return kober_fit(g, 3);
    }();
    return kc;
}

// One-time C, D, E regression on the canonical geometric grid.
const MainTermCoeffs& fitted_main_coeffs() {
    static const MainTermCoeffs mc = [] {
        std::vector<double> g;
        for (int i = 0; i < 16; ++i)
            g.push_back(1e-3 * std::pow(300.0, static_cast<double>(i) / 15.0));
        return fit_main_coeffs(g);
    }();
    return mc;
}

long auto_terms_l1(const Cplx& s, double tol) {
    // Kernel modulus exp(-2 pi n e^{Im s} sin(Re s)); invert for the first
    // n with tail below tol.
    double rate = TWO_PI * std::sin(s.real()) * std::exp(s.imag());
    if (!(rate > 1e-9)) return 512;  // let the library report the failure
    double n = std::log(1.0 / std::min(tol, 1e-2)) / rate + 8.0;
    return std::clamp(static_cast<long>(std::ceil(n)), 8L, 512L);
}

long auto_terms_l2(const Cplx& s, double tol) {
    // Bessel-term envelope n^{-1/4} exp(-4 pi sqrt(n) sin(Re s / 2)).
    double base = 4.0 * PI * std::sin(s.real() / 2.0);
    if (!(base > 1e-9)) return 512;
    double rn = std::log(1.0 / std::min(tol, 1e-2)) / base;
    double n = rn * rn + 8.0;
    return std::clamp(static_cast<long>(std::ceil(n)), 8L, 512L);
}

struct Resources {
    SpectralTable table;
    MainTermCoeffs theorem_coeffs;
    bool table_loaded = false;
};

LaplaceResult eval_one(const std::string& method, const Cplx& s,
                       const RunConfig& cfg, const Resources& res) {
    if (method == "quadrature") {
        QuadratureConfig qc;
        qc.tol = cfg.tol;
        return laplace_quadrature(cfg.k, s, qc);
    }
    if (method == "kober") {
        if (cfg.k != 1)
            throw UsageError("method kober evaluates L_1 only (--k 1)");
        if (s.imag() != 0.0)
            throw DomainError("kober method requires real s");
        const KoberCoeffs& kc = kober_series_fit();
        double half = s.real() / 2.0;
        double value = kober_main(half);
        double p = 1.0, acc = 0.0;
        for (double c : kc.c) {
            acc += c * p;
            p *= half;
        }
        LaplaceResult r;
        r.s = s;
        r.k = 1;
        r.value = value + acc;
        r.method = Method::kober;
        // Held-out contract: residual off the fit grid <= 10x fit rms;
        // the power term covers the first omitted series order.
        r.err_estimate =
            10.0 * kc.residual + std::pow(std::fabs(half), kc.N + 1);
        return r;
    }
    if (method == "atkinson_series") {
        if (cfg.k != 1)
            throw UsageError("method atkinson evaluates L_1 only (--k 1)");
        long n = cfg.n_terms > 0 ? cfg.n_terms : auto_terms_l1(s, cfg.tol);
        return atkinson_l1(s, n, d2_table());
    }
    if (method == "k0_series") {
        if (cfg.k != 2)
            throw UsageError("method k0 evaluates L_2 only (--k 2)");
        long n = cfg.n_terms > 0 ? cfg.n_terms : auto_terms_l2(s, cfg.tol);
        return atkinson_l2_k0(s, n, d4_table());
    }
    // theorem_spectral
    if (cfg.k != 2)
        throw UsageError("method theorem evaluates L_2 only (--k 2)");
    return theorem_l2(s, res.theorem_coeffs, res.table);
}

// ------------------------------------------------------------ formatting

std::string fd(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ordered_json config_echo(const RunConfig& cfg) {
    ordered_json e;
    e["command"] = command_name(cfg.command);
    e["k"] = cfg.k;
    e["tol"] = cfg.tol;
    e["format"] = cfg.output_format == OutputFormat::csv ? "csv" : "json";
    e["methods"] = cfg.methods;
    ordered_json pts = ordered_json::array();
    for (const Cplx& p : cfg.points)
        pts.push_back({{"re", p.real()}, {"im", p.imag()}});
    e["points"] = pts;
    e["table"] = cfg.table_path;
    e["seed"] = cfg.seed;
    e["coeffs"] = cfg.coeffs;
    e["coeff_source"] = cfg.coeff_source;
    e["sigma_grid"] = cfg.sigma_grid;
    e["suite"] = cfg.suite;
    e["c_exponent"] = cfg.c_exponent;
    e["n_terms"] = cfg.n_terms;
    e["moment_ts"] = cfg.moment_ts;
    return e;
}

void emit_json(const RunConfig& cfg, const ordered_json& rows,
               std::ostream& out) {
    ordered_json doc;
    doc["config"] = config_echo(cfg);
    doc["rows"] = rows;
    out << doc.dump(2) << "\n";
}

// One PASS/FAIL/INFO row of a check report.
struct CheckRow {
    std::string check;
    std::string status;  // PASS | FAIL | INFO
    double measured = 0.0;
    bool has_threshold = false;
    double threshold = 0.0;
};

CheckRow check_against(const std::string& name, double measured,
                       double threshold) {
    CheckRow r;
    r.check = name;
    r.status = measured <= threshold ? "PASS" : "FAIL";
    r.measured = measured;
    r.has_threshold = true;
    r.threshold = threshold;
    return r;
}

CheckRow info_row(const std::string& name, double measured) {
    CheckRow r;
    r.check = name;
    r.status = "INFO";
    r.measured = measured;
    return r;
}

int emit_checks(const RunConfig& cfg, const std::vector<CheckRow>& rows,
                std::ostream& out) {
    bool failed = false;
    if (cfg.output_format == OutputFormat::csv) {
        out << "check,status,measured,threshold\n";
        for (const CheckRow& r : rows) {
            out << r.check << ',' << r.status << ',' << fd(r.measured) << ','
                << (r.has_threshold ? fd(r.threshold) : std::string("none"))
                << '\n';
            failed = failed || r.status == "FAIL";
        }
    } else {
        ordered_json jrows = ordered_json::array();
        for (const CheckRow& r : rows) {
            ordered_json j;
            j["check"] = r.check;
            j["status"] = r.status;
            j["measured"] = r.measured;
            if (r.has_threshold) j["threshold"] = r.threshold;
            else j["threshold"] = nullptr;
            jrows.push_back(j);
            failed = failed || r.status == "FAIL";
        }
        emit_json(cfg, jrows, out);
    }
    return failed ? 2 : 0;
}

// -------------------------------------------------------------- commands

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
    Resources res;
    if (needs_spectral_table(cfg)) {
        res.table = load_table(cfg.table_path);
        res.table_loaded = true;
        res.theorem_coeffs = cfg.coeff_source == "fit" ? fitted_main_coeffs()
                                                       : paper_main_coeffs();
    }
    std::vector<LaplaceResult> results;
    for (const Cplx& s : cfg.points)
        for (const std::string& m : cfg.methods)
            results.push_back(eval_one(m, s, cfg, res));

    if (cfg.output_format == OutputFormat::csv) {
        out << "k,s_re,s_im,method,value_re,value_im,err_estimate\n";
        for (const LaplaceResult& r : results)
            out << r.k << ',' << fd(r.s.real()) << ',' << fd(r.s.imag()) << ','
                << method_name(r.method) << ',' << fd(r.value.real()) << ','
                << fd(r.value.imag()) << ',' << fd(r.err_estimate) << '\n';
    } else {
        ordered_json rows = ordered_json::array();
        for (const LaplaceResult& r : results) {
            ordered_json j;
            j["method"] = method_name(r.method);
            j["s_re"] = r.s.real();
            j["s_im"] = r.s.imag();
            j["value_re"] = r.value.real();
            j["value_im"] = r.value.imag();
            j["err_estimate"] = r.err_estimate;
            rows.push_back(j);
        }
        emit_json(cfg, rows, out);
    }
    return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    Resources res;
    if (needs_spectral_table(cfg)) {
        res.table = load_table(cfg.table_path);
        res.table_loaded = true;
        res.theorem_coeffs = cfg.coeff_source == "fit" ? fitted_main_coeffs()
                                                       : paper_main_coeffs();
    }
    struct Pair {
        LaplaceResult a, b;
    };
    std::vector<Pair> pairs;
    for (const Cplx& s : cfg.points)
        pairs.push_back({eval_one(cfg.methods[0], s, cfg, res),
                         eval_one(cfg.methods[1], s, cfg, res)});

    if (cfg.output_format == OutputFormat::csv) {
        out << "k,s_re,s_im,method_a,method_b,value_a_re,value_a_im,"
               "value_b_re,value_b_im,abs_diff,err_sum\n";
        for (const Pair& p : pairs)
            out << cfg.k << ',' << fd(p.a.s.real()) << ',' << fd(p.a.s.imag())
                << ',' << method_name(p.a.method) << ','
                << method_name(p.b.method) << ',' << fd(p.a.value.real())
                << ',' << fd(p.a.value.imag()) << ',' << fd(p.b.value.real())
                << ',' << fd(p.b.value.imag()) << ','
                << fd(std::abs(p.a.value - p.b.value)) << ','
                << fd(p.a.err_estimate + p.b.err_estimate) << '\n';
    } else {
        ordered_json rows = ordered_json::array();
        for (const Pair& p : pairs) {
            ordered_json j;
            j["s_re"] = p.a.s.real();
            j["s_im"] = p.a.s.imag();
            j["method_a"] = method_name(p.a.method);
            j["method_b"] = method_name(p.b.method);
            j["value_a_re"] = p.a.value.real();
            j["value_a_im"] = p.a.value.imag();
            j["value_b_re"] = p.b.value.real();
            j["value_b_im"] = p.b.value.imag();
            j["abs_diff"] = std::abs(p.a.value - p.b.value);
            j["err_sum"] = p.a.err_estimate + p.b.err_estimate;
            rows.push_back(j);
        }
        emit_json(cfg, rows, out);
    }
    return 0;
}

std::vector<double> fit_grid(const RunConfig& cfg) {
    std::string spec = cfg.sigma_grid;
    bool geometric;
    if (cfg.coeffs == "main") {
        if (spec.empty()) spec = "1e-3:0.3:16";
        geometric = !cfg.linear_fit_grid;
    } else {
        // The kober window is narrow, so the default grid is linear; a
        // user-supplied grid follows the --linear flag as usual.
        if (spec.empty()) spec = "0.012:0.045:16";
        geometric = cfg.sigma_grid.empty() ? false : !cfg.linear_fit_grid;
    }
    std::vector<double> g = parse_grid_spec(spec, geometric);
    if (cfg.seed != 0) {
        // Multiplicative jitter of interior points only, so the window
        // endpoints stay put; deterministic per seed.
        std::mt19937_64 gen(static_cast<std::uint64_t>(cfg.seed));
        std::uniform_real_distribution<double> u(-5e-4, 5e-4);
        for (std::size_t i = 1; i + 1 < g.size(); ++i) g[i] *= 1.0 + u(gen);
        std::sort(g.begin(), g.end());
    }
    return g;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    struct Row {
        std::string name;
        double value;
        std::string provenance;
    };
    std::vector<Row> rows;
    if (cfg.coeffs == "main") {
        MainTermCoeffs mc = fit_main_coeffs(fit_grid(cfg));
        const char* cde =
            mc.provenance == CoeffProvenance::fitted ? "fitted" : "paper_exact";
        rows = {{"A", mc.A, "paper_exact"},
                {"B", mc.B, "paper_exact"},
                {"C", mc.C, cde},
                {"D", mc.D, cde},
                {"E", mc.E, cde}};
    } else {
        KoberCoeffs kc = kober_fit(fit_grid(cfg), cfg.fit_degree);
        for (int n = 0; n <= kc.N; ++n)
            rows.push_back({"c" + std::to_string(n),
                            kc.c[static_cast<std::size_t>(n)], "fitted"});
        rows.push_back({"rms_residual", kc.residual, "measured"});
    }

    if (cfg.output_format == OutputFormat::csv) {
        out << "coefficient,value,provenance\n";
        for (const Row& r : rows)
            out << r.name << ',' << fd(r.value) << ',' << r.provenance << '\n';
    } else {
        ordered_json jrows = ordered_json::array();
        for (const Row& r : rows) {
            ordered_json j;
            j["coefficient"] = r.name;
            j["value"] = r.value;
            j["provenance"] = r.provenance;
            jrows.push_back(j);
        }
        emit_json(cfg, jrows, out);
    }
    return 0;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
    std::vector<MomentRecord> recs;
    for (double T : cfg.moment_ts) recs.push_back(moment_integral(cfg.k, T));

    if (cfg.output_format == OutputFormat::csv) {
        out << "k,T,value,err_estimate\n";
        for (const MomentRecord& r : recs)
            out << r.k << ',' << fd(r.T) << ',' << fd(r.value) << ','
                << fd(1e-6 * (1.0 + r.T)) << '\n';
    } else {
        ordered_json rows = ordered_json::array();
        for (const MomentRecord& r : recs) {
            ordered_json j;
            j["k"] = r.k;
            j["T"] = r.T;
            j["value"] = r.value;
            j["err_estimate"] = 1e-6 * (1.0 + r.T);
            rows.push_back(j);
        }
        emit_json(cfg, rows, out);
    }
    return 0;
}

int cmd_spectral_check(const RunConfig& cfg, std::ostream& out) {
    SpectralTable table = load_table(cfg.table_path);
    std::vector<CheckRow> rows;
    rows.push_back(info_row("records", static_cast<double>(table.data.size())));
    rows.push_back(info_row("kappa_max", table.kappa_max));
    for (double sg : {0.05, 0.5}) {
        LaplaceResult r = spectral_sum(Cplx(sg, 0.0), table);
        double rel = std::fabs(r.value.imag()) / (1.0 + std::abs(r.value));
        char name[48];
        std::snprintf(name, sizeof name, "realness_sigma_%g", sg);
        rows.push_back(check_against(name, rel, 1e-10));
    }
    double env_max = 0.0;
    for (int i = 0; i <= 32; ++i) {
        double y = 5.0 * std::pow(100.0, static_cast<double>(i) / 32.0);
        env_max = std::max(env_max, std::abs(r_function(y)) * std::sqrt(y));
    }
    rows.push_back(check_against("r_envelope_max", env_max, 2.0));
    PartialSumReport ps = partial_sum_bound(table, cfg.c_exponent);
    rows.push_back(info_row("partial_sum_max_ratio", ps.max_ratio));
    CheckRow slope = check_against("partial_sum_trend_slope", ps.trend_slope, 0.1);
    slope.status = ps.bounded ? "PASS" : "FAIL";
    rows.push_back(slope);
    return emit_checks(cfg, rows, out);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    std::vector<CheckRow> rows;
    bool identities = cfg.suite == "identities" || cfg.suite == "all";
    bool symmetries = cfg.suite == "symmetries" || cfg.suite == "all";

    if (identities) {
        for (int k : {1, 2}) {
            for (double T : {1.0, 5.0, 10.0, 20.0}) {
                std::string tag =
                    "_k" + std::to_string(k) + "_T" + std::to_string(static_cast<int>(T));
                double resid = laplace_identity_residual(k, T);
                double base =
                    std::abs(laplace_quadrature(k, Cplx(1.0 / T, 0.0)).value);
                rows.push_back(
                    check_against("identity" + tag, resid / base, cfg.tol));
                bool ok = trivial_bound_check(k, T);
                CheckRow r;
                r.check = "trivial_bound" + tag;
                r.status = ok ? "PASS" : "FAIL";
                r.measured = ok ? 1.0 : 0.0;
                r.has_threshold = true;
                r.threshold = 1.0;
                rows.push_back(r);
            }
        }
    }
    if (symmetries) {
        auto conj_gap = [](const LaplaceResult& plus,
                           const LaplaceResult& minus) {
            return std::abs(minus.value - std::conj(plus.value)) /
                   (1.0 + std::abs(plus.value));
        };
        {
            QuadratureConfig qc;
            qc.tol = std::min(cfg.tol * 0.1, 1e-6);
            LaplaceResult p = laplace_quadrature(1, Cplx(0.5, 0.3), qc);
            LaplaceResult m = laplace_quadrature(1, Cplx(0.5, -0.3), qc);
            rows.push_back(
                check_against("conj_quadrature_k1", conj_gap(p, m), cfg.tol));
            LaplaceResult p2 = laplace_quadrature(2, Cplx(0.7, 0.4), qc);
            LaplaceResult m2 = laplace_quadrature(2, Cplx(0.7, -0.4), qc);
            rows.push_back(
                check_against("conj_quadrature_k2", conj_gap(p2, m2), cfg.tol));
        }
        // The Atkinson expansions are one-sided (rotated contour) and carry
        // no conjugation contract; the Mellin transform and the main term
        // do.
        {
            Cplx p = mellin_z2(Cplx(2.0, 0.5));
            Cplx m = mellin_z2(Cplx(2.0, -0.5));
            double gap = std::abs(m - std::conj(p)) / (1.0 + std::abs(p));
            rows.push_back(check_against("conj_mellin_z2", gap, cfg.tol));
        }
        {
            MainTermCoeffs mc = paper_main_coeffs();
            Cplx p = main_term(Cplx(0.3, 0.2), mc);
            Cplx m = main_term(Cplx(0.3, -0.2), mc);
            double gap = std::abs(m - std::conj(p)) / (1.0 + std::abs(p));
            rows.push_back(check_against("conj_main_term", gap, cfg.tol));
        }
    }
    return emit_checks(cfg, rows, out);
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    (void)err;
    switch (cfg.command) {
        case Command::eval: return cmd_eval(cfg, out);
        case Command::compare: return cmd_compare(cfg, out);
        case Command::fit: return cmd_fit(cfg, out);
        case Command::moments: return cmd_moments(cfg, out);
        case Command::spectral_check: return cmd_spectral_check(cfg, out);
        case Command::verify: return cmd_verify(cfg, out);
    }
    throw UsageError("unknown command");
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
    try {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
        ParsedArgs parsed = parse_args(args);
        if (parsed.help_only) {
            out << parsed.help_text;
            return 0;
        }
        return run(parsed.config, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return 65;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace zl
