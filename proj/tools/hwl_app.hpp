#pragma once

// Command-line front end. Every subcommand writes a CSV whose leading `#`
// lines hold the full effective configuration as key=value pairs; passing
// that file back through --config reproduces it byte for byte.
//
// Exit codes: 0 success, 2 usage or domain error, 3 numerical gate failure,
// 4 internal error.

#include <hwl/hwl.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hwl::cli {

enum ExitCode : int { ok = 0, usage = 2, numerical = 3, internal = 4 };

inline constexpr const char* kVersion = "1.0.0";

/// Shortest round-trip representation, for echoed configuration values.
inline std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// 12 significant digits, for data values.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt(bool b) { return b ? "true" : "false"; }

class Csv {
public:
    void meta(const std::string& key, const std::string& value) { head_ << "# " << key << "=" << value << "\n"; }
    void columns(std::initializer_list<std::string> names) { row(std::vector<std::string>(names)); }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) body_ << (i ? "," : "") << fields[i];
        body_ << "\n";
    }
    /// Trailing comment lines (results that do not fit the row layout).
    void note(const std::string& text) { tail_ << "# " << text << "\n"; }
    std::string str() const { return head_.str() + body_.str() + tail_.str(); }

private:
    std::ostringstream head_, body_, tail_;
};

/// A subcommand plus the ordered list of its echoed options.
class Command {
public:
    Command(CLI::App& parent, std::string name, std::string description)
        : name_(std::move(name)), app_(parent.add_subcommand(name_, std::move(description))) {
        // --h is the increment length, so help is long-form only
        app_->set_help_flag("--help", "print this help and exit");
        seed_option_ = app_->add_option("--seed", seed_, "random seed (falls back to HWL_SEED, then 1)");
        app_->add_option("--threads", threads_, "worker threads, 0 = all cores; results do not depend on it")
            ->capture_default_str();
        app_->add_option("--config", config_, "key=value file (an earlier output works); flags override it");
    }

    CLI::App* app() const { return app_; }
    const std::string& name() const { return name_; }
    unsigned threads() const { return threads_; }

    template <class T>
    CLI::Option* option(const std::string& key, T& ref, const std::string& help) {
        echo_.push_back({key, [&ref] { return render(ref); }});
        return app_->add_option("--" + key, ref, help)->capture_default_str();
    }

    CLI::Option* flag(const std::string& key, bool& ref, const std::string& help) {
        echo_.push_back({key, [&ref] { return render(ref); }});
        return app_->add_flag("--" + key, ref, help);
    }

    /// Output path option (not echoed: it does not affect the content).
    CLI::Option* output(std::string& ref, const std::string& key = "output", const std::string& help = "CSV path, default stdout") {
        return app_->add_option("--" + key, ref, help);
    }

    /// Effective seed: --seed, else HWL_SEED, else 1.
    std::uint64_t seed() const {
        if (seed_option_->count() > 0) return seed_;
        if (const char* env = std::getenv("HWL_SEED"); env && *env) {
            std::uint64_t v = 0;
            auto res = std::from_chars(env, env + std::strlen(env), v);
            if (res.ec != std::errc() || *res.ptr != '\0') throw DomainError("HWL_SEED must be an unsigned integer");
            return v;
        }
        return 1;
    }

    void header(Csv& csv) const {
        csv.meta("command", name_);
        for (const auto& [key, value] : echo_) csv.meta(key, value());
        csv.meta("seed", std::to_string(seed()));
        csv.meta("version", kVersion);
    }

private:
    static std::string render(double v) { return shortest(v); }
    static std::string render(int v) { return std::to_string(v); }
    static std::string render(std::uint64_t v) { return std::to_string(v); }
    static std::string render(bool v) { return v ? "true" : "false"; }
    static std::string render(const std::string& v) { return v; }
    static std::string render(const std::vector<double>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + shortest(v[i]);
        return out;
    }

    std::string name_;
    CLI::App* app_;
    std::uint64_t seed_ = 1;
    CLI::Option* seed_option_ = nullptr;
    unsigned threads_ = 1;
    std::string config_;
    std::vector<std::pair<std::string, std::function<std::string()>>> echo_;
};

/// Window from its name and the homothety-center offset (disks only).
inline Window make_window(const std::string& name, const std::vector<double>& center) {
    const bool offset = center.size() == 2 && (center[0] != 0.0 || center[1] != 0.0);
    if (center.size() != 2) throw DomainError("--center takes two coordinates");
    if (name == "disk") return Window::disk(center[0], center[1]);
    if (offset) throw DomainError("--center applies to the disk window only");
    if (name == "interval") return Window::interval();
    if (name == "square") return Window::square();
    if (name == "cube3") return Window::cube(3);
    if (name == "ball3") return Window::ball(3);
    throw DomainError("unknown window '" + name + "' (interval, disk, square, cube3, ball3)");
}

inline CurveMethod parse_curve_method(const std::string& m) {
    if (m == "spectral") return CurveMethod::spectral;
    if (m == "mc") return CurveMethod::monte_carlo;
    if (m == "exact1d") return CurveMethod::exact1d;
    throw DomainError("unknown method '" + m + "' (spectral, mc, exact1d)");
}

/// s_min, s_min + step, ... up to s_max (inclusive within rounding).
inline std::vector<double> s_range(double s_min, double s_max, double step) {
    if (!(step > 0.0)) throw DomainError("s-step must be positive");
    if (!(s_max >= s_min)) throw DomainError("s-max must not be below s-min");
    auto steps = static_cast<std::size_t>(std::floor((s_max - s_min) / step + 1e-9)) + 1;
    return s_grid(s_min, step, steps);
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        double v = 0.0;
        auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size())
            throw DomainError("cannot parse list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("empty list");
    return out;
}

inline void emit(const std::string& path, const Csv& csv, std::ostream& out) {
    if (path.empty()) {
        out << csv.str();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    os << csv.str();
}

inline std::uint64_t sample_count(double samples) {
    if (!(samples >= 1.0) || samples > 1e12) throw DomainError("samples must lie in [1, 1e12]");
    return static_cast<std::uint64_t>(std::llround(samples));
}

// ---------------------------------------------------------------------------

struct CurveConfig {
    std::string window = "disk";
    std::vector<double> center{0.0, 0.0};
    double alpha = 0.0;  // 0: 0.6 on the interval, 1 otherwise
    int kappa = 1;
    double h = 0.02;
    double s_min = 0.0;
    double s_max = -1.0;  // negative: 1 - h
    double s_step = 0.02;
    std::string method = "spectral";
    double samples = 1e6;
    bool quasi = false;
    std::uint64_t grid_m = 0;  // 0: default for the dimension
    double lambda_max = 0.0;
    double parseval_gate = 0.02;
    std::string output;
};

inline void add_curve_options(Command& c, CurveConfig& cfg, bool with_window) {
    if (with_window) {
        c.option("window", cfg.window, "interval, disk, square");
        c.option("center", cfg.center, "homothety center offset of the disk")->delimiter(',')->expected(2);
        c.option("alpha", cfg.alpha, "long-range exponent (0: 0.6 on the interval, 1 otherwise)");
    }
    c.option("kappa", cfg.kappa, "Hermite rank");
    c.option("h", cfg.h, "increment length");
    c.option("s-min", cfg.s_min, "first s");
    c.option("s-max", cfg.s_max, "last s (negative: 1 - h)");
    c.option("s-step", cfg.s_step, "s step");
    c.option("method", cfg.method, "spectral, mc or exact1d");
    c.option("samples", cfg.samples, "Monte Carlo pairs per point");
    c.flag("quasi", cfg.quasi, "quasi-random points for mc");
    c.option("grid-m", cfg.grid_m, "spectral nodes per axis (0: default)");
    c.option("lambda-max", cfg.lambda_max, "spectral cutoff (0: default)");
    c.option("parseval-gate", cfg.parseval_gate, "largest tolerated Parseval error");
}

/// Resolves dimension-dependent defaults in place so the header shows the
/// effective values.
inline VarianceCurve compute_curve(CurveConfig& cfg, const Window& w, std::uint64_t seed, unsigned threads) {
    if (cfg.alpha == 0.0) cfg.alpha = w.dim() == 1 ? 0.6 : 1.0;
    if (cfg.s_max < 0.0) cfg.s_max = 1.0 - cfg.h;
    SpectralGrid grid = SpectralGrid::defaults(w.dim());
    if (cfg.grid_m == 0) cfg.grid_m = grid.m;
    if (cfg.lambda_max == 0.0) cfg.lambda_max = grid.lambda_max;
    grid = {cfg.grid_m, cfg.lambda_max};

    const KernelParams p = KernelParams::make(w.dim(), cfg.kappa, cfg.alpha);
    CurveOptions opt;
    opt.grid = grid;
    opt.parseval_gate = cfg.parseval_gate;
    opt.sampling.samples = sample_count(cfg.samples);
    opt.sampling.seed = seed;
    opt.sampling.threads = threads;
    opt.sampling.quasi_random = cfg.quasi;
    return variance_curve(p, w, cfg.h, s_range(cfg.s_min, cfg.s_max, cfg.s_step), parse_curve_method(cfg.method), opt);
}

inline void write_curve(Csv& csv, const VarianceCurve& c, std::uint64_t seed) {
    csv.columns({"s", "h", "variance", "stderr", "method", "window", "alpha", "kappa", "seed"});
    for (const auto& pt : c.points)
        csv.row({fmt(pt.s), fmt(c.h), fmt(pt.variance), fmt(pt.std_error), std::string(to_string(c.method)), c.window,
                 fmt(c.alpha), std::to_string(c.kappa), std::to_string(seed)});
}

// ---------------------------------------------------------------------------

/// Moves `--config FILE` entries in front of the command-line flags, so that
/// flags given explicitly override the file. Accepts `key=value` and
/// `# key=value` lines and stops at the first line of data.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::size_t sub = 0;
    while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
    std::string path;
    for (std::size_t i = sub; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    if (sub >= args.size()) throw DomainError("--config needs a subcommand");
    std::ifstream is(path);
    if (!is) throw DomainError("cannot open config file " + path);
    std::vector<std::string> injected;
    for (std::string line; std::getline(is, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string body = line;
        bool comment = !body.empty() && body[0] == '#';
        if (comment) body = body.substr(1);
        body.erase(0, body.find_first_not_of(" \t"));
        auto eq = body.find('=');
        if (body.empty()) continue;
        if (eq == std::string::npos) {
            if (comment) continue;
            break;  // first data line
        }
        std::string key = body.substr(0, eq), value = body.substr(eq + 1);
        if (key.empty() || key.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789-") != std::string::npos)
            throw DomainError("malformed config key '" + key + "'");
        if (key == "version") continue;
        if (key == "command") {
            if (value != args[sub]) throw DomainError("config file is for '" + value + "', not '" + args[sub] + "'");
            continue;
        }
        injected.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + static_cast<long>(sub) + 1, injected.begin(), injected.end());
    return args;
}

/// Runs the CLI on `args` (without the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-stationary increments of integral functionals of long-range dependent fields"};
    app.name("hwl");
    app.set_help_flag("--help", "print this help and exit");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // variance-curve
    CurveConfig vc;
    Command vc_cmd(app, "variance-curve", "Var(Y(s+h) - Y(s)) along s");
    add_curve_options(vc_cmd, vc, true);
    vc_cmd.output(vc.output);

    // fig2
    CurveConfig f2;
    f2.s_max = 0.96;
    double f2_alpha = 1.0, f2_alpha_1d = 0.6;
    std::string f2_dir = ".";
    Command f2_cmd(app, "fig2", "interval, disk and square curves (h = 0.02)");
    f2_cmd.option("alpha", f2_alpha, "alpha for the disk and the square");
    f2_cmd.option("alpha-1d", f2_alpha_1d, "alpha for the interval");
    add_curve_options(f2_cmd, f2, false);
    f2_cmd.output(f2_dir, "output-dir", "directory for fig2_{interval,disk,square}.csv");

    // crofton-check
    std::string cr_window = "disk", cr_tgrid = "0.0004,0.0009,0.0016", cr_out;
    std::vector<double> cr_center{0.0, 0.0};
    double cr_t = 0.25, cr_h = 0.1, cr_kalpha = 1.0, cr_step = 0.0, cr_samples = 1e6;
    bool cr_origin = false;
    Command cr_cmd(app, "crofton-check", "Crofton residual, or the t -> 0 limits with --origin-limit");
    cr_cmd.option("window", cr_window, "interval, disk, square, cube3, ball3");
    cr_cmd.option("center", cr_center, "homothety center offset of the disk")->delimiter(',')->expected(2);
    cr_cmd.option("t", cr_t, "shell start");
    cr_cmd.option("h", cr_h, "shell width");
    cr_cmd.option("kalpha", cr_kalpha, "Riesz exponent kappa*alpha");
    cr_cmd.option("step", cr_step, "finite-difference step (0: min(0.01, t/4))");
    cr_cmd.option("samples", cr_samples, "samples per estimate");
    cr_cmd.flag("origin-limit", cr_origin, "extrapolate M+, M- and dM/dt to t -> 0 (disks)");
    cr_cmd.option("t-grid", cr_tgrid, "t values for --origin-limit");
    cr_cmd.output(cr_out);

    // moment
    std::string mo_window = "disk", mo_out;
    std::vector<double> mo_center{0.0, 0.0};
    double mo_t = 0.0, mo_h = 1.0, mo_kalpha = 1.0, mo_samples = 1e7;
    bool mo_quasi = false;
    Command mo_cmd(app, "moment", "E|U - V|^{-kalpha} for U, V uniform in the shell");
    mo_cmd.option("window", mo_window, "interval, disk, square, cube3, ball3");
    mo_cmd.option("center", mo_center, "homothety center offset of the disk")->delimiter(',')->expected(2);
    mo_cmd.option("t", mo_t, "shell start");
    mo_cmd.option("h", mo_h, "shell width");
    mo_cmd.option("kalpha", mo_kalpha, "Riesz exponent kappa*alpha");
    mo_cmd.option("samples", mo_samples, "pairs");
    mo_cmd.flag("quasi", mo_quasi, "quasi-random points");
    mo_cmd.output(mo_out);

    // simulate
    std::string si_window = "disk", si_lags = "1,5,10,25,50", si_out, si_dump;
    std::vector<double> si_center{0.0, 0.0};
    double si_alpha = 1.0, si_spacing = 1.0, si_r = 50.0, si_h = 0.1, si_smin = 0.0, si_smax = 0.8, si_sstep = 0.2;
    int si_kappa = 1;
    std::uint64_t si_grid = 1024, si_reps = 200;
    Command si_cmd(app, "simulate", "empirical increment variances from simulated fields");
    si_cmd.option("window", si_window, "interval (1D grid), disk, square");
    si_cmd.option("center", si_center, "homothety center offset of the disk")->delimiter(',')->expected(2);
    si_cmd.option("alpha", si_alpha, "Cauchy covariance exponent");
    si_cmd.option("kappa", si_kappa, "Hermite rank");
    si_cmd.option("grid", si_grid, "grid points per axis");
    si_cmd.option("spacing", si_spacing, "node spacing");
    si_cmd.option("r", si_r, "window scale");
    si_cmd.option("h", si_h, "increment length");
    si_cmd.option("s-min", si_smin, "first s");
    si_cmd.option("s-max", si_smax, "last s");
    si_cmd.option("s-step", si_sstep, "s step");
    si_cmd.option("replicates", si_reps, "independent fields");
    si_cmd.option("lags", si_lags, "covariance check lags (grid units)");
    si_cmd.output(si_out);
    si_cmd.output(si_dump, "dump", "write replicate 0 as a binary field dump");

    // bounds
    std::string bo_window = "disk", bo_out;
    std::vector<double> bo_center{0.0, 0.0};
    double bo_alpha = 1.0, bo_h = 0.1, bo_tlarge = 100.0, bo_eps = 0.0, bo_samples = 1e6;
    int bo_kappa = 1;
    Command bo_cmd(app, "bounds", "lower and upper bounds on the shell energy");
    bo_cmd.option("window", bo_window, "interval, disk, square, cube3, ball3");
    bo_cmd.option("center", bo_center, "homothety center offset of the disk")->delimiter(',')->expected(2);
    bo_cmd.option("alpha", bo_alpha, "long-range exponent");
    bo_cmd.option("kappa", bo_kappa, "Hermite rank");
    bo_cmd.option("h", bo_h, "shell width");
    bo_cmd.option("t-large", bo_tlarge, "far shell start");
    bo_cmd.option("eps", bo_eps, "upper-bound epsilon (0: kappa*alpha/(2n))");
    bo_cmd.option("samples", bo_samples, "pairs per estimate");
    bo_cmd.output(bo_out);

    try {
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }

    try {
        if (vc_cmd.app()->parsed()) {
            Csv csv;
            const std::uint64_t seed = vc_cmd.seed();
            Window w = make_window(vc.window, vc.center);
            VarianceCurve c = compute_curve(vc, w, seed, vc_cmd.threads());
            vc_cmd.header(csv);
            write_curve(csv, c, seed);
            emit(vc.output, csv, out);
        } else if (f2_cmd.app()->parsed()) {
            const std::uint64_t seed = f2_cmd.seed();
            std::filesystem::create_directories(f2_dir);
            for (std::string name : {"interval", "disk", "square"}) {
                CurveConfig cfg = f2;
                cfg.alpha = name == "interval" ? f2_alpha_1d : f2_alpha;
                Window w = make_window(name, {0.0, 0.0});
                VarianceCurve c = compute_curve(cfg, w, seed, f2_cmd.threads());
                Csv csv;
                f2_cmd.header(csv);
                write_curve(csv, c, seed);
                std::string path = (std::filesystem::path(f2_dir) / ("fig2_" + name + ".csv")).string();
                emit(path, csv, out);
                err << "wrote " << path << "\n";
            }
        } else if (cr_cmd.app()->parsed()) {
            const std::uint64_t seed = cr_cmd.seed();
            Window w = make_window(cr_window, cr_center);
            SamplingOptions opt;
            opt.samples = sample_count(cr_samples);
            opt.seed = seed;
            opt.threads = cr_cmd.threads();
            Csv csv;
            if (cr_origin) {
                auto r = origin_limit_check(w, cr_h, cr_kalpha, parse_list(cr_tgrid), opt);
                cr_cmd.header(csv);
                csv.columns({"window", "h", "kalpha", "m_plus_limit", "m_plus_stderr", "m_plus_oracle", "m_minus_limit",
                             "m_minus_stderr", "m_minus_oracle", "derivative_limit", "derivative_stderr",
                             "sigma_margin", "derivative_negative", "extrapolation_flag", "m_plus_display", "seed"});
                csv.row({w.name(), fmt(cr_h), fmt(cr_kalpha), fmt(r.m_plus_limit.value), fmt(r.m_plus_limit.std_error),
                         fmt(r.m_plus_oracle), fmt(r.m_minus_limit.value), fmt(r.m_minus_limit.std_error),
                         fmt(r.m_minus_oracle), fmt(r.derivative_limit.value), fmt(r.derivative_limit.std_error),
                         fmt(r.sigma_margin), fmt(r.derivative_negative), fmt(r.extrapolation_flag),
                         fmt(r.m_plus_display), std::to_string(seed)});
            } else {
                if (cr_step == 0.0) cr_step = default_fd_step(cr_t);
                auto r = crofton_residual(w, cr_t, cr_h, cr_kalpha, cr_step, opt);
                cr_cmd.header(csv);
                csv.columns({"window", "t", "h", "kalpha", "step", "m_value", "m_value_stderr", "m_plus",
                             "m_plus_stderr", "m_minus", "m_minus_stderr", "fd_derivative", "fd_stderr", "rhs",
                             "rhs_stderr", "residual", "tolerance", "bias", "step_flag", "pass", "seed"});
                csv.row({w.name(), fmt(cr_t), fmt(cr_h), fmt(cr_kalpha), fmt(cr_step), fmt(r.m_value.value),
                         fmt(r.m_value.std_error), fmt(r.m_plus.value), fmt(r.m_plus.std_error), fmt(r.m_minus.value),
                         fmt(r.m_minus.std_error), fmt(r.fd_derivative.value), fmt(r.fd_derivative.std_error),
                         fmt(r.rhs.value), fmt(r.rhs.std_error), fmt(r.residual), fmt(r.tolerance), fmt(r.bias),
                         fmt(r.step_flag), fmt(r.passed), std::to_string(seed)});
            }
            emit(cr_out, csv, out);
        } else if (mo_cmd.app()->parsed()) {
            const std::uint64_t seed = mo_cmd.seed();
            Window w = make_window(mo_window, mo_center);
            SamplingOptions opt;
            opt.samples = sample_count(mo_samples);
            opt.seed = seed;
            opt.threads = mo_cmd.threads();
            opt.quasi_random = mo_quasi;
            Estimate e = mean_riesz(shell(w, mo_t, mo_h), mo_kalpha, opt);
            Csv csv;
            mo_cmd.header(csv);
            csv.columns({"window", "t", "h", "kalpha", "mean", "stderr", "method", "samples", "seed"});
            csv.row({w.name(), fmt(mo_t), fmt(mo_h), fmt(mo_kalpha), fmt(e.value), fmt(e.std_error),
                     std::string(to_string(e.method)), std::to_string(e.samples), std::to_string(seed)});
            emit(mo_out, csv, out);
        } else if (si_cmd.app()->parsed()) {
            const std::uint64_t seed = si_cmd.seed();
            Window w = make_window(si_window, si_center);
            const KernelParams p = KernelParams::make(w.dim(), si_kappa, si_alpha);
            FieldSpec spec;
            spec.dim = w.dim();
            spec.grid_side = si_grid;
            spec.spacing = si_spacing;
            spec.model = {CovarianceFamily::cauchy, si_alpha, 1.0, w.dim()};
            spec.seed = seed;
            spec.replicates = si_reps;
            spec.threads = si_cmd.threads();
            std::vector<std::size_t> lags;
            for (double l : parse_list(si_lags)) {
                if (!(l >= 0.0) || l != std::floor(l)) throw DomainError("lags must be nonnegative integers");
                lags.push_back(static_cast<std::size_t>(l));
            }
            auto c = empirical_variance_curve(spec, w, p, si_r, si_h, s_range(si_smin, si_smax, si_sstep), lags);
            if (!si_dump.empty()) write_field_dump(si_dump, simulate_field(spec, 0));
            Csv csv;
            si_cmd.header(csv);
            csv.columns({"s", "h", "variance", "stderr", "method", "window", "alpha", "kappa", "seed"});
            for (const auto& pt : c.points)
                csv.row({fmt(pt.s), fmt(si_h), fmt(pt.variance), fmt(pt.std_error), "field", c.window, fmt(si_alpha),
                         std::to_string(si_kappa), std::to_string(seed)});
            csv.note("result var_y1 " + fmt(c.at_one.variance) + " stderr " + fmt(c.at_one.std_error) + " analytic " +
                     fmt(std::pow(c1(p.n, p.alpha), -p.kappa)));
            csv.note("result slope " + fmt(c.slope) + " stderr " + fmt(c.slope_std_error) + " p_value " +
                     fmt(c.slope_p_value));
            csv.note("result tiles " + std::to_string(c.tiles) + " torus_side " + std::to_string(c.torus_side));
            for (const auto& l : c.covariances)
                csv.note("result lag " + std::to_string(l.lag) + " covariance " + fmt(l.mean) + " stderr " +
                         fmt(l.std_error) + " model " + fmt(l.model));
            emit(si_out, csv, out);
        } else if (bo_cmd.app()->parsed()) {
            const std::uint64_t seed = bo_cmd.seed();
            Window w = make_window(bo_window, bo_center);
            const KernelParams p = KernelParams::make(w.dim(), bo_kappa, bo_alpha);
            SamplingOptions opt;
            opt.samples = sample_count(bo_samples);
            opt.seed = seed;
            opt.threads = bo_cmd.threads();
            std::optional<double> eps;
            if (bo_eps != 0.0) eps = bo_eps;
            auto r = bound_check(w, p, bo_h, bo_tlarge, opt, eps);
            Csv csv;
            bo_cmd.header(csv);
            csv.columns({"window", "alpha", "kappa", "h", "t_large", "epsilon", "lower_constant", "lower_bound",
                         "energy_at_zero", "energy_at_zero_stderr", "upper_bound", "energy_at_large_t",
                         "energy_at_large_t_stderr", "lower_ok", "upper_ok", "lower_margin", "upper_margin",
                         "preasymptotic", "seed"});
            csv.row({w.name(), fmt(bo_alpha), std::to_string(bo_kappa), fmt(bo_h), fmt(bo_tlarge), fmt(r.epsilon),
                     fmt(r.lower_constant), fmt(r.lower_bound), fmt(r.energy_at_zero.value),
                     fmt(r.energy_at_zero.std_error), fmt(r.upper_bound), fmt(r.energy_at_large_t.value),
                     fmt(r.energy_at_large_t.std_error), fmt(r.lower_ok), fmt(r.upper_ok), fmt(r.lower_margin),
                     fmt(r.upper_margin), fmt(r.preasymptotic), std::to_string(seed)});
            emit(bo_out, csv, out);
        }
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return numerical;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal;
    }
    return ok;
}

}  // namespace hwl::cli
