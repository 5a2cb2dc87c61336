#include "hk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hk/bessel.hpp"
#include "hk/branch_io.hpp"
#include "hk/contour.hpp"
#include "hk/dispersion.hpp"
#include "hk/errors.hpp"
#include "hk/greens.hpp"

namespace hk::cli {

namespace {

using nlohmann::json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const Cell& c) {
    struct V {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(V{}, c);
}

json json_cell(const Cell& c) {
    struct V {
        json operator()(std::monostate) const { return nullptr; }
        json operator()(double v) const { return v; }
        json operator()(long long v) const { return v; }
        json operator()(const std::string& v) const { return v; }
    };
    return std::visit(V{}, c);
}

std::string render_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
    return os.str();
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
        rows.push_back(std::move(r));
    }
    return {{"schema", io::kSchema}, {"command", t.command}, {"columns", t.columns}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Options

struct Global {
    std::string out;
    std::string format;
    std::optional<int> modes, ntheta, nrho, kmax;
    std::optional<double> tol;

    bool json_output(bool json_by_default) const { return format.empty() ? json_by_default : format == "json"; }

    Discretization disc(Discretization base = {}) const {
        if (modes) base.n_modes = *modes;
        if (ntheta) base.n_theta = *ntheta;
        if (nrho) base.n_rho = *nrho;
        if (kmax) base.k_max = *kmax;
        if (tol) base.tol = *tol;
        return base;
    }
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
    if (!f) throw UsageError("write failed: " + path);
}

void emit(const Global& g, const Table& t, std::ostream& out, bool json_by_default = false) {
    write_text(g.out, g.json_output(json_by_default) ? table_json(t).dump(2) + "\n" : render_csv(t), out);
}

// "3" or "2..10".
std::pair<int, int> parse_range(const std::string& s, int lowest, const char* what) {
    int lo = 0, hi = 0;
    try {
        const auto dots = s.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            lo = hi = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } else {
            const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
            lo = std::stoi(a, &used);
            if (used != a.size()) throw std::invalid_argument(s);
            hi = std::stoi(b, &used);
            if (used != b.size()) throw std::invalid_argument(s);
        }
    } catch (const std::logic_error&) {
        throw UsageError(std::string(what) + ": expected N or N..M, got '" + s + "'");
    }
    if (lo < lowest) throw UsageError(std::string(what) + ": lower end must be >= " + std::to_string(lowest));
    if (hi < lo) throw UsageError(std::string(what) + ": empty range");
    return {lo, hi};
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
}

// ---------------------------------------------------------------------------
// Commands

struct DispersionArgs {
    double a = 1.0, h = 1.0;
    std::string m = "2..10";
};

int cmd_dispersion(const Global& g, const DispersionArgs& o, std::ostream& out) {
    const auto [lo, hi] = parse_range(o.m, 2, "--m");
    const DiskConfig cfg(o.a, HelicalDomain(o.h));
    Table t{"dispersion", {"m", "omega_m", "ikprime_product", "limit_2d", "gap_to_limit"}, {}};
    for (int m = lo; m <= hi; ++m) {
        const double om = dispersion::omega_simply(m, cfg);
        const double limit = (m - 1.0) / (2.0 * m);
        t.rows.push_back({static_cast<long long>(m), om, bessel::product_iprime_kprime(m, o.a / o.h), limit,
                          std::fabs(om - limit)});
    }
    emit(g, t, out);
    return kExitOk;
}

struct DoublyArgs {
    double a1 = 1.0, a2 = 0.5, h = 1.0;
    std::string m = "2..20";
};

int cmd_dispersion_doubly(const Global& g, const DoublyArgs& o, std::ostream& out) {
    const auto [lo, hi] = parse_range(o.m, 1, "--m");
    require(std::isfinite(o.a1) && std::isfinite(o.a2) && o.a1 > o.a2 && o.a2 > 0.0, "requires a1 > a2 > 0");
    const AnnulusConfig cfg(o.a1, o.a2, HelicalDomain(o.h));
    const int threshold = dispersion::doubly_threshold(cfg, hi);
    const double ups = dispersion::upsilon(o.a1, o.a2, cfg.domain);
    Table t{"dispersion-doubly", {"m", "delta_m", "omega_plus", "omega_minus", "upsilon", "threshold_flag"}, {}};
    for (int m = lo; m <= hi; ++m) {
        const double delta = dispersion::discriminant(m, cfg);
        std::vector<Cell> row{static_cast<long long>(m), delta};
        if (delta > 0.0) {
            const auto r = dispersion::omega_doubly(m, cfg);
            row.insert(row.end(), {r.plus, r.minus, ups});
            row.emplace_back(threshold > 0 && m >= threshold ? "above" : "below");
        } else {
            row.insert(row.end(), {Cell{}, Cell{}, ups, std::string("degenerate")});
        }
        t.rows.push_back(std::move(row));
    }
    emit(g, t, out);
    return kExitOk;
}

struct MonotonicityArgs {
    double z_min = 1e-3, z_max = 1e3;
    int z_points = 200, nu_max = 500;
    std::string minima;
};

int cmd_monotonicity(const Global& g, const MonotonicityArgs& o, std::ostream& out) {
    require(std::isfinite(o.z_min) && o.z_min > 0.0, "--z-min must be positive");
    require(std::isfinite(o.z_max) && o.z_max > o.z_min, "--z-max must exceed --z-min");
    require(o.z_points >= 2, "--z-points must be >= 2");
    require(o.nu_max >= 3, "--nu-max must be >= 3");
    const auto rep = dispersion::scan_monotonicity(dispersion::log_grid(o.z_min, o.z_max, o.z_points), 3, o.nu_max);

    Table minima{"monotonicity", {"z", "min_f"}, {}};
    for (std::size_t i = 0; i < rep.z_grid.size(); ++i) minima.rows.push_back({rep.z_grid[i], rep.min_f_per_z[i]});
    auto violations = [](const std::vector<dispersion::Violation>& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back({{"z", x.z}, {"nu", x.nu}});
        return a;
    };
    const bool holds = rep.violations.empty() && rep.product_violations.empty();
    const json report = {{"schema", io::kSchema},
                         {"command", "monotonicity"},
                         {"z_range", {o.z_min, o.z_max}},
                         {"z_points", o.z_points},
                         {"nu_range", {rep.nu_range.first, rep.nu_range.second}},
                         {"min_f", rep.min_f},
                         {"min_product_gap", rep.min_product_gap},
                         {"violations", violations(rep.violations)},
                         {"product_violations", violations(rep.product_violations)},
                         {"claim_holds", holds}};
    if (g.json_output(true))
        write_text(g.out, report.dump(2) + "\n", out);
    else
        write_text(g.out, render_csv(minima), out);
    if (!o.minima.empty()) write_text(o.minima, render_csv(minima), out);
    return holds ? kExitOk : kExitFailure;
}

Table polylines(const io::BranchFile& f, int samples) {
    Table t{"bifurcate", {"point", "component", "theta", "radius", "x", "y"}, {}};
    for (std::size_t i = 0; i < f.points.size(); ++i)
        for (std::size_t c = 0; c < f.points[i].contours.size(); ++c)
            for (int j = 0; j <= samples; ++j) {
                const double th = kTwoPi * j / samples;
                const double r = f.points[i].contours[c].radius(th);
                t.rows.push_back({static_cast<long long>(i), static_cast<long long>(c), th, r, r * std::cos(th),
                                  r * std::sin(th)});
            }
    return t;
}

struct BifurcateArgs {
    double a = 1.0, h = 1.0;
    int m = 3;
    std::vector<double> s;
    std::vector<double> doubly;
    std::string branch = "+";
    std::string table, polylines;
    int samples = 256;
};

int cmd_bifurcate(const Global& g, const BifurcateArgs& o, std::ostream& out) {
    require(o.m >= 2, "--m must be >= 2");
    require(!o.s.empty(), "--s needs at least one amplitude");
    require(o.samples >= 4, "--samples must be >= 4");
    io::BranchFile f;
    auto& c = f.config;
    c.doubly = !o.doubly.empty();
    c.h = o.h;
    c.m = o.m;
    c.disc = g.disc();
    c.disc.validate(o.m);
    double omega_m = 0.0;
    if (c.doubly) {
        require(o.doubly.size() == 2, "--doubly takes A1 A2");
        require(o.doubly[0] > o.doubly[1] && o.doubly[1] > 0.0, "--doubly requires a1 > a2 > 0");
        c.a1 = o.doubly[0];
        c.a2 = o.doubly[1];
        c.branch = o.branch == "+" ? dispersion::Branch::Plus : dispersion::Branch::Minus;
        const AnnulusConfig cfg(c.a1, c.a2, HelicalDomain(c.h));
        f.points = contour::bifurcate_doubly(cfg, c.m, c.branch, o.s, c.disc);
        const auto roots = dispersion::omega_doubly(c.m, cfg);
        omega_m = c.branch == dispersion::Branch::Plus ? roots.plus : roots.minus;
    } else {
        c.a = o.a;
        const DiskConfig cfg(c.a, HelicalDomain(c.h));
        f.points = contour::bifurcate_simply(cfg, c.m, o.s, c.disc);
        omega_m = dispersion::omega_simply(c.m, cfg);
    }

    Table t{"bifurcate", {"s", "omega", "omega_shift", "residual"}, {}};
    for (const auto& p : f.points) t.rows.push_back({p.s, p.omega, p.omega - omega_m, p.residual});
    if (g.json_output(true))
        write_text(g.out, io::to_json(f).dump(2) + "\n", out);
    else
        write_text(g.out, render_csv(t), out);
    if (!o.table.empty()) write_text(o.table, render_csv(t), out);
    if (!o.polylines.empty()) write_text(o.polylines, render_csv(polylines(f, o.samples)), out);
    return kExitOk;
}

struct ExportArgs {
    std::string branch;
    int point = 0;
    double turns = 1.0;
    int samples = 64;
    int sweep = 64;
};

int cmd_export3d(const Global& g, const ExportArgs& o, std::ostream& out) {
    require(std::isfinite(o.turns) && o.turns > 0.0, "--turns must be positive");
    require(o.samples >= 4 && o.sweep >= 2, "--samples must be >= 4 and --sweep >= 2");
    const io::BranchFile f = io::read_branch_file(o.branch);
    require(o.point >= 0 && o.point < static_cast<int>(f.points.size()),
            "--point out of range (file has " + std::to_string(f.points.size()) + " points)");
    const BranchPoint& p = f.points[o.point];
    const double h = f.config.h;
    const double span = kTwoPi * o.turns;
    const int steps = std::max(1, static_cast<int>(std::ceil(o.sweep * o.turns)));
    Table t{"export3d", {"component", "sweep_angle", "theta", "x", "y", "z"}, {}};
    for (int i = 0; i <= steps; ++i) {
        const double tp = i == steps ? span : span * i / steps;
        const double ct = std::cos(tp), st = std::sin(tp);
        for (std::size_t c = 0; c < p.contours.size(); ++c)
            for (int j = 0; j < o.samples; ++j) {
                const double th = kTwoPi * j / o.samples;
                const double r = p.contours[c].radius(th);
                const double x1 = r * std::cos(th), x2 = r * std::sin(th);
                t.rows.push_back({static_cast<long long>(c), tp, th, x1 * ct + x2 * st, -x1 * st + x2 * ct, h * tp});
            }
    }
    emit(g, t, out);
    return kExitOk;
}

struct VerifyArgs {
    std::string branch;
};

int cmd_verify(const Global& g, const VerifyArgs& o, std::ostream& out) {
    const io::BranchFile f = io::read_branch_file(o.branch);
    const auto& c = f.config;
    const HelicalDomain domain(c.h);
    const Discretization fine = c.disc.refined();
    const double limit = 10.0 * c.disc.tol;
    Table t{"verify",
            {"index", "s", "omega", "stored_residual", "refined_residual", "boundary_residual", "psi_range", "status"},
            {}};
    bool ok = true;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        BranchPoint q = f.points[i];
        if (q.k_max_used > 0) q.k_max_used = std::min(2 * q.k_max_used, Discretization::kMaxGreenModes);
        const double refined = contour::point_residual(q, domain, fine);
        const auto rep = contour::boundary_report(f.points[i], domain, fine);
        const bool pass = refined <= limit;
        ok = ok && pass;
        t.rows.push_back({static_cast<long long>(i), q.s, q.omega, f.points[i].residual, refined, rep.residual,
                          rep.psi_range, std::string(pass ? "pass" : "fail")});
    }
    emit(g, t, out);
    return ok ? kExitOk : kExitFailure;
}

struct GreensArgs {
    std::string m = "0..3";
    double h = 1.0, rho0 = 1.0, rho_min = 0.05, rho_max = 2.0;
    int points = 40;
};

int cmd_greens_table(const Global& g, const GreensArgs& o, std::ostream& out) {
    const auto [lo, hi] = parse_range(o.m, 0, "--m");
    require(o.rho_min > 0.0 && o.rho_max > o.rho_min, "requires 0 < rho-min < rho-max");
    require(o.points >= 2, "--points must be >= 2");
    const HelicalDomain domain(o.h);
    Table t{"greens-table", {"m", "rho", "rho0", "g"}, {}};
    for (int m = lo; m <= hi; ++m)
        for (int i = 0; i < o.points; ++i) {
            const double rho = o.rho_min + (o.rho_max - o.rho_min) * i / (o.points - 1);
            t.rows.push_back({static_cast<long long>(m), rho, o.rho0, greens::green_mode(m, rho, o.rho0, domain)});
        }
    emit(g, t, out);
    return kExitOk;
}

json iterate_dump(const ContinuationError& e) {
    return {{"error", e.what()}, {"last_iterate", e.last_iterate()}, {"residual_history", e.residual_history()}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Helical Kelvin waves: dispersion tables, certificates and bifurcation branches", "helix_kelvin"};
    app.set_help_flag("--help", "Print help and exit");  // -h would shadow the pitch option --h
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--modes", g.modes, "Fourier modes per contour")->check(CLI::Range(1, 256));
    app.add_option("--ntheta", g.ntheta, "Angular nodes");
    app.add_option("--nrho", g.nrho, "Radial Gauss nodes per panel");
    app.add_option("--kmax", g.kmax, "Green-mode cutoff (0 adaptive)");
    app.add_option("--tol", g.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);

    DispersionArgs da;
    auto* disp = app.add_subcommand("dispersion", "Disk dispersion relation Omega_m");
    disp->add_option("--a", da.a, "Disk radius")->capture_default_str();
    disp->add_option("--h", da.h, "Helical pitch")->capture_default_str();
    disp->add_option("--m", da.m, "Mode range N or N..M")->capture_default_str();

    DoublyArgs db;
    auto* disp2 = app.add_subcommand("dispersion-doubly", "Annulus roots Omega_m^+-");
    disp2->add_option("--a1", db.a1, "Outer radius")->capture_default_str();
    disp2->add_option("--a2", db.a2, "Inner radius")->capture_default_str();
    disp2->add_option("--h", db.h, "Helical pitch")->capture_default_str();
    disp2->add_option("--m", db.m, "Mode range N or N..M")->capture_default_str();

    MonotonicityArgs ma;
    auto* mono = app.add_subcommand("monotonicity", "Scan the monotonicity certificate f_z(nu) > 0");
    mono->add_option("--z-min", ma.z_min)->capture_default_str();
    mono->add_option("--z-max", ma.z_max)->capture_default_str();
    mono->add_option("--z-points", ma.z_points)->capture_default_str();
    mono->add_option("--nu-max", ma.nu_max)->capture_default_str();
    mono->add_option("--minima", ma.minima, "Also write per-z minima as CSV");

    BifurcateArgs ba;
    auto* bif = app.add_subcommand("bifurcate", "Continue a branch from the trivial solution");
    bif->add_option("--a", ba.a, "Disk radius")->capture_default_str();
    bif->add_option("--h", ba.h, "Helical pitch")->capture_default_str();
    bif->add_option("--m", ba.m, "Symmetry order")->capture_default_str();
    bif->add_option("--s", ba.s, "Amplitudes, comma separated")->delimiter(',')->required();
    bif->add_option("--doubly", ba.doubly, "Annulus radii A1 A2")->expected(2);
    bif->add_option("--branch", ba.branch, "+ or -")->check(CLI::IsMember({"+", "-"}))->capture_default_str();
    bif->add_option("--table", ba.table, "Also write (s, omega) as CSV");
    bif->add_option("--polylines", ba.polylines, "Also write sampled boundaries as CSV");
    bif->add_option("--samples", ba.samples, "Boundary samples per polyline")->capture_default_str();

    ExportArgs ea;
    auto* exp = app.add_subcommand("export3d", "Sweep a branch point along the helical map");
    exp->add_option("--branch", ea.branch, "Branch file")->required();
    exp->add_option("--point", ea.point, "Point index")->capture_default_str();
    exp->add_option("--turns", ea.turns)->capture_default_str();
    exp->add_option("--samples", ea.samples, "Boundary samples")->capture_default_str();
    exp->add_option("--sweep", ea.sweep, "Sweep steps per turn")->capture_default_str();

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Re-check a branch file at a finer discretization");
    ver->add_option("--branch", va.branch, "Branch file")->required();

    GreensArgs ga;
    auto* grn = app.add_subcommand("greens-table", "Tabulate Green modes G_m(rho, rho0)");
    grn->add_option("--m", ga.m, "Mode range N or N..M")->capture_default_str();
    grn->add_option("--h", ga.h)->capture_default_str();
    grn->add_option("--rho0", ga.rho0)->capture_default_str();
    grn->add_option("--rho-min", ga.rho_min)->capture_default_str();
    grn->add_option("--rho-max", ga.rho_max)->capture_default_str();
    grn->add_option("--points", ga.points)->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*disp) return cmd_dispersion(g, da, out);
        if (*disp2) return cmd_dispersion_doubly(g, db, out);
        if (*mono) return cmd_monotonicity(g, ma, out);
        if (*bif) return cmd_bifurcate(g, ba, out);
        if (*exp) return cmd_export3d(g, ea, out);
        if (*ver) return cmd_verify(g, va, out);
        if (*grn) return cmd_greens_table(g, ga, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const StepSizeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DegenerateSpectrum& e) {
        err << "error: degenerate spectrum: " << e.what() << " (discriminant " << format_double(e.discriminant())
            << ")\n";
        return kExitFailure;
    } catch (const ContinuationError& e) {
        err << "error: continuation failed\n" << iterate_dump(e).dump(2) << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace hk::cli
