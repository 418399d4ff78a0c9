// towlab: solvers, game simulations, and mean-value diagnostics for the
// tug-of-war-with-noise family of dynamic programming principles.
//
// Subcommands: solve, solve-parabolic, value, cylinder, mvp, oracle.
// Every command is deterministic given its flags (including --seed); CSV
// floats carry 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "towlab/discrete.hpp"
#include "towlab/elliptic.hpp"
#include "towlab/game.hpp"
#include "towlab/io.hpp"
#include "towlab/mean_value.hpp"
#include "towlab/parabolic.hpp"
#include "towlab/regularity.hpp"

using namespace towlab;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitUnreliable = 3;

std::vector<double> parse_number_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + cell + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string("empty list for ") + what);
    return out;
}

Point to_point(const std::vector<double>& xs, const char* what) {
    if (xs.empty() || xs.size() > static_cast<size_t>(kMaxDim))
        throw std::invalid_argument(std::string(what) + ": dimension must be 1..4");
    Point p(static_cast<int>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) p[static_cast<int>(i)] = xs[i];
    return p;
}

// interval:a,b | box:lo...,hi... | ball:center...,radius
Domain parse_domain(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("domain spec must look like interval:0,1 or ball:0,0,1");
    const std::string kind = spec.substr(0, colon);
    const auto nums = parse_number_list(spec.substr(colon + 1), "domain parameters");
    if (kind == "interval") {
        if (nums.size() != 2) throw std::invalid_argument("interval takes two endpoints");
        return Domain::interval(nums[0], nums[1]);
    }
    if (kind == "box") {
        if (nums.size() % 2 != 0 || nums.size() < 2)
            throw std::invalid_argument("box takes lo coordinates then hi coordinates");
        const auto n = static_cast<std::ptrdiff_t>(nums.size() / 2);
        return Domain::box(to_point({nums.begin(), nums.begin() + n}, "box lo"),
                           to_point({nums.begin() + n, nums.end()}, "box hi"));
    }
    if (kind == "ball") {
        if (nums.size() < 2) throw std::invalid_argument("ball takes a center and a radius");
        return Domain::ball(to_point({nums.begin(), nums.end() - 1}, "ball center"),
                            nums.back());
    }
    throw std::invalid_argument("unknown domain kind: " + kind);
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse p: '" + s + "'");
    }
}

// const:c | linear | step:threshold
ScalarField parse_payoff(const std::string& spec) {
    if (spec == "linear") return [](const Point& x) { return x[0]; };
    if (spec.rfind("const:", 0) == 0) {
        const double c = std::stod(spec.substr(6));
        return [c](const Point&) { return c; };
    }
    if (spec.rfind("step:", 0) == 0) {
        const double thr = std::stod(spec.substr(5));
        return [thr](const Point& x) { return x[0] < thr ? 0.0 : 1.0; };
    }
    throw std::invalid_argument("unknown payoff spec: " + spec +
                                " (use linear, const:<v>, step:<thr>)");
}

fs::path resolve_out_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        if (const char* env = std::getenv("TOWLAB_OUT")) dir = env;
    }
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return dir;
}

void dump_config_if_requested(const CLI::App* sub, bool requested) {
    if (!requested) return;
    std::cout << "# resolved configuration\n" << sub->config_to_str(true, false);
}

struct CommonFlags {
    std::string out_dir;
    int threads = 1;
    bool dump_config = false;
    std::string config_file;
};

void add_common(CLI::App* sub, CommonFlags& c) {
    sub->add_option("--out", c.out_dir,
                    "Output directory (default: $TOWLAB_OUT or the working directory)");
    sub->add_option("--threads", c.threads, "Worker threads; results do not depend on this")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--dump-config", c.dump_config, "Print the resolved effective config");
    sub->add_option("--config", c.config_file,
                    "Flat key=value config file; flags take precedence");
}

// Expands a flat key=value config file into arguments appended after the
// user's own; keys already given on the command line are skipped, which is
// what gives explicit flags precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    auto has_flag = [&](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config file line is not key=value: " + line);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        if (!value.empty() && value.front() == '"' && value.back() == '"' && value.size() > 1)
            value = value.substr(1, value.size() - 2);
        const std::string flag = "--" + key;
        if (key == "config" || has_flag(flag)) continue;
        if (value == "true") {
            args.push_back(flag);
        } else if (value == "false") {
            // flag stays at its default
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    CommonFlags common;
    std::string domain = "interval:0,1";
    std::string p = "2";
    double eps = 0.1;
    int k = 4;
    double tol = 1e-10;
    long max_sweeps = -1;
    bool gauss_seidel = false;
    std::string payoff = "linear";
    std::string sweep_eps;
};

int run_solve(const SolveArgs& a, const CLI::App* sub) {
    dump_config_if_requested(sub, a.common.dump_config);
    const Domain dom = parse_domain(a.domain);
    const double p = parse_p(a.p);
    const ScalarField F = parse_payoff(a.payoff);
    const fs::path out = resolve_out_dir(a.common.out_dir);
    SolveOptions opts;
    opts.tol = a.tol;
    opts.max_sweeps = a.max_sweeps;
    opts.threads = a.common.threads;
    opts.gauss_seidel = a.gauss_seidel;

    const std::vector<double> eps_list =
        a.sweep_eps.empty() ? std::vector<double>{a.eps}
                            : parse_number_list(a.sweep_eps, "--sweep-eps");

    bool all_converged = true;
    std::ostringstream sweep_csv;
    sweep_csv << "eps,sup_error_vs_line,sweeps,final_defect,converged\n";
    for (size_t i = 0; i < eps_list.size(); ++i) {
        const double eps = eps_list[i];
        const auto params = GameParams::for_game(p, dom.dim(), eps);
        auto lattice = Lattice::build(dom, eps, a.k);
        auto [field, report] = solve(lattice, F, params, opts);
        all_converged = all_converged && report.converged;

        // sup deviation from the affine ramp between the endpoint payoffs
        double line_err = std::numeric_limits<double>::quiet_NaN();
        if (dom.shape() == Domain::Shape::interval) {
            const double a0 = dom.bbox_lo()[0], b0 = dom.bbox_hi()[0];
            const double fa = F(Point{a0}), fb = F(Point{b0});
            line_err = 0;
            for (int64_t idx : lattice->interior_nodes()) {
                const double x = lattice->node_point(idx)[0];
                const double line = fa + (x - a0) / (b0 - a0) * (fb - fa);
                line_err = std::max(line_err, std::abs(field[idx] - line));
            }
        }
        sweep_csv << format_double(eps) << "," << format_double(line_err) << ","
                  << report.sweeps << "," << format_double(report.final_defect) << ","
                  << (report.converged ? "true" : "false") << "\n";

        const std::string tag = eps_list.size() == 1 ? "" : "_" + std::to_string(i);
        write_field_csv_file(field, (out / ("field" + tag + ".csv")).string());
        write_text_file((out / ("report" + tag + ".json")).string(),
                        solve_report_json(report));
        std::cout << "solve eps=" << eps << ": sweeps=" << report.sweeps
                  << " defect=" << report.final_defect
                  << (report.converged ? "" : " (NOT CONVERGED)") << "\n";
    }
    if (eps_list.size() > 1) write_text_file((out / "sweep.csv").string(), sweep_csv.str());
    return all_converged ? kExitOk : kExitNoConvergence;
}

// ------------------------------------------------------- solve-parabolic

struct ParabolicArgs {
    CommonFlags common;
    std::string domain = "interval:0,1";
    std::string p = "2";
    double eps = 0.1;
    int k = 4;
    double horizon = 0.1;
    std::string payoff = "linear";
};

int run_solve_parabolic(const ParabolicArgs& a, const CLI::App* sub) {
    dump_config_if_requested(sub, a.common.dump_config);
    const Domain dom = parse_domain(a.domain);
    const double p = parse_p(a.p);
    const ScalarField F = parse_payoff(a.payoff);
    const SpaceTimeFn Ft = [F](const Point& x, double) { return F(x); };
    const fs::path out = resolve_out_dir(a.common.out_dir);

    const auto params = GameParams::for_game(p, dom.dim(), a.eps);
    auto lattice = Lattice::build(dom, a.eps, a.k);
    const auto field = solve_parabolic(lattice, Ft, a.horizon, params, a.common.threads);
    if (field.degenerate_horizon)
        std::cerr << "warning: horizon below eps^2/2, returning the initial slice only\n";
    write_spacetime_csv_file(field, (out / "spacetime.csv").string());

    nlohmann::ordered_json meta;
    meta["horizon"] = field.horizon;
    meta["epsilon"] = a.eps;
    meta["p"] = p;
    meta["n"] = dom.dim();
    meta["k"] = a.k;
    meta["slice_count"] = field.slice_count;
    meta["slice_dt"] = field.slice_dt;
    meta["degenerate_horizon"] = field.degenerate_horizon;
    write_text_file((out / "spacetime_meta.json").string(), meta.dump(2) + "\n");
    std::cout << "solve-parabolic: " << field.slice_count << " slices written\n";
    return kExitOk;
}

// ---------------------------------------------------------------- value

struct ValueArgs {
    CommonFlags common;
    std::string domain = "interval:0,1";
    std::string p = "2";
    double eps = 0.1;
    int k = 4;
    std::string start = "0.5";
    std::string payoff = "step:0.5";
    long trials = 10000;
    uint64_t seed = 1;
    long round_cap = -1;
    std::string strategy_i = "greedy";
    std::string strategy_ii = "greedy";
    double cap_threshold = 0.05;
    bool timed = false;
    double t0 = 0.1;
    long traj_count = 0;
};

int run_value(const ValueArgs& a, const CLI::App* sub) {
    dump_config_if_requested(sub, a.common.dump_config);
    const Domain dom = parse_domain(a.domain);
    const double p = parse_p(a.p);
    const auto params = GameParams::for_game(p, dom.dim(), a.eps);
    const ScalarField F = parse_payoff(a.payoff);
    const Point start = to_point(parse_number_list(a.start, "--start"), "--start");
    const fs::path out = resolve_out_dir(a.common.out_dir);

    // Bare greedy specs solve the DPP on the configured lattice and play
    // greedily on that field; greedy-*:file.csv loads a solved field instead.
    std::optional<LatticeField> solved;
    auto solved_field = [&]() -> const LatticeField& {
        if (!solved) {
            auto lattice = Lattice::build(dom, a.eps, a.k);
            SolveOptions opts;
            opts.threads = a.common.threads;
            auto [field, report] = solve(lattice, F, params, opts);
            if (!report.converged)
                throw std::runtime_error(
                    "internal DPP solve for the greedy strategies did not converge");
            solved = std::move(field);
        }
        return *solved;
    };
    auto make_strategy = [&](const std::string& spec, GreedyMode def) -> Strategy {
        if (spec == "none") {
            Strategy s;
            s.name = "none";
            s.next_move = [](std::span<const Point>, std::span<const Toss>, const Point&,
                             double) -> Point {
                throw std::runtime_error(
                    "strategy 'none' was asked to move; use it only when alpha = 0");
            };
            return s;
        }
        if (spec.rfind("pull:", 0) == 0)
            return pull_toward(
                to_point(parse_number_list(spec.substr(5), "pull target"), "pull target"));
        GreedyMode mode = def;
        std::string rest;
        if (spec.rfind("greedy-max", 0) == 0) {
            mode = GreedyMode::maximize;
            rest = spec.substr(10);
        } else if (spec.rfind("greedy-min", 0) == 0) {
            mode = GreedyMode::minimize;
            rest = spec.substr(10);
        } else if (spec.rfind("greedy", 0) == 0) {
            rest = spec.substr(6);
        } else {
            throw std::invalid_argument("unknown strategy spec: " + spec);
        }
        if (rest.empty()) return greedy_strategy(solved_field(), mode);
        if (rest[0] != ':') throw std::invalid_argument("unknown strategy spec: " + spec);
        auto lattice = Lattice::build(dom, a.eps, a.k);
        return greedy_strategy(read_field_csv_file(lattice, rest.substr(1)), mode);
    };
    const Strategy sI = make_strategy(a.strategy_i, GreedyMode::maximize);
    const Strategy sII = make_strategy(a.strategy_ii, GreedyMode::minimize);

    ValueEstimate est;
    const SpaceTimePayoffFn Ft = [F](const Point& x, double) { return F(x); };
    if (a.timed) {
        est = estimate_value_timed(start, a.t0, sI, sII, params, Ft, dom, a.trials, a.seed,
                                   a.common.threads);
    } else {
        est = estimate_value(start, sI, sII, params, F, dom, a.trials, a.seed, a.round_cap,
                             a.common.threads);
    }
    write_text_file((out / "estimate.json").string(), value_estimate_json(est));

    if (a.traj_count > 0) {
        std::ostringstream os;
        os << "round";
        for (int i = 0; i < dom.dim(); ++i) os << ",x" << (i + 1);
        os << ",toss,t_remaining\n";
        for (long t = 0; t < a.traj_count; ++t) {
            Rng rng = Rng::child(a.seed, static_cast<uint64_t>(t));
            const Trajectory traj =
                a.timed ? play_timed(start, a.t0, sI, sII, params, Ft, dom, rng)
                        : play(start, sI, sII, params, F, dom, rng,
                               a.round_cap < 1 ? default_round_cap(dom, a.eps) : a.round_cap);
            double t_rem = a.timed ? a.t0 : 0.0;
            for (size_t r = 0; r < traj.positions.size(); ++r) {
                os << r;
                for (int i = 0; i < dom.dim(); ++i)
                    os << "," << format_double(traj.positions[r][i]);
                const char* toss = r == 0 ? "start"
                                   : traj.toss_log[r - 1] == Toss::noise
                                       ? "noise"
                                       : (traj.toss_log[r - 1] == Toss::player_one ? "I" : "II");
                os << "," << toss << "," << format_double(t_rem) << "\n";
                if (a.timed && r + 1 < traj.positions.size())
                    t_rem -= 0.5 * a.eps * a.eps;
            }
        }
        write_text_file((out / "trajectories.csv").string(), os.str());
    }

    std::cout << "value: mean=" << est.mean << " se=" << est.std_error
              << " capped=" << est.capped_fraction << "\n";
    if (!est.valid || est.capped_fraction > a.cap_threshold) {
        std::cerr << "error: capped fraction " << est.capped_fraction
                  << " exceeds threshold " << a.cap_threshold << "\n";
        return kExitUnreliable;
    }
    return kExitOk;
}

// -------------------------------------------------------------- cylinder

struct CylinderArgs {
    CommonFlags common;
    std::string p = "3";
    int n = 1;
    double r = 1.0;
    double eps = 0.05;
    std::string ell_list;
    long trials = 10000;
    uint64_t seed = 1;
    double cap_threshold = 0.05;
};

int run_cylinder(const CylinderArgs& a, const CLI::App* sub) {
    dump_config_if_requested(sub, a.common.dump_config);
    const double p = parse_p(a.p);
    const fs::path out = resolve_out_dir(a.common.out_dir);
    const std::vector<double> ells =
        a.ell_list.empty() ? std::vector<double>{a.eps, 2 * a.eps, 4 * a.eps, 8 * a.eps}
                           : parse_number_list(a.ell_list, "--ell-list");

    std::ostringstream csv;
    csv << "param,value,estimate,std_error\n";
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    double num = 0, den = 0, max_ratio = 0, worst_cap = 0;
    for (double ell : ells) {
        const auto cfg = CylinderConfig::for_p(p, a.n, a.r, ell, a.eps);
        const auto est = bottom_escape_probability(cfg, a.trials, a.seed, a.common.threads);
        const double x = (ell + a.eps) / a.r;
        const double y = 1.0 - est.mean;
        num += x * y;
        den += x * x;
        max_ratio = std::max(max_ratio, y / x);
        worst_cap = std::max(worst_cap, est.capped_fraction);
        csv << "ell," << format_double(ell) << "," << format_double(est.mean) << ","
            << format_double(est.std_error) << "\n";
        nlohmann::ordered_json cell;
        cell["ell"] = ell;
        cell["p_bottom"] = est.mean;
        cell["std_error"] = est.std_error;
        cell["one_minus_p"] = y;
        cell["capped_fraction"] = est.capped_fraction;
        cells.push_back(cell);
        if (cfg.alpha > 0) {
            const auto rep =
                exit_time_moment_check(cfg, a.trials, a.seed + 1, a.common.threads);
            csv << "mean_rounds," << format_double(ell) << ","
                << format_double(rep.mean_rounds) << ","
                << format_double(rep.rounds_std_error) << "\n";
        }
    }
    const double L = num / den;
    write_text_file((out / "cylinder_sweep.csv").string(), csv.str());
    nlohmann::ordered_json fit;
    fit["L_least_squares"] = L;
    fit["L_max_ratio"] = max_ratio;
    fit["r"] = a.r;
    fit["eps"] = a.eps;
    fit["p"] = a.p;
    fit["n"] = a.n;
    fit["trials"] = a.trials;
    fit["seed"] = a.seed;
    fit["cells"] = cells;
    write_text_file((out / "cylinder_fit.json").string(), fit.dump(2) + "\n");
    std::cout << "cylinder: fitted L=" << L << " (max ratio " << max_ratio << ")\n";
    return worst_cap > a.cap_threshold ? kExitUnreliable : kExitOk;
}

// ------------------------------------------------------------------- mvp

struct MvpArgs {
    CommonFlags common;
    std::string phi = "quadratic";
    std::string x = "0";
    std::string p = "2";
    int n = 1;
    std::string eps_list = "0.1,0.05,0.025";
    int m = 16;
    bool analytic_extrema = false;
    bool parabolic = false;
    double t = 0.5;
};

int run_mvp(const MvpArgs& a, const CLI::App* sub) {
    dump_config_if_requested(sub, a.common.dump_config);
    const double p = parse_p(a.p);
    const auto phi = builtin_test_function(a.phi, p, a.n);
    const Point x = to_point(parse_number_list(a.x, "--x"), "--x");
    const auto eps_seq = parse_number_list(a.eps_list, "--eps-list");
    const fs::path out = resolve_out_dir(a.common.out_dir);

    std::ostringstream csv;
    csv << "phi";
    for (int i = 0; i < a.n; ++i) csv << ",x" << (i + 1);
    csv << ",p,epsilon,residual,residual_over_eps2\n";
    std::vector<double> residuals;
    for (double eps : eps_seq) {
        const double res = a.parabolic
                               ? parabolic_mv_residual(phi, x, a.t, eps, p, a.n, a.m)
                               : mv_residual(phi, x, eps, p, a.n, a.m, a.analytic_extrema);
        residuals.push_back(res / (eps * eps));
        csv << a.phi;
        for (int i = 0; i < a.n; ++i) csv << "," << format_double(x[i]);
        csv << "," << a.p << "," << format_double(eps) << "," << format_double(res) << ","
            << format_double(res / (eps * eps)) << "\n";
    }
    write_text_file((out / "mvp_residuals.csv").string(), csv.str());

    nlohmann::ordered_json ex;
    ex["phi"] = a.phi;
    ex["p"] = a.p;
    ex["n"] = a.n;
    ex["m"] = a.m;
    ex["parabolic"] = a.parabolic;
    if (!a.parabolic && eps_seq.size() >= 3) {
        const auto lim = mv_limit(phi, x, p, a.n, eps_seq, a.m, a.analytic_extrema);
        ex["limit"] = lim.limit;
        ex["order"] = lim.order;
        ex["extrapolated"] = lim.extrapolated;
        std::cout << "mvp: limit=" << lim.limit
                  << (lim.extrapolated ? "" : " (raw last value, no extrapolation)") << "\n";
    } else {
        ex["limit"] = residuals.back();
        ex["extrapolated"] = false;
        std::cout << "mvp: residual/eps^2 at the finest eps = " << residuals.back() << "\n";
    }
    ex["epsilons"] = eps_seq;
    ex["residuals_over_eps2"] = residuals;
    write_text_file((out / "mvp_extrapolation.json").string(), ex.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    CommonFlags common;
    std::string which = "hitting";
    double a = 0;
    double b = 1;
    double eps = 0.1;
    double payoff_a = 0;
    double payoff_b = 1;
    double cost = 1;
    int m = 3;
    std::string payoff = "linear";
};

int run_oracle(const OracleArgs& a, const CLI::App* sub) {
    dump_config_if_requested(sub, a.common.dump_config);
    const fs::path out = resolve_out_dir(a.common.out_dir);
    std::ostringstream csv;
    if (a.which == "hitting" || a.which == "running") {
        DiscreteWalkSpec spec;
        spec.a = a.a;
        spec.b = a.b;
        spec.eps = a.eps;
        spec.payoff_a = a.payoff_a;
        spec.payoff_b = a.payoff_b;
        spec.step_cost = a.cost;
        const auto u =
            a.which == "hitting" ? discrete_hitting_value(spec) : discrete_running_time(spec);
        csv << "x,value\n";
        for (size_t i = 0; i < u.size(); ++i)
            csv << format_double(spec.node(static_cast<int>(i))) << "," << format_double(u[i])
                << "\n";
    } else if (a.which == "grid2d") {
        const ScalarField F = parse_payoff(a.payoff);
        const auto u = discrete_2d_value(a.m, F, a.eps);
        const int side = a.m + 2;
        csv << "x1,x2,value\n";
        for (int iy = 0; iy < side; ++iy)
            for (int ix = 0; ix < side; ++ix)
                csv << format_double(ix * a.eps) << "," << format_double(iy * a.eps) << ","
                    << format_double(u[static_cast<size_t>(iy) * side + ix]) << "\n";
    } else {
        throw std::invalid_argument("unknown oracle: " + a.which +
                                    " (use hitting, running, grid2d)");
    }
    write_text_file((out / "oracle.csv").string(), csv.str());
    std::cout << "oracle: wrote oracle.csv\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "towlab: tug-of-war-with-noise DPP solvers, game simulation, and mean-value "
        "diagnostics"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the elliptic DPP on a lattice");
    add_common(solve_cmd, sa.common);
    solve_cmd->add_option("--domain", sa.domain, "interval:a,b | box:lo..,hi.. | ball:c..,r");
    solve_cmd->add_option("--p", sa.p, "Exponent p in [2, inf)");
    solve_cmd->add_option("--eps", sa.eps, "Step size epsilon")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--k", sa.k, "Lattice refinement (spacing = eps/k)")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--tol", sa.tol, "Sweep-change tolerance")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-sweeps", sa.max_sweeps,
                          "Sweep cap (default 50 (diam/eps)^2)");
    solve_cmd->add_flag("--gauss-seidel", sa.gauss_seidel,
                        "In-place sweeps (faster; departs from the monotone iteration)");
    solve_cmd->add_option("--payoff", sa.payoff, "linear | const:<v> | step:<thr>");
    solve_cmd->add_option("--sweep-eps", sa.sweep_eps, "Comma list of eps values to sweep");

    ParabolicArgs pa;
    auto* parab_cmd =
        app.add_subcommand("solve-parabolic", "March the parabolic DPP over time slices");
    add_common(parab_cmd, pa.common);
    parab_cmd->add_option("--domain", pa.domain, "Domain spec");
    parab_cmd->add_option("--p", pa.p, "Exponent p in [2, inf)");
    parab_cmd->add_option("--eps", pa.eps, "Step size epsilon")->check(CLI::PositiveNumber);
    parab_cmd->add_option("--k", pa.k, "Lattice refinement")->check(CLI::PositiveNumber);
    parab_cmd->add_option("--horizon", pa.horizon, "Time horizon T")
        ->check(CLI::PositiveNumber);
    parab_cmd->add_option("--payoff", pa.payoff,
                          "Strip and initial data: linear | const:<v> | step:<thr>");

    ValueArgs va;
    auto* value_cmd =
        app.add_subcommand("value", "Estimate the game value by seeded Monte Carlo");
    add_common(value_cmd, va.common);
    value_cmd->add_option("--domain", va.domain, "Domain spec");
    value_cmd->add_option("--p", va.p, "Exponent p in [2, inf)");
    value_cmd->add_option("--eps", va.eps, "Step size epsilon")->check(CLI::PositiveNumber);
    value_cmd->add_option("--k", va.k, "Lattice refinement for greedy strategies");
    value_cmd->add_option("--start", va.start, "Starting point, comma separated");
    value_cmd->add_option("--payoff", va.payoff, "linear | const:<v> | step:<thr>");
    value_cmd->add_option("--trials", va.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    value_cmd->add_option("--seed", va.seed, "Master seed");
    value_cmd->add_option("--round-cap", va.round_cap, "Round cap (default 100 (diam/eps)^2)");
    value_cmd->add_option("--strategy-i", va.strategy_i,
                          "greedy | greedy-max[:field.csv] | pull:x,.. | none");
    value_cmd->add_option("--strategy-ii", va.strategy_ii,
                          "greedy | greedy-min[:field.csv] | pull:x,.. | none");
    value_cmd->add_option("--cap-threshold", va.cap_threshold,
                          "Exit 3 when the capped fraction exceeds this");
    value_cmd->add_flag("--timed", va.timed, "Time-tracking game");
    value_cmd->add_option("--t0", va.t0, "Initial time budget for --timed");
    value_cmd->add_option("--dump-trajectories", va.traj_count,
                          "Also write this many trajectories");

    CylinderArgs ca;
    auto* cyl_cmd = app.add_subcommand("cylinder", "Cylinder-walk escape probabilities");
    add_common(cyl_cmd, ca.common);
    cyl_cmd->add_option("--p", ca.p, "Exponent p in [2, inf]");
    cyl_cmd->add_option("--n", ca.n, "Base (horizontal) dimension")
        ->check(CLI::PositiveNumber);
    cyl_cmd->add_option("--r", ca.r, "Half-width scale")->check(CLI::PositiveNumber);
    cyl_cmd->add_option("--eps", ca.eps, "Step size")->check(CLI::PositiveNumber);
    cyl_cmd->add_option("--ell-list", ca.ell_list,
                        "Start heights (default eps,2eps,4eps,8eps)");
    cyl_cmd->add_option("--trials", ca.trials, "Trials per cell")->check(CLI::PositiveNumber);
    cyl_cmd->add_option("--seed", ca.seed, "Master seed");
    cyl_cmd->add_option("--cap-threshold", ca.cap_threshold,
                        "Exit 3 when any cell caps more than this");

    MvpArgs ma;
    auto* mvp_cmd = app.add_subcommand("mvp", "Mean-value residuals and extrapolated limits");
    add_common(mvp_cmd, ma.common);
    mvp_cmd->add_option("--phi", ma.phi,
                        "linear | quadratic | quadratic_x1 | aronsson | radial | caloric");
    mvp_cmd->add_option("--x", ma.x, "Evaluation point");
    mvp_cmd->add_option("--p", ma.p, "Exponent p in (1, inf]");
    mvp_cmd->add_option("--n", ma.n, "Dimension")->check(CLI::PositiveNumber);
    mvp_cmd->add_option("--eps-list", ma.eps_list, "Decreasing eps sequence");
    mvp_cmd->add_option("--m", ma.m, "Quadrature level")->check(CLI::PositiveNumber);
    mvp_cmd->add_flag("--analytic-extrema", ma.analytic_extrema,
                      "Use the closed-form extrema (aronsson, on-axis points)");
    mvp_cmd->add_flag("--parabolic", ma.parabolic, "Parabolic residual at time --t");
    mvp_cmd->add_option("--t", ma.t, "Time for --parabolic");

    OracleArgs oa;
    auto* oracle_cmd = app.add_subcommand("oracle", "Dump the exact discrete-walk fixtures");
    add_common(oracle_cmd, oa.common);
    oracle_cmd->add_option("--which", oa.which, "hitting | running | grid2d");
    oracle_cmd->add_option("--a", oa.a, "Left endpoint");
    oracle_cmd->add_option("--b", oa.b, "Right endpoint");
    oracle_cmd->add_option("--eps", oa.eps, "Grid step")->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--payoff-a", oa.payoff_a, "Payoff at a");
    oracle_cmd->add_option("--payoff-b", oa.payoff_b, "Payoff at b");
    oracle_cmd->add_option("--cost", oa.cost, "Per-step cost (running)");
    oracle_cmd->add_option("--m", oa.m, "Interior nodes per side (grid2d)");
    oracle_cmd->add_option("--payoff", oa.payoff, "Boundary payoff (grid2d)");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "towlab: invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(sa, solve_cmd);
        if (parab_cmd->parsed()) return run_solve_parabolic(pa, parab_cmd);
        if (value_cmd->parsed()) return run_value(va, value_cmd);
        if (cyl_cmd->parsed()) return run_cylinder(ca, cyl_cmd);
        if (mvp_cmd->parsed()) return run_mvp(ma, mvp_cmd);
        if (oracle_cmd->parsed()) return run_oracle(oa, oracle_cmd);
    } catch (const std::invalid_argument& e) {
        std::cerr << "towlab: invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "towlab: error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
