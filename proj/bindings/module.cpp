// Python bindings for the towlab core. Payoffs and data come in as Python
// callables, so every bound operation runs single threaded; results are
// bit-identical to the C++ API by the seeding contract.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "towlab/discrete.hpp"
#include "towlab/elliptic.hpp"
#include "towlab/game.hpp"
#include "towlab/io.hpp"
#include "towlab/mean_value.hpp"
#include "towlab/parabolic.hpp"
#include "towlab/regularity.hpp"

namespace py = pybind11;
using namespace towlab;

namespace {

Point to_point(const std::vector<double>& xs) {
    if (xs.empty() || xs.size() > static_cast<size_t>(kMaxDim))
        throw std::invalid_argument("point dimension must be 1..4");
    Point p(static_cast<int>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) p[static_cast<int>(i)] = xs[i];
    return p;
}

std::vector<double> from_point(const Point& p) {
    std::vector<double> out(static_cast<size_t>(p.dim()));
    for (int i = 0; i < p.dim(); ++i) out[static_cast<size_t>(i)] = p[i];
    return out;
}

ScalarField wrap_scalar(const py::function& f) {
    return [f](const Point& x) { return f(from_point(x)).cast<double>(); };
}

SpaceTimeFn wrap_spacetime(const py::function& f) {
    return [f](const Point& x, double t) { return f(from_point(x), t).cast<double>(); };
}

TestFunction resolve_phi(const std::string& name, double p, int n) {
    return builtin_test_function(name, p, n);
}

}  // namespace

PYBIND11_MODULE(_towlab, m) {
    m.doc() = "tug-of-war-with-noise DPP solvers, game simulation, and mean-value "
              "diagnostics";
    m.attr("INF_P") = std::numeric_limits<double>::infinity();

    m.def("probabilities", &probabilities, py::arg("p"), py::arg("n"),
          "alpha = (p-2)/(p+n), beta = (n+2)/(p+n); (1, 0) at p = inf");

    py::class_<GameParams>(m, "GameParams")
        .def_static("for_game", &GameParams::for_game, py::arg("p"), py::arg("n"),
                    py::arg("epsilon"))
        .def_static("for_mean_value", &GameParams::for_mean_value, py::arg("p"), py::arg("n"),
                    py::arg("epsilon"))
        .def_readonly("n", &GameParams::n)
        .def_readonly("p", &GameParams::p)
        .def_readonly("epsilon", &GameParams::epsilon)
        .def_readonly("alpha", &GameParams::alpha)
        .def_readonly("beta", &GameParams::beta);

    py::class_<Domain>(m, "Domain")
        .def_static("interval", &Domain::interval, py::arg("a"), py::arg("b"))
        .def_static(
            "box",
            [](const std::vector<double>& lo, const std::vector<double>& hi) {
                return Domain::box(to_point(lo), to_point(hi));
            },
            py::arg("lo"), py::arg("hi"))
        .def_static(
            "ball",
            [](const std::vector<double>& c, double r) {
                return Domain::ball(to_point(c), r);
            },
            py::arg("center"), py::arg("radius"))
        .def_property_readonly("dim", &Domain::dim)
        .def("inside", [](const Domain& d, const std::vector<double>& x) {
            return d.inside(to_point(x));
        })
        .def("distance", [](const Domain& d, const std::vector<double>& x) {
            return d.distance(to_point(x));
        })
        .def("strip_contains",
             [](const Domain& d, const std::vector<double>& x, double eps) {
                 return d.strip_contains(to_point(x), eps);
             })
        .def("__repr__", &Domain::describe);

    py::class_<Lattice, std::shared_ptr<Lattice>>(m, "Lattice");
    m.def(
        "build_lattice",
        [](const Domain& dom, double eps, int k) {
            return std::const_pointer_cast<Lattice>(Lattice::build(dom, eps, k));
        },
        py::arg("domain"), py::arg("epsilon"), py::arg("k") = 4);
    m.def("lattice_epsilon", [](const std::shared_ptr<Lattice>& l) { return l->epsilon(); });
    m.def("lattice_spacing", [](const std::shared_ptr<Lattice>& l) { return l->spacing(); });
    m.def("lattice_nodes", [](const std::shared_ptr<Lattice>& l) {
        std::vector<std::vector<double>> pts;
        for (int64_t idx : l->active_nodes()) pts.push_back(from_point(l->node_point(idx)));
        return pts;
    });
    m.def("lattice_classes", [](const std::shared_ptr<Lattice>& l) {
        std::vector<std::string> cls;
        for (int64_t idx : l->active_nodes())
            cls.emplace_back(l->node_class(idx) == NodeClass::interior ? "interior" : "strip");
        return cls;
    });

    py::class_<LatticeField>(m, "LatticeField")
        .def_property_readonly("values", [](const LatticeField& f) {
            std::vector<double> vals;
            for (int64_t idx : f.lattice->active_nodes()) vals.push_back(f[idx]);
            return vals;
        })
        .def("value_at", [](const LatticeField& f, const std::vector<double>& x) {
            const int64_t idx = f.lattice->nearest_active_node(to_point(x));
            return f[idx];
        });

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("sweeps", &SolveReport::sweeps)
        .def_readonly("final_defect", &SolveReport::final_defect)
        .def_readonly("converged", &SolveReport::converged)
        .def_readonly("wall_time_s", &SolveReport::wall_time_s);

    m.def(
        "solve",
        [](const std::shared_ptr<Lattice>& lat, const py::function& F,
           const GameParams& params, double tol, long max_sweeps) {
            SolveOptions opts;
            opts.tol = tol;
            opts.max_sweeps = max_sweeps;
            return solve(lat, wrap_scalar(F), params, opts);
        },
        py::arg("lattice"), py::arg("payoff"), py::arg("params"), py::arg("tol") = 1e-10,
        py::arg("max_sweeps") = -1);
    m.def(
        "running_payoff_solve",
        [](const std::shared_ptr<Lattice>& lat, const py::function& F, const py::function& f,
           const GameParams& params, double tol, long max_sweeps) {
            SolveOptions opts;
            opts.tol = tol;
            opts.max_sweeps = max_sweeps;
            return running_payoff_solve(lat, wrap_scalar(F), wrap_scalar(f), params, opts);
        },
        py::arg("lattice"), py::arg("payoff"), py::arg("source"), py::arg("params"),
        py::arg("tol") = 1e-10, py::arg("max_sweeps") = -1);
    m.def("apply_T",
          [](const LatticeField& u, const GameParams& params) { return apply_T(u, params); });
    m.def("defect",
          [](const LatticeField& u, const GameParams& params) { return defect(u, params); });

    py::class_<SpaceTimeField>(m, "SpaceTimeField")
        .def_readonly("slice_count", &SpaceTimeField::slice_count)
        .def_readonly("horizon", &SpaceTimeField::horizon)
        .def_readonly("degenerate_horizon", &SpaceTimeField::degenerate_horizon)
        .def("time_of", &SpaceTimeField::time_of)
        .def("slice_values", [](const SpaceTimeField& f, int s) {
            std::vector<double> vals;
            for (int64_t idx : f.lattice->active_nodes()) vals.push_back(f.at(idx, s));
            return vals;
        });

    m.def(
        "solve_parabolic",
        [](const std::shared_ptr<Lattice>& lat, const py::function& F, double horizon,
           const GameParams& params) {
            return solve_parabolic(lat, wrap_spacetime(F), horizon, params);
        },
        py::arg("lattice"), py::arg("data"), py::arg("horizon"), py::arg("params"));
    m.def("parabolic_defect", [](const SpaceTimeField& f, const GameParams& params) {
        return parabolic_defect(f, params);
    });

    py::class_<Strategy>(m, "Strategy").def_readonly("name", &Strategy::name);
    m.def(
        "greedy_strategy",
        [](const LatticeField& field, const std::string& mode) {
            if (mode != "max" && mode != "min")
                throw std::invalid_argument("mode must be 'max' or 'min'");
            return greedy_strategy(field,
                                   mode == "max" ? GreedyMode::maximize : GreedyMode::minimize);
        },
        py::arg("field"), py::arg("mode"));
    m.def("pull_toward",
          [](const std::vector<double>& target) { return pull_toward(to_point(target)); });
    m.def("idle_strategy", []() {
        Strategy s;
        s.name = "idle";
        s.next_move = [](std::span<const Point>, std::span<const Toss>, const Point& x,
                         double) { return x; };
        return s;
    });

    py::class_<ValueEstimate>(m, "ValueEstimate")
        .def_readonly("mean", &ValueEstimate::mean)
        .def_readonly("std_error", &ValueEstimate::std_error)
        .def_readonly("trials", &ValueEstimate::trials)
        .def_readonly("ci95_lo", &ValueEstimate::ci95_lo)
        .def_readonly("ci95_hi", &ValueEstimate::ci95_hi)
        .def_readonly("capped_fraction", &ValueEstimate::capped_fraction)
        .def_readonly("seed", &ValueEstimate::seed)
        .def_readonly("valid", &ValueEstimate::valid)
        .def("to_json", &value_estimate_json);

    m.def(
        "estimate_value",
        [](const std::vector<double>& start, const Strategy& sI, const Strategy& sII,
           const GameParams& params, const py::function& F, const Domain& dom, long trials,
           uint64_t seed, long round_cap) {
            return estimate_value(to_point(start), sI, sII, params, wrap_scalar(F), dom,
                                  trials, seed, round_cap, 1);
        },
        py::arg("start"), py::arg("strategy_i"), py::arg("strategy_ii"), py::arg("params"),
        py::arg("payoff"), py::arg("domain"), py::arg("trials"), py::arg("seed"),
        py::arg("round_cap") = -1);
    m.def(
        "estimate_value_timed",
        [](const std::vector<double>& start, double t0, const Strategy& sI,
           const Strategy& sII, const GameParams& params, const py::function& F,
           const Domain& dom, long trials, uint64_t seed) {
            return estimate_value_timed(to_point(start), t0, sI, sII, params,
                                        wrap_spacetime(F), dom, trials, seed, 1);
        },
        py::arg("start"), py::arg("t0"), py::arg("strategy_i"), py::arg("strategy_ii"),
        py::arg("params"), py::arg("payoff"), py::arg("domain"), py::arg("trials"),
        py::arg("seed"));

    py::class_<DiscreteWalkStats>(m, "DiscreteWalkStats")
        .def_readonly("payoff", &DiscreteWalkStats::payoff)
        .def_readonly("mean_rounds", &DiscreteWalkStats::mean_rounds)
        .def_readonly("rounds_std_error", &DiscreteWalkStats::rounds_std_error);
    m.def(
        "estimate_discrete_walk",
        [](const std::vector<double>& start, const Domain& dom, double eps,
           const py::function& F, long trials, uint64_t seed, long round_cap) {
            return estimate_discrete_walk(to_point(start), dom, eps, wrap_scalar(F), trials,
                                          seed, round_cap, 1);
        },
        py::arg("start"), py::arg("domain"), py::arg("eps"), py::arg("payoff"),
        py::arg("trials"), py::arg("seed"), py::arg("round_cap") = -1);

    m.def("discrete_hitting_value",
          [](double a, double b, double eps, double pa, double pb) {
              DiscreteWalkSpec spec;
              spec.a = a;
              spec.b = b;
              spec.eps = eps;
              spec.payoff_a = pa;
              spec.payoff_b = pb;
              return discrete_hitting_value(spec);
          },
          py::arg("a"), py::arg("b"), py::arg("eps"), py::arg("payoff_a") = 0.0,
          py::arg("payoff_b") = 1.0);
    m.def("discrete_running_time",
          [](double a, double b, double eps, double cost) {
              DiscreteWalkSpec spec;
              spec.a = a;
              spec.b = b;
              spec.eps = eps;
              spec.payoff_a = 0;
              spec.payoff_b = 0;
              spec.step_cost = cost;
              return discrete_running_time(spec);
          },
          py::arg("a"), py::arg("b"), py::arg("eps"), py::arg("cost") = 1.0);
    m.def(
        "discrete_2d_value",
        [](int grid_m, const py::function& F, double eps) {
            return discrete_2d_value(grid_m, wrap_scalar(F), eps);
        },
        py::arg("m"), py::arg("boundary"), py::arg("eps"));

    m.def("builtin_test_names", &builtin_test_names);
    m.def(
        "mv_value",
        [](const std::string& phi, const std::vector<double>& x, double eps, double p, int n,
           int mm, bool analytic) {
            return mv_value(resolve_phi(phi, p, n), to_point(x), eps, p, n, mm, analytic);
        },
        py::arg("phi"), py::arg("x"), py::arg("eps"), py::arg("p"), py::arg("n"),
        py::arg("m") = 16, py::arg("analytic_extrema") = false);
    m.def(
        "mv_residual",
        [](const std::string& phi, const std::vector<double>& x, double eps, double p, int n,
           int mm, bool analytic) {
            return mv_residual(resolve_phi(phi, p, n), to_point(x), eps, p, n, mm, analytic);
        },
        py::arg("phi"), py::arg("x"), py::arg("eps"), py::arg("p"), py::arg("n"),
        py::arg("m") = 16, py::arg("analytic_extrema") = false);
    m.def(
        "parabolic_mv_residual",
        [](const std::string& phi, const std::vector<double>& x, double t, double eps,
           double p, int n, int mm) {
            return parabolic_mv_residual(resolve_phi(phi, p, n), to_point(x), t, eps, p, n,
                                         mm);
        },
        py::arg("phi"), py::arg("x"), py::arg("t"), py::arg("eps"), py::arg("p"),
        py::arg("n"), py::arg("m") = 16);
    m.def(
        "fd_normalized_p_laplacian",
        [](const std::string& phi, const std::vector<double>& x, double p, int n,
           double h_fd) {
            return fd_normalized_p_laplacian(resolve_phi(phi, p, n), to_point(x), p, n, h_fd);
        },
        py::arg("phi"), py::arg("x"), py::arg("p"), py::arg("n"), py::arg("h_fd") = 1e-4);
    py::class_<MvLimit>(m, "MvLimit")
        .def_readonly("limit", &MvLimit::limit)
        .def_readonly("order", &MvLimit::order)
        .def_readonly("extrapolated", &MvLimit::extrapolated)
        .def_readonly("epsilons", &MvLimit::epsilons)
        .def_readonly("residuals_over_eps2", &MvLimit::residuals_over_eps2);
    m.def(
        "mv_limit",
        [](const std::string& phi, const std::vector<double>& x, double p, int n,
           const std::vector<double>& eps_seq, int mm, bool analytic) {
            return mv_limit(resolve_phi(phi, p, n), to_point(x), p, n, eps_seq, mm, analytic);
        },
        py::arg("phi"), py::arg("x"), py::arg("p"), py::arg("n"), py::arg("eps_seq"),
        py::arg("m") = 16, py::arg("analytic_extrema") = false);

    py::class_<CylinderConfig>(m, "CylinderConfig")
        .def_static("for_p", &CylinderConfig::for_p, py::arg("p"), py::arg("n"), py::arg("r"),
                    py::arg("ell"), py::arg("epsilon"))
        .def_readonly("r", &CylinderConfig::r)
        .def_readonly("ell", &CylinderConfig::ell)
        .def_readonly("epsilon", &CylinderConfig::epsilon)
        .def_readonly("alpha", &CylinderConfig::alpha)
        .def_readonly("beta", &CylinderConfig::beta);
    m.def(
        "bottom_escape_probability",
        [](const CylinderConfig& cfg, long trials, uint64_t seed) {
            return bottom_escape_probability(cfg, trials, seed, 1);
        },
        py::arg("config"), py::arg("trials"), py::arg("seed"));
    py::class_<ExitTimeReport>(m, "ExitTimeReport")
        .def_readonly("mean_rounds", &ExitTimeReport::mean_rounds)
        .def_readonly("rounds_std_error", &ExitTimeReport::rounds_std_error)
        .def_readonly("inequality_holds", &ExitTimeReport::inequality_holds)
        .def_readonly("C", &ExitTimeReport::C)
        .def_readonly("capped_fraction", &ExitTimeReport::capped_fraction);
    m.def(
        "exit_time_moment_check",
        [](const CylinderConfig& cfg, long trials, uint64_t seed) {
            return exit_time_moment_check(cfg, trials, seed, 1);
        },
        py::arg("config"), py::arg("trials"), py::arg("seed"));
    m.def("harnack_ratio", [](const LatticeField& f, const std::vector<double>& c, double rho) {
        return harnack_ratio(f, to_point(c), rho);
    });
    m.def("lipschitz_quotient",
          [](const LatticeField& f, const std::vector<double>& z0, double r) {
              return lipschitz_quotient(f, to_point(z0), r);
          });

    m.def("write_field_csv", [](const LatticeField& f, const std::string& path) {
        write_field_csv_file(f, path);
    });
    m.def("read_field_csv", [](const std::shared_ptr<Lattice>& lat, const std::string& path) {
        return read_field_csv_file(lat, path);
    });
}
