#include "towlab/elliptic.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "towlab/parallel.hpp"

namespace towlab {

namespace {

void check_params(const GameParams& params, const Lattice& lat) {
    if (params.infinite_p() || !(params.beta > 0))
        throw std::invalid_argument("DPP solve: beta must be > 0 (finite p)");
    if (params.alpha < 0 || params.alpha >= 1)
        throw std::invalid_argument("DPP solve: alpha must be in [0, 1)");
    if (params.epsilon != lat.epsilon())
        throw std::invalid_argument("DPP solve: params.epsilon differs from the lattice");
}

// DPP update at one interior node from the input values
inline double node_update(const Lattice& lat, const std::vector<double>& in,
                          size_t interior_pos, double alpha, double beta) {
    size_t count = 0;
    const int64_t* nb = lat.dpp_neighbors(interior_pos, &count);
    if (count == 0) throw std::runtime_error("DPP: interior node with empty neighbor set");
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    double sum = 0;
    for (size_t j = 0; j < count; ++j) {
        const double v = in[static_cast<size_t>(nb[j])];
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        sum += v;
    }
    return 0.5 * alpha * (mx + mn) + beta * (sum / static_cast<double>(count));
}

long default_max_sweeps(const Lattice& lat) {
    const double ratio = lat.domain().diameter() / lat.epsilon();
    return static_cast<long>(50.0 * ratio * ratio) + 50;
}

struct IterResult {
    LatticeField u;
    SolveReport report;
};

IterResult iterate(const std::shared_ptr<const Lattice>& lattice, const ScalarField& F,
                   const ScalarField* source, const GameParams& params,
                   const SolveOptions& opts) {
    const Lattice& lat = *lattice;
    check_params(params, lat);
    if (!(opts.tol > 0)) throw std::invalid_argument("DPP solve: tol must be > 0");
    const auto t0 = std::chrono::steady_clock::now();

    // strip data and the inf-F initialization of the monotone iteration
    double inf_f = std::numeric_limits<double>::infinity();
    std::vector<double> strip_vals(lat.strip_nodes().size());
    for (size_t i = 0; i < lat.strip_nodes().size(); ++i) {
        const double v = F(lat.node_point(lat.strip_nodes()[i]));
        if (!std::isfinite(v)) throw std::invalid_argument("DPP solve: strip datum not finite");
        strip_vals[i] = v;
        inf_f = std::min(inf_f, v);
    }

    const double eps2 = params.epsilon * params.epsilon;
    std::vector<double> src;
    if (source) {
        src.resize(lat.interior_nodes().size());
        for (size_t i = 0; i < src.size(); ++i) {
            src[i] = eps2 * (*source)(lat.node_point(lat.interior_nodes()[i]));
            if (!std::isfinite(src[i]))
                throw std::invalid_argument("DPP solve: source not finite");
        }
    }

    LatticeField u(lattice);
    for (int64_t idx : lat.interior_nodes()) u[idx] = inf_f;
    for (size_t i = 0; i < lat.strip_nodes().size(); ++i) u[lat.strip_nodes()[i]] = strip_vals[i];

    const long max_sweeps = opts.max_sweeps < 0 ? default_max_sweeps(lat) : opts.max_sweeps;
    const auto interior_count = static_cast<int64_t>(lat.interior_nodes().size());

    LatticeField next = u;
    SolveReport rep;
    double change = std::numeric_limits<double>::infinity();
    while (rep.sweeps < max_sweeps) {
        if (opts.gauss_seidel) {
            double ch = 0;
            for (int64_t i = 0; i < interior_count; ++i) {
                const int64_t idx = lat.interior_nodes()[static_cast<size_t>(i)];
                double v = node_update(lat, u.values, static_cast<size_t>(i), params.alpha,
                                       params.beta);
                if (source) v += src[static_cast<size_t>(i)];
                ch = std::max(ch, std::abs(v - u.values[static_cast<size_t>(idx)]));
                u.values[static_cast<size_t>(idx)] = v;
            }
            change = ch;
        } else {
            std::vector<double> chunk_change(static_cast<size_t>(std::max(opts.threads, 1)),
                                             0.0);
            std::atomic<int> slot{0};
            parallel_for(interior_count, opts.threads, [&](int64_t b, int64_t e) {
                const auto my = static_cast<size_t>(slot.fetch_add(1));
                double ch = 0;
                for (int64_t i = b; i < e; ++i) {
                    const int64_t idx = lat.interior_nodes()[static_cast<size_t>(i)];
                    double v = node_update(lat, u.values, static_cast<size_t>(i), params.alpha,
                                           params.beta);
                    if (source) v += src[static_cast<size_t>(i)];
                    ch = std::max(ch, std::abs(v - u.values[static_cast<size_t>(idx)]));
                    next.values[static_cast<size_t>(idx)] = v;
                }
                chunk_change[my] = ch;
            });
            change = 0;
            for (double c : chunk_change) change = std::max(change, c);
            std::swap(u.values, next.values);
        }
        ++rep.sweeps;
        if (change < opts.tol) break;
    }

    // one extra operator evaluation pins the reported defect of the returned field
    double dft = 0;
    for (int64_t i = 0; i < interior_count; ++i) {
        const int64_t idx = lat.interior_nodes()[static_cast<size_t>(i)];
        double v = node_update(lat, u.values, static_cast<size_t>(i), params.alpha, params.beta);
        if (source) v += src[static_cast<size_t>(i)];
        dft = std::max(dft, std::abs(v - u.values[static_cast<size_t>(idx)]));
    }
    rep.final_defect = dft;
    rep.converged = change < opts.tol && dft < 10 * opts.tol;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), rep};
}

}  // namespace

LatticeField apply_T(const LatticeField& u, const GameParams& params, int threads) {
    const Lattice& lat = *u.lattice;
    check_params(params, lat);
    LatticeField out = u;
    const auto interior_count = static_cast<int64_t>(lat.interior_nodes().size());
    parallel_for(interior_count, threads, [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            const int64_t idx = lat.interior_nodes()[static_cast<size_t>(i)];
            out.values[static_cast<size_t>(idx)] =
                node_update(lat, u.values, static_cast<size_t>(i), params.alpha, params.beta);
        }
    });
    return out;
}

double defect(const LatticeField& u, const GameParams& params) {
    const Lattice& lat = *u.lattice;
    check_params(params, lat);
    double d = 0;
    for (size_t i = 0; i < lat.interior_nodes().size(); ++i) {
        const int64_t idx = lat.interior_nodes()[i];
        const double v = node_update(lat, u.values, i, params.alpha, params.beta);
        d = std::max(d, std::abs(v - u.values[static_cast<size_t>(idx)]));
    }
    return d;
}

std::pair<LatticeField, SolveReport> solve(const std::shared_ptr<const Lattice>& lattice,
                                           const ScalarField& F, const GameParams& params,
                                           const SolveOptions& opts) {
    auto r = iterate(lattice, F, nullptr, params, opts);
    return {std::move(r.u), r.report};
}

std::pair<LatticeField, SolveReport> running_payoff_solve(
    const std::shared_ptr<const Lattice>& lattice, const ScalarField& F,
    const ScalarField& f, const GameParams& params, const SolveOptions& opts) {
    auto r = iterate(lattice, F, &f, params, opts);
    return {std::move(r.u), r.report};
}

}  // namespace towlab
