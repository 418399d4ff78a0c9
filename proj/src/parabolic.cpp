#include "towlab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "towlab/parallel.hpp"

namespace towlab {

namespace {

inline double slice_update(const Lattice& lat, const std::vector<double>& prev,
                           size_t interior_pos, double alpha, double beta) {
    size_t count = 0;
    const int64_t* nb = lat.dpp_neighbors(interior_pos, &count);
    if (count == 0)
        throw std::runtime_error("parabolic DPP: interior node with empty neighbor set");
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    double sum = 0;
    for (size_t j = 0; j < count; ++j) {
        const double v = prev[static_cast<size_t>(nb[j])];
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        sum += v;
    }
    return 0.5 * alpha * (mx + mn) + beta * (sum / static_cast<double>(count));
}

}  // namespace

SpaceTimeField solve_parabolic(const std::shared_ptr<const Lattice>& lattice,
                               const SpaceTimeFn& F, double horizon,
                               const GameParams& params, int threads) {
    const Lattice& lat = *lattice;
    if (params.infinite_p() || !(params.beta > 0) || params.alpha < 0 || params.alpha >= 1)
        throw std::invalid_argument("solve_parabolic: need 0 <= alpha < 1, beta > 0");
    if (params.epsilon != lat.epsilon())
        throw std::invalid_argument("solve_parabolic: params.epsilon differs from the lattice");
    if (!(horizon > 0)) throw std::invalid_argument("solve_parabolic: horizon must be > 0");

    SpaceTimeField f;
    f.lattice = lattice;
    f.horizon = horizon;
    f.slice_dt = 0.5 * params.epsilon * params.epsilon;
    const double steps = horizon / f.slice_dt;
    f.degenerate_horizon = horizon < f.slice_dt;
    f.slice_count = f.degenerate_horizon
                        ? 1
                        : static_cast<int>(std::ceil(steps - 1e-9)) + 1;
    f.values.assign(static_cast<size_t>(f.slice_count),
                    std::vector<double>(static_cast<size_t>(lat.grid_size()), 0.0));

    // slice 0: initial datum everywhere (the initial slab collapsed to t = 0)
    for (int64_t idx : lat.active_nodes())
        f.values[0][static_cast<size_t>(idx)] = F(lat.node_point(idx), 0.0);

    const auto interior_count = static_cast<int64_t>(lat.interior_nodes().size());
    for (int s = 1; s < f.slice_count; ++s) {
        const double t = f.time_of(s);
        auto& cur = f.values[static_cast<size_t>(s)];
        const auto& prev = f.values[static_cast<size_t>(s - 1)];
        for (int64_t idx : lat.strip_nodes()) cur[static_cast<size_t>(idx)] = F(lat.node_point(idx), t);
        parallel_for(interior_count, threads, [&](int64_t b, int64_t e) {
            for (int64_t i = b; i < e; ++i) {
                const int64_t idx = lat.interior_nodes()[static_cast<size_t>(i)];
                cur[static_cast<size_t>(idx)] =
                    slice_update(lat, prev, static_cast<size_t>(i), params.alpha, params.beta);
            }
        });
    }
    return f;
}

double parabolic_defect(const SpaceTimeField& field, const GameParams& params) {
    const Lattice& lat = *field.lattice;
    double d = 0;
    for (int s = 1; s < field.slice_count; ++s) {
        const auto& cur = field.values[static_cast<size_t>(s)];
        const auto& prev = field.values[static_cast<size_t>(s - 1)];
        for (size_t i = 0; i < lat.interior_nodes().size(); ++i) {
            const int64_t idx = lat.interior_nodes()[i];
            const double v = slice_update(lat, prev, i, params.alpha, params.beta);
            d = std::max(d, std::abs(v - cur[static_cast<size_t>(idx)]));
        }
    }
    return d;
}

}  // namespace towlab
