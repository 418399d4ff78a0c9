#pragma once

#include <functional>
#include <vector>

#include "towlab/lattice.hpp"
#include "towlab/params.hpp"

namespace towlab {

using SpaceTimeFn = std::function<double(const Point&, double)>;

// Values on (node, slice) with slice times t_s = s * eps^2/2 clipped to
// [0, horizon]. Slice 0 carries the initial datum; strip nodes carry the
// lateral datum at every slice.
struct SpaceTimeField {
    std::shared_ptr<const Lattice> lattice;
    double horizon = 0;
    double slice_dt = 0;  // eps^2 / 2
    int slice_count = 0;
    bool degenerate_horizon = false;  // horizon < eps^2/2: only slice 0 returned
    std::vector<std::vector<double>> values;  // [slice][grid node]

    double time_of(int s) const { return std::min(slice_dt * s, horizon); }
    double at(int64_t node, int slice) const {
        return values[static_cast<size_t>(slice)][static_cast<size_t>(node)];
    }
};

// Forward time marching: each slice is the DPP average of the previous one,
// which reproduces the unique fixed point in a single pass.
SpaceTimeField solve_parabolic(const std::shared_ptr<const Lattice>& lattice,
                               const SpaceTimeFn& F, double horizon,
                               const GameParams& params, int threads = 1);

// sup over interior (node, slice >= 1) of the slice-recursion residual
double parabolic_defect(const SpaceTimeField& field, const GameParams& params);

}  // namespace towlab
