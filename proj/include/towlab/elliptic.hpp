#pragma once

#include <functional>
#include <utility>

#include "towlab/lattice.hpp"
#include "towlab/params.hpp"

namespace towlab {

using ScalarField = std::function<double(const Point&)>;

struct SolveReport {
    int sweeps = 0;
    double final_defect = 0;
    bool converged = false;
    double wall_time_s = 0;
};

struct SolveOptions {
    double tol = 1e-10;
    // < 0 selects the default 50 * (diam/eps)^2
    long max_sweeps = -1;
    int threads = 1;
    // In-place sweeps; faster, but departs from the monotone-iteration proof.
    bool gauss_seidel = false;
};

// One Jacobi sweep of the DPP operator: at interior nodes
// (alpha/2)(max + min over the ball stencil of the input) + beta * stencil mean;
// strip values are copied unchanged.
LatticeField apply_T(const LatticeField& u, const GameParams& params, int threads = 1);

// sup over interior nodes of |u - T(u)|
double defect(const LatticeField& u, const GameParams& params);

// Monotone fixed-point iteration started from u0 = inf(strip F) inside, F on
// the strip. Stops when the sup-norm sweep change < tol and the final defect
// < 10*tol, or at max_sweeps (converged = false, last iterate returned).
std::pair<LatticeField, SolveReport> solve(const std::shared_ptr<const Lattice>& lattice,
                                           const ScalarField& F, const GameParams& params,
                                           const SolveOptions& opts = {});

// Fixed point of u = T(u) + eps^2 * f at interior nodes.
std::pair<LatticeField, SolveReport> running_payoff_solve(
    const std::shared_ptr<const Lattice>& lattice, const ScalarField& F,
    const ScalarField& f, const GameParams& params, const SolveOptions& opts = {});

}  // namespace towlab
