#pragma once

#include <functional>
#include <vector>

#include "towlab/point.hpp"

namespace towlab {

// 1D eps-grid walk between endpoints a and b; the step must divide b - a.
struct DiscreteWalkSpec {
    double a = 0;
    double b = 1;
    double eps = 0.1;
    double payoff_a = 0;
    double payoff_b = 1;
    double step_cost = 0;  // running cost added once per step

    int node_count() const;
    double node(int i) const { return a + i * eps; }
};

// Exact solution of u(x) = (u(x-eps) + u(x+eps))/2 with u(a) = payoff_a,
// u(b) = payoff_b (tridiagonal solve; linear for 0/1 data).
std::vector<double> discrete_hitting_value(const DiscreteWalkSpec& spec);

// Exact solution of u(x) = (u(x-eps) + u(x+eps))/2 + step_cost, zero-cost
// boundary given by the spec payoffs.
std::vector<double> discrete_running_time(const DiscreteWalkSpec& spec);

// 2D grid {0..m+1}^2 * eps with the 4-neighbor averaging DPP; boundary payoff
// F evaluated at boundary nodes. Returns the full (m+2)^2 grid row-major
// (x-major inner loop). Direct dense solve; small grids only.
std::vector<double> discrete_2d_value(int m, const std::function<double(const Point&)>& F,
                                      double eps);

}  // namespace towlab
