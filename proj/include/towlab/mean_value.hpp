#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "towlab/point.hpp"

namespace towlab {

// Analytic test function for the mean-value expansions. `operator_value`
// evaluates the normalized p-Laplacian Delta phi + (p-2) Delta_inf^N phi in
// closed form where the function is smooth with nonzero gradient.
struct TestFunction {
    std::string name;
    int dim = 0;  // 0: any dimension
    std::function<double(const Point&)> value;
    std::function<double(const Point&, double)> value_t;  // space-time evaluator
    std::function<double(const Point&, double /*p*/)> operator_value;  // may be empty
    std::vector<Point> gradient_nonzero_at;
};

TestFunction make_linear(int n);
TestFunction make_quadratic_norm(int n);     // |x|^2
TestFunction make_quadratic_x1(int n);       // x1^2
TestFunction make_aronsson();                // |x1|^{4/3} - |x2|^{4/3}, n = 2
TestFunction make_radial_profile(double p, int n);  // |x|^{(p-n)/(p-1)}, p != n
TestFunction make_caloric(int n);            // x1^2 + 2t/(n+2)

// By-name lookup for the CLI: linear, quadratic, quadratic_x1, aronsson,
// radial, caloric.
TestFunction builtin_test_function(const std::string& name, double p, int n);
std::vector<std::string> builtin_test_names();

struct BallExtrema {
    double max = 0;
    double min = 0;
    Point argmax{1};
    Point argmin{1};
};

// max/min over the closed eps-ball: midpoint-grid scan at level m plus a
// golden-section refinement on the sphere (n <= 3).
BallExtrema scan_ball_extrema(const std::function<double(const Point&)>& f, const Point& x,
                              double eps, int m);

// Exact extrema of the Aronsson function over the closed eps-ball centered at
// an on-axis point (x1, 0) with |x1| > eps.
BallExtrema aronsson_analytic_extrema(const Point& x, double eps);

// Midpoint tensor-grid quadrature of the ball average at level m (cells of
// side eps/m restricted to the open ball).
double ball_average(const std::function<double(const Point&)>& f, const Point& x, double eps,
                    int m);

// (alpha/2)(max+min over the closed ball) + beta * (ball average); for
// p = infinity just (max+min)/2.
double mv_value(const TestFunction& phi, const Point& x, double eps, double p, int n, int m,
                bool analytic_extrema = false);

double mv_residual(const TestFunction& phi, const Point& x, double eps, double p, int n, int m,
                   bool analytic_extrema = false);

// [(alpha/2)(max+min) + beta * avg](. , t - eps^2/2) - u(x, t)
double parabolic_mv_residual(const TestFunction& u, const Point& x, double t, double eps,
                             double p, int n, int m);

// Central-difference gradient/Hessian assembled into the normalized
// p-Laplacian; the independent oracle certifying test functions. Throws when
// the gradient magnitude is below `grad_threshold`.
double fd_normalized_p_laplacian(const TestFunction& phi, const Point& x, double p, int n,
                                 double h_fd, double grad_threshold = 1e-8);

struct MvLimit {
    double limit = 0;
    double order = 0;
    bool extrapolated = false;  // false: raw table only (non-monotone residuals)
    std::vector<double> epsilons;
    std::vector<double> residuals_over_eps2;
};

// Richardson extrapolation of residual/eps^2 over a decreasing eps sequence.
MvLimit mv_limit(const TestFunction& phi, const Point& x, double p, int n,
                 std::span<const double> eps_seq, int m, bool analytic_extrema = false);

}  // namespace towlab
