#include "towlab/mean_value.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "towlab/params.hpp"

namespace towlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double pow43(double v) { return std::pow(std::abs(v), 4.0 / 3.0); }

std::function<double(const Point&, double)> lift_static(
    const std::function<double(const Point&)>& f) {
    return [f](const Point& x, double) { return f(x); };
}

}  // namespace

TestFunction make_linear(int n) {
    TestFunction f;
    f.name = "linear";
    f.dim = n;
    f.value = [](const Point& x) { return x[0]; };
    f.value_t = lift_static(f.value);
    f.operator_value = [](const Point&, double) { return 0.0; };
    f.gradient_nonzero_at = {Point::zero(n)};
    return f;
}

TestFunction make_quadratic_norm(int n) {
    TestFunction f;
    f.name = "quadratic";
    f.dim = n;
    f.value = [](const Point& x) { return norm2(x); };
    f.value_t = lift_static(f.value);
    f.operator_value = [n](const Point& x, double p) {
        if (norm2(x) < 1e-20)
            throw std::domain_error("quadratic: normalized operator undefined at the origin");
        return 2.0 * n + (p - 2.0) * 2.0;
    };
    Point sample = Point::zero(n);
    sample[0] = 0.5;
    f.gradient_nonzero_at = {sample};
    return f;
}

TestFunction make_quadratic_x1(int n) {
    TestFunction f;
    f.name = "quadratic_x1";
    f.dim = n;
    f.value = [](const Point& x) { return x[0] * x[0]; };
    f.value_t = lift_static(f.value);
    f.operator_value = [](const Point& x, double p) {
        if (std::abs(x[0]) < 1e-10)
            throw std::domain_error("quadratic_x1: gradient vanishes on {x1 = 0}");
        return 2.0 + (p - 2.0) * 2.0;
    };
    Point sample = Point::zero(n);
    sample[0] = 0.5;
    f.gradient_nonzero_at = {sample};
    return f;
}

TestFunction make_aronsson() {
    TestFunction f;
    f.name = "aronsson";
    f.dim = 2;
    f.value = [](const Point& x) { return pow43(x[0]) - pow43(x[1]); };
    f.value_t = lift_static(f.value);
    // classical second derivatives away from the axes; Delta_inf^N = 0 there
    f.operator_value = [](const Point& x, double p) {
        if (std::abs(x[0]) < 1e-8 || std::abs(x[1]) < 1e-8)
            throw std::domain_error("aronsson: not C^2 on the axes");
        if (p == std::numeric_limits<double>::infinity()) return 0.0;
        const double lap = (4.0 / 9.0) * (std::pow(std::abs(x[0]), -2.0 / 3.0) -
                                          std::pow(std::abs(x[1]), -2.0 / 3.0));
        return lap;
    };
    f.gradient_nonzero_at = {Point{1.0, 0.5}, Point{0.7, 0.3}};
    return f;
}

TestFunction make_radial_profile(double p, int n) {
    if (p == std::numeric_limits<double>::infinity() || std::abs(p - n) < 1e-12)
        throw std::invalid_argument("radial profile: need finite p != n");
    const double gamma = (p - n) / (p - 1.0);
    TestFunction f;
    f.name = "radial";
    f.dim = n;
    f.value = [gamma](const Point& x) { return std::pow(norm(x), gamma); };
    f.value_t = lift_static(f.value);
    f.operator_value = [gamma, n](const Point& x, double q) {
        const double r = norm(x);
        if (r < 1e-10) throw std::domain_error("radial: singular at the origin");
        // Delta = g''(r) + (n-1) g'(r)/r, Delta_inf^N = g''(r)
        const double gpp = gamma * (gamma - 1.0) * std::pow(r, gamma - 2.0);
        const double gp_over_r = gamma * std::pow(r, gamma - 2.0);
        if (q == std::numeric_limits<double>::infinity()) return gpp;
        return gpp + (n - 1.0) * gp_over_r + (q - 2.0) * gpp;
    };
    Point sample = Point::zero(n);
    sample[0] = 0.4;
    if (n > 1) sample[1] = 0.3;
    f.gradient_nonzero_at = {sample};
    return f;
}

TestFunction make_caloric(int n) {
    TestFunction f;
    f.name = "caloric";
    f.dim = n;
    f.value = [](const Point& x) { return x[0] * x[0]; };
    f.value_t = [n](const Point& x, double t) { return x[0] * x[0] + 2.0 * t / (n + 2.0); };
    f.operator_value = [](const Point& x, double p) {
        if (std::abs(x[0]) < 1e-10)
            throw std::domain_error("caloric: gradient vanishes on {x1 = 0}");
        return 2.0 + (p - 2.0) * 2.0;
    };
    Point sample = Point::zero(n);
    sample[0] = 0.5;
    f.gradient_nonzero_at = {sample};
    return f;
}

TestFunction builtin_test_function(const std::string& name, double p, int n) {
    if (name == "linear") return make_linear(n);
    if (name == "quadratic") return make_quadratic_norm(n);
    if (name == "quadratic_x1") return make_quadratic_x1(n);
    if (name == "aronsson") return make_aronsson();
    if (name == "radial") return make_radial_profile(p, n);
    if (name == "caloric") return make_caloric(n);
    throw std::invalid_argument("unknown test function: " + name);
}

std::vector<std::string> builtin_test_names() {
    return {"linear", "quadratic", "quadratic_x1", "aronsson", "radial", "caloric"};
}

namespace {

// golden-section minimization on [a, b]
template <typename F>
double golden_min(F&& f, double a, double b, int iters = 120) {
    const double gr = 0.6180339887498948482;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && (b - a) > 1e-15; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

Point sphere_point_2d(const Point& x, double eps, double th) {
    return Point{x[0] + eps * std::cos(th), x[1] + eps * std::sin(th)};
}

Point sphere_point_3d(const Point& x, double eps, double polar, double azim) {
    return Point{x[0] + eps * std::sin(polar) * std::cos(azim),
                 x[1] + eps * std::sin(polar) * std::sin(azim),
                 x[2] + eps * std::cos(polar)};
}

struct Best {
    double v = 0;
    Point pt{1};
};

// sign = +1 searches the max of f, -1 the min
Best sphere_extremum(const std::function<double(const Point&)>& f, const Point& x, double eps,
                     int m, double sign) {
    const int n = x.dim();
    Best best;
    if (n == 1) {
        const Point a{x[0] - eps}, b{x[0] + eps};
        const double fa = sign * f(a), fb = sign * f(b);
        best = fa >= fb ? Best{fa, a} : Best{fb, b};
        best.v *= sign;
        return best;
    }
    if (n == 2) {
        const int nth = std::max(128, 16 * m);
        int bi = 0;
        double bv = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < nth; ++i) {
            const double th = 2.0 * kPi * i / nth;
            const double v = sign * f(sphere_point_2d(x, eps, th));
            if (v > bv) {
                bv = v;
                bi = i;
            }
        }
        const double lo = 2.0 * kPi * (bi - 1) / nth;
        const double hi = 2.0 * kPi * (bi + 1) / nth;
        const double th =
            golden_min([&](double t) { return -sign * f(sphere_point_2d(x, eps, t)); }, lo, hi);
        Point pt = sphere_point_2d(x, eps, th);
        if (sign * f(pt) < bv) pt = sphere_point_2d(x, eps, 2.0 * kPi * bi / nth);
        return {f(pt), pt};
    }
    if (n == 3) {
        const int npol = std::max(64, 8 * m);
        const int nazi = 2 * npol;
        double bv = -std::numeric_limits<double>::infinity();
        double bpol = 0, bazi = 0;
        for (int i = 0; i <= npol; ++i) {
            const double pol = kPi * i / npol;
            for (int j = 0; j < nazi; ++j) {
                const double az = 2.0 * kPi * j / nazi;
                const double v = sign * f(sphere_point_3d(x, eps, pol, az));
                if (v > bv) {
                    bv = v;
                    bpol = pol;
                    bazi = az;
                }
            }
        }
        double wpol = kPi / npol, wazi = 2.0 * kPi / nazi;
        for (int round = 0; round < 8; ++round) {
            bpol = golden_min(
                [&](double t) { return -sign * f(sphere_point_3d(x, eps, t, bazi)); },
                bpol - wpol, bpol + wpol, 60);
            bazi = golden_min(
                [&](double t) { return -sign * f(sphere_point_3d(x, eps, bpol, t)); },
                bazi - wazi, bazi + wazi, 60);
            wpol *= 0.35;
            wazi *= 0.35;
        }
        const Point pt = sphere_point_3d(x, eps, bpol, bazi);
        return {f(pt), pt};
    }
    throw std::invalid_argument("scan_ball_extrema: sphere refinement supports n <= 3");
}

template <typename CellFn>
void for_ball_cells(const Point& x, double eps, int m, CellFn&& fn) {
    const int n = x.dim();
    const double h = eps / m;
    const double e2 = eps * eps;
    std::array<int, kMaxDim> it{};
    const int cells = 2 * m;
    for (;;) {
        Point o(n);
        double r2 = 0;
        for (int ax = 0; ax < n; ++ax) {
            o[ax] = (it[ax] - m + 0.5) * h;
            r2 += o[ax] * o[ax];
        }
        if (r2 < e2) {
            Point y = x;
            y += o;
            fn(y);
        }
        int ax = n - 1;
        for (; ax >= 0; --ax) {
            if (++it[ax] < cells) break;
            it[ax] = 0;
        }
        if (ax < 0) break;
    }
}

}  // namespace

BallExtrema scan_ball_extrema(const std::function<double(const Point&)>& f, const Point& x,
                              double eps, int m) {
    if (!(eps > 0) || m < 2)
        throw std::invalid_argument("scan_ball_extrema: need eps > 0 and m >= 2");
    BallExtrema ex;
    ex.max = -std::numeric_limits<double>::infinity();
    ex.min = std::numeric_limits<double>::infinity();
    ex.argmax = x;
    ex.argmin = x;
    // center and interior midpoint grid
    long seen = 0;
    auto consider = [&](const Point& y) {
        const double v = f(y);
        ++seen;
        if (v > ex.max) {
            ex.max = v;
            ex.argmax = y;
        }
        if (v < ex.min) {
            ex.min = v;
            ex.argmin = y;
        }
    };
    consider(x);
    for_ball_cells(x, eps, m, consider);
    if (seen < 2) throw std::invalid_argument("scan_ball_extrema: quadrature level too coarse");
    const Best mx = sphere_extremum(f, x, eps, m, +1.0);
    if (mx.v > ex.max) {
        ex.max = mx.v;
        ex.argmax = mx.pt;
    }
    const Best mn = sphere_extremum(f, x, eps, m, -1.0);
    if (mn.v < ex.min) {
        ex.min = mn.v;
        ex.argmin = mn.pt;
    }
    return ex;
}

BallExtrema aronsson_analytic_extrema(const Point& x, double eps) {
    if (x.dim() != 2 || std::abs(x[1]) > 1e-12 || std::abs(x[0]) <= eps)
        throw std::invalid_argument(
            "aronsson analytic extrema: defined for on-axis points (x1, 0), |x1| > eps");
    const double x0 = std::abs(x[0]);
    const double mu = eps / x0;
    const double c = 0.5 * (mu - std::sqrt(4.0 + mu * mu));
    const double s = std::sqrt(std::max(1.0 - c * c, 0.0));
    BallExtrema ex;
    ex.max = std::pow(x0 + eps, 4.0 / 3.0);
    ex.min = std::pow(x0 + eps * c, 4.0 / 3.0) - std::pow(eps * s, 4.0 / 3.0);
    const double sgn = x[0] >= 0 ? 1.0 : -1.0;
    ex.argmax = Point{sgn * (x0 + eps), 0.0};
    ex.argmin = Point{sgn * (x0 + eps * c), eps * s};
    return ex;
}

double ball_average(const std::function<double(const Point&)>& f, const Point& x, double eps,
                    int m) {
    if (!(eps > 0) || m < 2)
        throw std::invalid_argument("ball_average: need eps > 0 and m >= 2");
    double sum = 0;
    long count = 0;
    for_ball_cells(x, eps, m, [&](const Point& y) {
        sum += f(y);
        ++count;
    });
    if (count == 0) throw std::invalid_argument("ball_average: quadrature level too coarse");
    return sum / static_cast<double>(count);
}

namespace {

double mv_value_impl(const std::function<double(const Point&)>& f, const std::string& name,
                     const Point& x, double eps, double p, int n, int m,
                     bool analytic_extrema) {
    if (x.dim() != n) throw std::invalid_argument("mv_value: point dimension mismatch");
    auto [alpha, beta] = probabilities(p, n);
    BallExtrema ex = (analytic_extrema && name == "aronsson")
                         ? aronsson_analytic_extrema(x, eps)
                         : scan_ball_extrema(f, x, eps, m);
    if (p == std::numeric_limits<double>::infinity()) return 0.5 * (ex.max + ex.min);
    return 0.5 * alpha * (ex.max + ex.min) + beta * ball_average(f, x, eps, m);
}

}  // namespace

double mv_value(const TestFunction& phi, const Point& x, double eps, double p, int n, int m,
                bool analytic_extrema) {
    if (phi.dim != 0 && phi.dim != n)
        throw std::invalid_argument("mv_value: test function dimension mismatch");
    return mv_value_impl(phi.value, phi.name, x, eps, p, n, m, analytic_extrema);
}

double mv_residual(const TestFunction& phi, const Point& x, double eps, double p, int n, int m,
                   bool analytic_extrema) {
    return mv_value(phi, x, eps, p, n, m, analytic_extrema) - phi.value(x);
}

double parabolic_mv_residual(const TestFunction& u, const Point& x, double t, double eps,
                             double p, int n, int m) {
    if (!u.value_t) throw std::invalid_argument("parabolic_mv_residual: no space-time evaluator");
    if (!(t > 0.5 * eps * eps))
        throw std::invalid_argument("parabolic_mv_residual: need t > eps^2/2");
    const double ts = t - 0.5 * eps * eps;
    auto slice = [&](const Point& y) { return u.value_t(y, ts); };
    return mv_value_impl(slice, u.name, x, eps, p, n, m, false) - u.value_t(x, t);
}

double fd_normalized_p_laplacian(const TestFunction& phi, const Point& x, double p, int n,
                                 double h_fd, double grad_threshold) {
    if (phi.dim != 0 && phi.dim != n)
        throw std::invalid_argument("fd operator: test function dimension mismatch");
    if (!(h_fd > 0)) throw std::invalid_argument("fd operator: h_fd must be > 0");
    const auto& f = phi.value;
    Point g(n);
    for (int i = 0; i < n; ++i) {
        Point a = x, b = x;
        a[i] += h_fd;
        b[i] -= h_fd;
        g[i] = (f(a) - f(b)) / (2 * h_fd);
    }
    const double g2 = norm2(g);
    if (std::sqrt(g2) <= grad_threshold)
        throw std::domain_error("fd operator: gradient below threshold, normalized operator undefined");

    const double fx = f(x);
    double lap = 0;
    double quad = 0;  // <H g, g>
    for (int i = 0; i < n; ++i) {
        Point a = x, b = x;
        a[i] += h_fd;
        b[i] -= h_fd;
        const double hii = (f(a) - 2 * fx + f(b)) / (h_fd * h_fd);
        lap += hii;
        quad += hii * g[i] * g[i];
        for (int j = i + 1; j < n; ++j) {
            Point pp = x, pm = x, mp = x, mm = x;
            pp[i] += h_fd;
            pp[j] += h_fd;
            pm[i] += h_fd;
            pm[j] -= h_fd;
            mp[i] -= h_fd;
            mp[j] += h_fd;
            mm[i] -= h_fd;
            mm[j] -= h_fd;
            const double hij = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h_fd * h_fd);
            quad += 2 * hij * g[i] * g[j];
        }
    }
    const double inf_lap = quad / g2;
    if (p == std::numeric_limits<double>::infinity()) return inf_lap;
    return lap + (p - 2.0) * inf_lap;
}

MvLimit mv_limit(const TestFunction& phi, const Point& x, double p, int n,
                 std::span<const double> eps_seq, int m, bool analytic_extrema) {
    if (eps_seq.size() < 3)
        throw std::invalid_argument("mv_limit: need at least 3 epsilon values");
    for (size_t i = 1; i < eps_seq.size(); ++i)
        if (!(eps_seq[i] < eps_seq[i - 1]))
            throw std::invalid_argument("mv_limit: epsilons must decrease");

    MvLimit out;
    for (double e : eps_seq) {
        out.epsilons.push_back(e);
        out.residuals_over_eps2.push_back(mv_residual(phi, x, e, p, n, m, analytic_extrema) /
                                          (e * e));
    }
    const auto& r = out.residuals_over_eps2;
    const size_t k = r.size();
    bool monotone = true;
    const double d0 = r[1] - r[0];
    for (size_t i = 1; i + 1 < k; ++i) {
        const double d = r[i + 1] - r[i];
        if (d == 0 || d0 == 0 || (d > 0) != (d0 > 0)) monotone = false;
    }
    out.limit = r.back();
    out.order = std::numeric_limits<double>::quiet_NaN();
    if (!monotone) return out;

    const double rho = eps_seq[k - 3] / eps_seq[k - 2];
    const double rho2 = eps_seq[k - 2] / eps_seq[k - 1];
    const double q = (r[k - 3] - r[k - 2]) / (r[k - 2] - r[k - 1]);
    if (!(q > 0) || std::abs(rho - rho2) > 1e-9 * rho) return out;
    const double gamma = std::log(q) / std::log(rho);
    const double denom = std::pow(rho, gamma) - 1.0;
    if (!(std::abs(denom) > 1e-12) || !std::isfinite(gamma)) return out;
    out.order = gamma;
    out.limit = r[k - 1] - (r[k - 2] - r[k - 1]) / denom;
    out.extrapolated = true;
    return out;
}

}  // namespace towlab
