#include "towlab/discrete.hpp"

#include <cmath>
#include <stdexcept>

namespace towlab {

int DiscreteWalkSpec::node_count() const {
    if (!(eps > 0) || !(b > a))
        throw std::invalid_argument("DiscreteWalkSpec: need b > a and eps > 0");
    const double steps = (b - a) / eps;
    const int m = static_cast<int>(std::llround(steps));
    if (m < 2 || std::abs(steps - m) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("DiscreteWalkSpec: eps must divide b - a (>= 2 steps)");
    return m + 1;
}

namespace {

// u(x) = (u(x-eps)+u(x+eps))/2 + c  <=>  -u_{i-1}/2 + u_i - u_{i+1}/2 = c
std::vector<double> tridiag_walk(const DiscreteWalkSpec& spec, double cost) {
    const int count = spec.node_count();
    const int m = count - 2;  // interior unknowns
    std::vector<double> u(static_cast<size_t>(count));
    u.front() = spec.payoff_a;
    u.back() = spec.payoff_b;
    if (m == 0) return u;

    std::vector<double> diag(static_cast<size_t>(m), 1.0);
    std::vector<double> rhs(static_cast<size_t>(m), cost);
    rhs[0] += 0.5 * spec.payoff_a;
    rhs[static_cast<size_t>(m - 1)] += 0.5 * spec.payoff_b;
    // Thomas algorithm with off-diagonals -1/2
    for (int i = 1; i < m; ++i) {
        const double w = -0.5 / diag[static_cast<size_t>(i - 1)];
        diag[static_cast<size_t>(i)] -= w * (-0.5);
        rhs[static_cast<size_t>(i)] -= w * rhs[static_cast<size_t>(i - 1)];
    }
    u[static_cast<size_t>(m)] = rhs[static_cast<size_t>(m - 1)] / diag[static_cast<size_t>(m - 1)];
    for (int i = m - 2; i >= 0; --i)
        u[static_cast<size_t>(i + 1)] =
            (rhs[static_cast<size_t>(i)] + 0.5 * u[static_cast<size_t>(i + 2)]) /
            diag[static_cast<size_t>(i)];
    return u;
}

}  // namespace

std::vector<double> discrete_hitting_value(const DiscreteWalkSpec& spec) {
    return tridiag_walk(spec, 0.0);
}

std::vector<double> discrete_running_time(const DiscreteWalkSpec& spec) {
    return tridiag_walk(spec, spec.step_cost);
}

std::vector<double> discrete_2d_value(int m, const std::function<double(const Point&)>& F,
                                      double eps) {
    if (m < 1 || m > 64) throw std::invalid_argument("discrete_2d_value: m must be in [1, 64]");
    const int side = m + 2;
    const int unknowns = m * m;
    auto node = [&](int ix, int iy) { return Point{ix * eps, iy * eps}; };
    auto interior_id = [&](int ix, int iy) { return (iy - 1) * m + (ix - 1); };

    // dense system A u = b for the 4-neighbor mean
    std::vector<double> A(static_cast<size_t>(unknowns) * unknowns, 0.0);
    std::vector<double> b(static_cast<size_t>(unknowns), 0.0);
    for (int iy = 1; iy <= m; ++iy) {
        for (int ix = 1; ix <= m; ++ix) {
            const int row = interior_id(ix, iy);
            A[static_cast<size_t>(row) * unknowns + row] = 1.0;
            const int nbs[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
            for (const auto& nb : nbs) {
                const int jx = nb[0], jy = nb[1];
                if (jx >= 1 && jx <= m && jy >= 1 && jy <= m)
                    A[static_cast<size_t>(row) * unknowns + interior_id(jx, jy)] -= 0.25;
                else
                    b[static_cast<size_t>(row)] += 0.25 * F(node(jx, jy));
            }
        }
    }

    // Gaussian elimination with partial pivoting
    std::vector<int> perm(static_cast<size_t>(unknowns));
    for (int i = 0; i < unknowns; ++i) perm[static_cast<size_t>(i)] = i;
    for (int col = 0; col < unknowns; ++col) {
        int piv = col;
        double best = std::abs(A[static_cast<size_t>(perm[static_cast<size_t>(col)]) * unknowns + col]);
        for (int r = col + 1; r < unknowns; ++r) {
            const double v =
                std::abs(A[static_cast<size_t>(perm[static_cast<size_t>(r)]) * unknowns + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-14)
            throw std::logic_error("discrete_2d_value: singular system (cannot happen)");
        std::swap(perm[static_cast<size_t>(col)], perm[static_cast<size_t>(piv)]);
        const int prow = perm[static_cast<size_t>(col)];
        const double pv = A[static_cast<size_t>(prow) * unknowns + col];
        for (int r = col + 1; r < unknowns; ++r) {
            const int rr = perm[static_cast<size_t>(r)];
            const double f = A[static_cast<size_t>(rr) * unknowns + col] / pv;
            if (f == 0) continue;
            for (int c = col; c < unknowns; ++c)
                A[static_cast<size_t>(rr) * unknowns + c] -=
                    f * A[static_cast<size_t>(prow) * unknowns + c];
            b[static_cast<size_t>(rr)] -= f * b[static_cast<size_t>(prow)];
        }
    }
    std::vector<double> x(static_cast<size_t>(unknowns), 0.0);
    for (int r = unknowns - 1; r >= 0; --r) {
        const int rr = perm[static_cast<size_t>(r)];
        double s = b[static_cast<size_t>(rr)];
        for (int c = r + 1; c < unknowns; ++c)
            s -= A[static_cast<size_t>(rr) * unknowns + c] * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(r)] = s / A[static_cast<size_t>(rr) * unknowns + r];
    }

    std::vector<double> out(static_cast<size_t>(side) * side);
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix)
            out[static_cast<size_t>(iy) * side + ix] =
                (ix >= 1 && ix <= m && iy >= 1 && iy <= m)
                    ? x[static_cast<size_t>(interior_id(ix, iy))]
                    : F(node(ix, iy));
    return out;
}

}  // namespace towlab
