#include "towlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "towlab/parallel.hpp"
#include "towlab/params.hpp"

namespace towlab {

CylinderConfig CylinderConfig::for_p(double p, int n, double r, double ell, double epsilon) {
    auto [alpha, beta] = probabilities(p, n);
    CylinderConfig c;
    c.r = r;
    c.ell = ell;
    c.epsilon = epsilon;
    c.alpha = alpha;
    c.beta = beta;
    c.n = n;
    c.validate();
    return c;
}

void CylinderConfig::validate() const {
    if (!(r > 0) || !(epsilon > 0) || !(ell > 0))
        throw std::invalid_argument("CylinderConfig: r, ell, epsilon must be > 0");
    if (n < 1 || n + 1 > kMaxDim)
        throw std::invalid_argument("CylinderConfig: base dimension out of range");
    if (alpha < 0 || beta < 0 || std::abs(alpha + beta - 1.0) > 1e-12)
        throw std::invalid_argument("CylinderConfig: need alpha, beta >= 0 with alpha+beta = 1");
    if (!(ell < height()))
        throw std::invalid_argument("CylinderConfig: start height not inside the cylinder");
}

long cylinder_round_cap(const CylinderConfig& cfg) {
    const double ratio = cfg.r / cfg.epsilon;
    return static_cast<long>(1e4 * ratio * ratio) + 100;
}

CylinderExit cylinder_walk(const CylinderConfig& cfg, Rng& rng, long round_cap) {
    cfg.validate();
    if (round_cap < 0) round_cap = cylinder_round_cap(cfg);
    Point x = Point::zero(cfg.n);
    // vertical position kept as an integer step count so +-eps moves land on
    // the 0 and 2r+ell levels exactly when they are grid-aligned
    long j = 0;
    double y = cfg.ell;
    const double top = cfg.height();
    const double side2 = 4.0 * cfg.r * cfg.r;
    CylinderExit out;
    while (out.rounds < round_cap) {
        const double u = rng.uniform();
        ++out.rounds;
        if (u < cfg.beta) {
            x = rng.uniform_ball(x, cfg.epsilon);
            if (norm2(x) >= side2) {
                out.face = ExitFace::side;
                out.y_final = y;
                return out;
            }
        } else {
            j += (u < cfg.beta + 0.5 * cfg.alpha) ? -1 : 1;
            y = cfg.ell + static_cast<double>(j) * cfg.epsilon;
            if (y <= 0) {
                out.face = ExitFace::bottom;
                out.y_final = y;
                return out;
            }
            if (y >= top) {
                out.face = ExitFace::top;
                out.y_final = y;
                return out;
            }
        }
    }
    out.face = ExitFace::capped;
    out.y_final = y;
    return out;
}

namespace {

struct WalkBatch {
    std::vector<double> bottom;   // indicator
    std::vector<double> rounds;
    std::vector<double> y2;
    long capped = 0;
};

WalkBatch run_batch(const CylinderConfig& cfg, long trials, uint64_t master_seed, int threads) {
    WalkBatch batch;
    batch.bottom.resize(static_cast<size_t>(trials));
    batch.rounds.resize(static_cast<size_t>(trials));
    batch.y2.resize(static_cast<size_t>(trials));
    std::vector<uint8_t> capped(static_cast<size_t>(trials), 0);
    const long cap = cylinder_round_cap(cfg);
    parallel_for(trials, threads, [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            Rng rng = Rng::child(master_seed, static_cast<uint64_t>(i));
            const CylinderExit ex = cylinder_walk(cfg, rng, cap);
            batch.bottom[static_cast<size_t>(i)] = ex.face == ExitFace::bottom ? 1.0 : 0.0;
            batch.rounds[static_cast<size_t>(i)] = static_cast<double>(ex.rounds);
            batch.y2[static_cast<size_t>(i)] = ex.y_final * ex.y_final;
            capped[static_cast<size_t>(i)] = ex.face == ExitFace::capped ? 1 : 0;
        }
    });
    for (uint8_t c : capped) batch.capped += c;
    return batch;
}

std::pair<double, double> mean_se(const std::vector<double>& xs) {
    const auto n = static_cast<int64_t>(xs.size());
    const double mean = pairwise_sum(xs.data(), n) / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    std::vector<double> dev(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - mean;
        dev[i] = d * d;
    }
    const double var = pairwise_sum(dev.data(), n) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

ValueEstimate bottom_escape_probability(const CylinderConfig& cfg, long trials,
                                        uint64_t master_seed, int threads) {
    if (trials < 1) throw std::invalid_argument("bottom_escape_probability: trials >= 1");
    const WalkBatch batch = run_batch(cfg, trials, master_seed, threads);
    auto [mean, se] = mean_se(batch.bottom);
    ValueEstimate est;
    est.mean = mean;
    est.std_error = se;
    est.trials = trials;
    est.ci95_lo = mean - 1.96 * se;
    est.ci95_hi = mean + 1.96 * se;
    est.capped_fraction = static_cast<double>(batch.capped) / static_cast<double>(trials);
    est.seed = master_seed;
    est.valid = batch.capped < trials;
    return est;
}

ExitTimeReport exit_time_moment_check(const CylinderConfig& cfg, long trials,
                                      uint64_t master_seed, int threads) {
    if (!(cfg.alpha > 0))
        throw std::invalid_argument("exit_time_moment_check: needs alpha > 0");
    if (trials < 1) throw std::invalid_argument("exit_time_moment_check: trials >= 1");
    const WalkBatch batch = run_batch(cfg, trials, master_seed, threads);
    ExitTimeReport rep;
    auto [mr, mr_se] = mean_se(batch.rounds);
    auto [my2, my2_se] = mean_se(batch.y2);
    rep.mean_rounds = mr;
    rep.rounds_std_error = mr_se;
    rep.mean_y2_final = my2;
    rep.y0_sq = cfg.ell * cfg.ell;
    const double eps2 = cfg.epsilon * cfg.epsilon;
    rep.lhs = cfg.alpha * mr * eps2;
    rep.rhs = my2 - rep.y0_sq;
    const double tol = 3.0 * (cfg.alpha * mr_se * eps2 + my2_se);
    rep.inequality_holds = rep.lhs <= rep.rhs + tol;
    rep.C = mr * eps2;
    rep.capped_fraction = static_cast<double>(batch.capped) / static_cast<double>(trials);
    return rep;
}

double harnack_ratio(const LatticeField& field, const Point& center, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("harnack_ratio: rho must be > 0");
    const Lattice& lat = *field.lattice;
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    const double r2 = rho * rho;
    long count = 0;
    for (int64_t idx : lat.active_nodes()) {
        if (dist2(lat.node_point(idx), center) > r2) continue;
        const double v = field[idx];
        if (v < 0)
            throw std::invalid_argument("harnack_ratio: field is negative on the queried ball");
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        ++count;
    }
    if (count == 0) throw std::invalid_argument("harnack_ratio: no lattice node in the ball");
    if (mn <= 0) return std::numeric_limits<double>::infinity();  // interior zero: flagged
    return mx / std::max(mn, 1e-300);
}

double lipschitz_quotient(const LatticeField& field, const Point& z0, double r) {
    const Lattice& lat = *field.lattice;
    const double eps = lat.epsilon();
    if (!(r > eps)) throw std::invalid_argument("lipschitz_quotient: need r > eps");
    if (lat.domain().interior_radius(z0) < 10 * r)
        throw std::invalid_argument("lipschitz_quotient: B_10r(z0) leaves the domain");

    std::vector<int64_t> inner;
    double osc_max = -std::numeric_limits<double>::infinity();
    double osc_min = std::numeric_limits<double>::infinity();
    const double r2 = r * r;
    const double r6sq = 36.0 * r * r;
    for (int64_t idx : lat.active_nodes()) {
        const double d2 = dist2(lat.node_point(idx), z0);
        if (d2 <= r6sq) {
            osc_max = std::max(osc_max, field[idx]);
            osc_min = std::min(osc_min, field[idx]);
        }
        if (d2 <= r2) inner.push_back(idx);
    }
    const double osc = osc_max - osc_min;
    if (!(osc > 0)) return 0.0;

    double best = 0;
    for (size_t a = 0; a < inner.size(); ++a) {
        const Point xa = lat.node_point(inner[a]);
        const double ua = field[inner[a]];
        for (size_t b = a + 1; b < inner.size(); ++b) {
            const Point xb = lat.node_point(inner[b]);
            const double d = dist(xa, xb);
            if (d < eps) continue;
            best = std::max(best, std::abs(ua - field[inner[b]]) * r / (d * osc));
        }
    }
    return best;
}

}  // namespace towlab
