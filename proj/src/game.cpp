#include "towlab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "towlab/parallel.hpp"

namespace towlab {

namespace {

void check_game_params(const GameParams& params) {
    if (params.infinite_p() || !(params.beta > 0))
        throw std::invalid_argument("game: beta must be > 0 (finite p)");
    if (params.alpha < 0)
        throw std::invalid_argument("game: alpha must be >= 0");
}

Point strategy_move(const Strategy& s, std::span<const Point> hist, std::span<const Toss> tosses,
                    const Point& x, double eps) {
    if (!s.next_move) throw std::invalid_argument("game: strategy has no rule");
    Point y = s.next_move(hist, tosses, x, eps);
    if (!(dist(y, x) < eps))
        throw std::runtime_error("game: strategy '" + s.name +
                                 "' returned a point outside the open eps-ball");
    return y;
}

// Shared round logic. For timed games t0 > 0; otherwise round_cap applies.
Trajectory run_game(const Point& start, const Strategy& sI, const Strategy& sII,
                    const GameParams& params, const PayoffFn* F,
                    const SpaceTimePayoffFn* Ft, double t0, const Domain& domain, Rng& rng,
                    long round_cap, std::vector<Point>& positions, std::vector<Toss>& tosses) {
    check_game_params(params);
    if (!domain.inside(start))
        throw std::invalid_argument("game: start must lie strictly inside the domain");

    const double eps = params.epsilon;
    const bool timed = Ft != nullptr;
    positions.clear();
    tosses.clear();
    positions.push_back(start);

    Trajectory traj;
    Point x = start;
    double t = t0;
    for (;;) {
        if (!timed && traj.rounds >= round_cap) {
            traj.end_state = EndState::capped;
            traj.payoff = (*F)(domain.project_to_boundary(x));
            break;
        }
        const double u = rng.uniform();
        Toss toss;
        Point y(x.dim());
        if (u < params.beta) {
            toss = Toss::noise;
            y = rng.uniform_ball(x, eps);
        } else if (u < params.beta + 0.5 * params.alpha) {
            toss = Toss::player_one;
            y = strategy_move(sI, positions, tosses, x, eps);
        } else {
            toss = Toss::player_two;
            y = strategy_move(sII, positions, tosses, x, eps);
        }
        positions.push_back(y);
        tosses.push_back(toss);
        ++traj.rounds;
        x = y;
        if (timed) t -= 0.5 * eps * eps;

        if (!domain.inside(x)) {
            traj.end_state = EndState::exited;
            traj.payoff = timed ? (*Ft)(x, std::max(t, 0.0)) : (*F)(x);
            break;
        }
        if (timed && t <= 0) {
            traj.end_state = EndState::time_out;
            traj.payoff = (*Ft)(x, 0.0);
            break;
        }
    }
    traj.t_final = timed ? std::max(t, 0.0) : 0.0;
    return traj;
}

ValueEstimate aggregate(const std::vector<double>& payoffs, const std::vector<uint8_t>& capped,
                        uint64_t master_seed) {
    ValueEstimate est;
    est.trials = static_cast<long>(payoffs.size());
    est.seed = master_seed;
    const auto n = static_cast<int64_t>(payoffs.size());
    est.mean = pairwise_sum(payoffs.data(), n) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> dev(payoffs.size());
        for (size_t i = 0; i < payoffs.size(); ++i) {
            const double d = payoffs[i] - est.mean;
            dev[i] = d * d;
        }
        const double var = pairwise_sum(dev.data(), n) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    est.ci95_lo = est.mean - 1.96 * est.std_error;
    est.ci95_hi = est.mean + 1.96 * est.std_error;
    long ncap = 0;
    for (uint8_t c : capped) ncap += c;
    est.capped_fraction = static_cast<double>(ncap) / static_cast<double>(n);
    est.valid = ncap < n;
    return est;
}

}  // namespace

long default_round_cap(const Domain& domain, double eps) {
    const double ratio = domain.diameter() / eps;
    return static_cast<long>(100.0 * ratio * ratio) + 100;
}

Trajectory play(const Point& start, const Strategy& sI, const Strategy& sII,
                const GameParams& params, const PayoffFn& F, const Domain& domain, Rng& rng,
                long round_cap) {
    if (round_cap < 1) throw std::invalid_argument("play: round_cap must be >= 1");
    std::vector<Point> positions;
    std::vector<Toss> tosses;
    Trajectory traj =
        run_game(start, sI, sII, params, &F, nullptr, 0, domain, rng, round_cap, positions, tosses);
    traj.positions = std::move(positions);
    traj.toss_log = std::move(tosses);
    return traj;
}

Trajectory play_timed(const Point& start, double t0, const Strategy& sI, const Strategy& sII,
                      const GameParams& params, const SpaceTimePayoffFn& F,
                      const Domain& domain, Rng& rng) {
    if (!(t0 > 0)) throw std::invalid_argument("play_timed: t0 must be > 0");
    std::vector<Point> positions;
    std::vector<Toss> tosses;
    Trajectory traj =
        run_game(start, sI, sII, params, nullptr, &F, t0, domain, rng, 0, positions, tosses);
    traj.positions = std::move(positions);
    traj.toss_log = std::move(tosses);
    return traj;
}

ValueEstimate estimate_value(const Point& start, const Strategy& sI, const Strategy& sII,
                             const GameParams& params, const PayoffFn& F,
                             const Domain& domain, long trials, uint64_t master_seed,
                             long round_cap, int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_value: trials must be >= 1");
    if (round_cap < 1) round_cap = default_round_cap(domain, params.epsilon);
    std::vector<double> payoffs(static_cast<size_t>(trials));
    std::vector<uint8_t> capped(static_cast<size_t>(trials), 0);
    parallel_for(trials, threads, [&](int64_t b, int64_t e) {
        std::vector<Point> positions;
        std::vector<Toss> tosses;
        for (int64_t i = b; i < e; ++i) {
            Rng rng = Rng::child(master_seed, static_cast<uint64_t>(i));
            Trajectory t = run_game(start, sI, sII, params, &F, nullptr, 0, domain, rng,
                                    round_cap, positions, tosses);
            payoffs[static_cast<size_t>(i)] = t.payoff;
            capped[static_cast<size_t>(i)] = t.end_state == EndState::capped ? 1 : 0;
        }
    });
    return aggregate(payoffs, capped, master_seed);
}

ValueEstimate estimate_value_timed(const Point& start, double t0, const Strategy& sI,
                                   const Strategy& sII, const GameParams& params,
                                   const SpaceTimePayoffFn& F, const Domain& domain,
                                   long trials, uint64_t master_seed, int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_value_timed: trials must be >= 1");
    if (!(t0 > 0)) throw std::invalid_argument("estimate_value_timed: t0 must be > 0");
    std::vector<double> payoffs(static_cast<size_t>(trials));
    std::vector<uint8_t> capped(static_cast<size_t>(trials), 0);
    parallel_for(trials, threads, [&](int64_t b, int64_t e) {
        std::vector<Point> positions;
        std::vector<Toss> tosses;
        for (int64_t i = b; i < e; ++i) {
            Rng rng = Rng::child(master_seed, static_cast<uint64_t>(i));
            Trajectory t = run_game(start, sI, sII, params, nullptr, &F, t0, domain, rng, 0,
                                    positions, tosses);
            payoffs[static_cast<size_t>(i)] = t.payoff;
        }
    });
    return aggregate(payoffs, capped, master_seed);
}

Strategy greedy_strategy(LatticeField field, GreedyMode mode) {
    auto shared = std::make_shared<const LatticeField>(std::move(field));
    Strategy s;
    s.name = mode == GreedyMode::maximize ? "greedy-max" : "greedy-min";
    s.next_move = [shared, mode](std::span<const Point>, std::span<const Toss>,
                                 const Point& x, double eps) {
        const auto candidates = shared->lattice->nodes_in_open_ball(x, eps);
        if (candidates.empty())
            throw std::runtime_error("greedy strategy: no lattice node in the eps-ball");
        int64_t best = candidates.front();
        double best_v = (*shared)[best];
        for (size_t i = 1; i < candidates.size(); ++i) {
            const double v = (*shared)[candidates[i]];
            const bool better = mode == GreedyMode::maximize ? v > best_v : v < best_v;
            if (better) {
                best = candidates[i];
                best_v = v;
            }
        }
        return shared->lattice->node_point(best);
    };
    return s;
}

Strategy pull_toward(const Point& target) {
    Strategy s;
    s.name = "pull-toward";
    s.next_move = [target](std::span<const Point>, std::span<const Toss>, const Point& x,
                           double eps) {
        const double d = dist(target, x);
        if (d < eps) return target;
        const double step = (1.0 - 1e-6) * eps / d;
        Point y = x;
        for (int i = 0; i < x.dim(); ++i) y[i] += step * (target[i] - x[i]);
        return y;
    };
    return s;
}

DiscreteWalkOutcome discrete_axis_walk(const Point& start, const Domain& domain, double eps,
                                       Rng& rng, long round_cap) {
    if (!domain.inside(start))
        throw std::invalid_argument("discrete_axis_walk: start must be inside the domain");
    const int n = start.dim();
    const bool rectangular = domain.shape() != Domain::Shape::ball;

    // Step counts are tracked as integers and the exit test runs against
    // per-axis step bounds, so grid-aligned walks hit the walls exactly
    // instead of drifting past them in floating point.
    std::array<double, kMaxDim> lo_steps{}, hi_steps{};
    if (rectangular) {
        const Point lo = domain.bbox_lo();
        const Point hi = domain.bbox_hi();
        for (int i = 0; i < n; ++i) {
            lo_steps[static_cast<size_t>(i)] = (lo[i] - start[i]) / eps + 1e-9;
            hi_steps[static_cast<size_t>(i)] = (hi[i] - start[i]) / eps - 1e-9;
        }
    }

    DiscreteWalkOutcome out;
    out.final = start;
    std::array<long, kMaxDim> steps{};
    while (out.rounds < round_cap) {
        int axis = 0;
        if (n > 1) {
            axis = static_cast<int>(rng.uniform() * n);
            axis = std::min(axis, n - 1);
        }
        const auto a = static_cast<size_t>(axis);
        steps[a] += rng.uniform() < 0.5 ? -1 : 1;
        const double m = static_cast<double>(steps[a]);
        out.final[axis] = start[axis] + m * eps;
        ++out.rounds;
        if (rectangular) {
            if (m <= lo_steps[a] || m >= hi_steps[a]) {
                // snap onto the wall when the grid is aligned with it
                const double wall = m <= lo_steps[a] ? domain.bbox_lo()[axis]
                                                     : domain.bbox_hi()[axis];
                if (std::abs(out.final[axis] - wall) < 1e-9 * (1 + std::abs(wall)))
                    out.final[axis] = wall;
                out.exited = true;
                break;
            }
        } else if (!domain.inside(out.final)) {
            out.exited = true;
            break;
        }
    }
    return out;
}

DiscreteWalkStats estimate_discrete_walk(const Point& start, const Domain& domain, double eps,
                                         const PayoffFn& F, long trials, uint64_t master_seed,
                                         long round_cap, int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_discrete_walk: trials must be >= 1");
    if (round_cap < 1) round_cap = default_round_cap(domain, eps);
    std::vector<double> payoffs(static_cast<size_t>(trials));
    std::vector<double> rounds(static_cast<size_t>(trials));
    std::vector<uint8_t> capped(static_cast<size_t>(trials), 0);
    parallel_for(trials, threads, [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) {
            Rng rng = Rng::child(master_seed, static_cast<uint64_t>(i));
            const auto o = discrete_axis_walk(start, domain, eps, rng, round_cap);
            payoffs[static_cast<size_t>(i)] =
                o.exited ? F(o.final) : F(domain.project_to_boundary(o.final));
            rounds[static_cast<size_t>(i)] = static_cast<double>(o.rounds);
            capped[static_cast<size_t>(i)] = o.exited ? 0 : 1;
        }
    });
    DiscreteWalkStats stats;
    stats.payoff = aggregate(payoffs, capped, master_seed);
    const auto n = static_cast<int64_t>(trials);
    stats.mean_rounds = pairwise_sum(rounds.data(), n) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> dev(rounds.size());
        for (size_t i = 0; i < rounds.size(); ++i) {
            const double d = rounds[i] - stats.mean_rounds;
            dev[i] = d * d;
        }
        const double var = pairwise_sum(dev.data(), n) / static_cast<double>(n - 1);
        stats.rounds_std_error = std::sqrt(var / static_cast<double>(n));
    }
    return stats;
}

}  // namespace towlab
