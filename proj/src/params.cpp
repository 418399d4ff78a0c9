#include "towlab/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace towlab {

std::pair<double, double> probabilities(double p, int n) {
    if (n < 1) throw std::invalid_argument("probabilities: n must be >= 1");
    if (std::isnan(p) || p <= 1.0)
        throw std::invalid_argument("probabilities: p must satisfy p > 1 (or p = inf)");
    if (p == std::numeric_limits<double>::infinity()) return {1.0, 0.0};
    const double alpha = (p - 2.0) / (p + n);
    return {alpha, 1.0 - alpha};  // beta as 1 - alpha keeps the sum exact
}

static GameParams make(double p, int n, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("GameParams: epsilon must be > 0");
    auto [a, b] = probabilities(p, n);
    GameParams g;
    g.n = n;
    g.p = p;
    g.epsilon = epsilon;
    g.alpha = a;
    g.beta = b;
    return g;
}

GameParams GameParams::for_game(double p, int n, double epsilon) {
    if (p == std::numeric_limits<double>::infinity())
        throw std::invalid_argument(
            "GameParams::for_game: p = inf has beta = 0, the game need not terminate");
    if (p < 2.0)
        throw std::invalid_argument("GameParams::for_game: p must be in [2, inf)");
    return make(p, n, epsilon);
}

GameParams GameParams::for_mean_value(double p, int n, double epsilon) {
    return make(p, n, epsilon);
}

}  // namespace towlab
