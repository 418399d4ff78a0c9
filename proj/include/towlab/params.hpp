#pragma once

#include <limits>
#include <utility>

namespace towlab {

// alpha = (p-2)/(p+n), beta = (n+2)/(p+n); (1, 0) at p = infinity.
// Rejects p <= 1 and n < 1.
std::pair<double, double> probabilities(double p, int n);

// Game parameters. The game/DPP constructor needs beta > 0 (finite p) and
// alpha >= 0 (p >= 2); the mean-value constructor admits 1 < p <= infinity,
// including negative alpha for p < 2.
struct GameParams {
    int n = 1;
    double p = 2.0;
    double epsilon = 0.1;
    double alpha = 0.0;
    double beta = 1.0;

    static GameParams for_game(double p, int n, double epsilon);
    static GameParams for_mean_value(double p, int n, double epsilon);

    bool infinite_p() const { return p == std::numeric_limits<double>::infinity(); }
};

}  // namespace towlab
