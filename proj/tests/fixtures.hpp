// Reference games shared across test files, with expected values computed
// independently of the library (closed forms, high-precision root solves,
// and a separate wealth-evolution implementation).
#pragma once

#include <cmath>
#include <initializer_list>
#include <map>
#include <utility>

#include "ruincalc/payoff.hpp"

namespace fixtures {

inline ruincalc::PayoffDistribution table(
    std::initializer_list<std::pair<const int, double>> entries) {
    ruincalc::TableSpec s;
    s.entries = std::map<int, double>(entries);
    return ruincalc::PayoffDistribution::build(s);
}

// Simple walk: lose 1 w.p. 0.4, win 1 w.p. 0.6. Every quantity is closed
// form: z* = 2/3, P_ruin(M) = (2/3)^M, and against a barrier W
// P_ruin = (r^M - r^(W+1)) / (1 - r^(W+1)) with r = 2/3.
inline ruincalc::PayoffDistribution simple_walk() {
    return table({{-1, 0.4}, {1, 0.6}});
}

// One-root game with a gap win: lose 1 w.p. 0.3, win 2 w.p. 0.7.
// Its single in-disk root (solving 0.7 z^3 + 0.3 = z) is
//   eta = 0.3237544710479139921...   so P_ruin(M) = eta^M.
inline ruincalc::PayoffDistribution skip_walk() {
    return table({{-1, 0.3}, {2, 0.7}});
}
inline constexpr double kSkipWalkEta = 0.3237544710479139921;

// Two-root game with closed-form roots: lose 2 w.p. 0.3, win 1 w.p. 0.7.
// h(z) - z^2 = 0.7 z^3 - z^2 + 0.3 factors as (z - 1)(0.7 z^2 - 0.3 z - 0.3),
// so the in-disk roots are (0.3 +- sqrt(0.93)) / 1.4.
inline ruincalc::PayoffDistribution deep_loss() {
    return table({{-2, 0.3}, {1, 0.7}});
}
inline double deep_loss_root_hi() { return (0.3 + std::sqrt(0.93)) / 1.4; }
inline double deep_loss_root_lo() { return (0.3 - std::sqrt(0.93)) / 1.4; }
// Wealth evolution of deep_loss from M = 4, run to convergence with a
// certified enclosure below 1e-12 (independent implementation):
inline constexpr double kDeepLossRuin4 = 0.708454810494112;
inline constexpr double kDeepLossAbsorbed4[2] = {0.262390670553446,
                                                 0.446064139940666};

// The benchmark game: lose 3, win back a Poisson(3.01) prize; mean 0.01.
inline ruincalc::PayoffDistribution prize_game() {
    return ruincalc::PayoffDistribution::build(
        ruincalc::PoissonPrizeSpec{3, 0.01});
}
// Its in-disk roots to 17 digits (50-digit arithmetic, then rounded):
inline constexpr double kPrizeZStar = 0.99336284815943632;
inline constexpr double kPrizePairRe = -0.20269977400754230;
inline constexpr double kPrizePairIm = 0.22004924937525177;
// P_ruin at selected wealths, same high-precision computation, confirmed by
// independent wealth evolution to ~1e-8:
inline constexpr std::pair<int, double> kPrizeRuin[] = {
    {3, 0.990078065838357},  {10, 0.945647560560665}, {50, 0.72451229421014},
    {100, 0.519327625417067}, {200, 0.26682883324777}, {500, 0.0361915141221399},
};
// Final-fortune split at M = 3 (probability of ending at 0, 1, 2):
inline constexpr double kPrizeFortune3[3] = {0.0889147865685, 0.313199979125,
                                             0.587963300144};

// A table engineered so two in-disk roots nearly coincide (pair distance
// ~1e-8, far below the default cluster tolerance of 1e-6). Probabilities
// are exact double literals and sum to 1.
inline ruincalc::PayoffDistribution near_double() {
    return table({{-3, 0.023091561756318345},
                  {-2, 0.12793448388395851},
                  {-1, 1.8661578544771921e-05},
                  {0, 0.44296590699440419},
                  {1, 0.11082056283566676},
                  {2, 0.11937472310361794},
                  {3, 0.17579409984748934}});
}
inline constexpr double kNearDoubleRootReal = 0.6507592496464008;
inline constexpr double kNearDoublePairRe = -0.26901323273147404;
// Wealth-evolution results for near_double (enclosure below 1e-11):
struct NearDoubleCase {
    int wealth;
    double ruin;
    double absorbed[3];
};
inline constexpr NearDoubleCase kNearDoubleCases[] = {
    {3, 0.43758458682246, {0.047094223069, 0.277757579570, 0.112732784183}},
    {6, 0.14830581245701, {0.005234601945, 0.044552504055, 0.098518706457}},
    {12, 0.01098329478024, {0.000492347594, 0.003665736462, 0.006825210724}},
};

} // namespace fixtures
