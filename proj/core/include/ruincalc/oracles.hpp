// Independent checks of the root-formula results.
//
// Three oracles, sharing no code with the formula path:
//   dp        exact wealth-distribution evolution with certified error bounds
//   mc        Monte Carlo path simulation with reproducible per-path streams
//   finite_w  ruin against a rich-but-finite adversary (banded linear system),
//             increasing in W toward the infinite-adversary probability
//
// The certified dp/mc bounds rest on one fact: if p(z_c) <= 1 for some
// z_c in (0,1], then z_c^{S_t} is a supermartingale, so a player at wealth s
// is ruined with probability at most z_c^{s - nu + 1}. With z_c = z* this
// bounds the ruin potential of live mass (dp) and justifies counting paths
// that reach a high ceiling as safe (mc).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ruincalc/payoff.hpp"

namespace ruincalc {

// Distribution of the frozen-or-playing wealth process at a fixed time.
// States 0..max_loss-1 are absorbing (ruined with that final fortune);
// states >= max_loss are still playing. Mass pushed above k_cap is pooled
// in spill and stops evolving.
struct WealthDistribution {
    std::int64_t t = 0;
    int max_loss = 0;
    std::vector<double> mass; // index = wealth, size k_cap + 1
    double spill = 0.0;

    static WealthDistribution point_mass(int wealth, int max_loss, int k_cap);

    int k_cap() const { return static_cast<int>(mass.size()) - 1; }
    double absorbed_total() const;
    double live_total() const;
    double total() const; // absorbed + live + spill
    std::span<const double> absorbed() const; // first max_loss entries
};

// One round of play. Total mass is conserved up to the payoff table's
// dropped tail (<= tail_mass_bound per unit of live mass).
WealthDistribution dp_step(const WealthDistribution& w,
                           const PayoffDistribution& d);

struct DpOptions {
    double eps = 1e-10;          // target width of the ruin enclosure
    std::int64_t t_max = 1000000;
    int k_cap = 0;               // 0 = size automatically
    double cap_neglect = 1e-15;  // ruin potential allowed above an auto cap
    // Stop when the absorbed increment stays below eps * increment_factor
    // this many consecutive steps.
    double increment_factor = 1e-2;
    int quiet_steps = 50;
};

struct DpResult {
    double lower = 0.0;      // absorbed mass so far: a rigorous lower bound
    double bound_gap = 0.0;  // certified ruin potential of live + spilled mass
    std::vector<double> absorbed; // per-fortune split of lower (size nu)
    std::int64_t steps = 0;
    int k_cap = 0;
    double spill = 0.0;
    bool converged = true;   // false iff t_max hit before bound_gap <= eps/2
                             // and before the increment rule fired
    double upper() const { return lower + bound_gap; }
};

// Evolves point mass at initial_wealth until the enclosure [lower,
// lower + bound_gap] is tighter than eps, the absorbed increment goes
// quiet, or t_max runs out.
DpResult dp_ruin(const PayoffDistribution& d, int initial_wealth,
                 const DpOptions& options = {});

// Same evolution, also returning the final state (for inspecting the
// absorbed band or the live profile).
DpResult dp_evolve(const PayoffDistribution& d, int initial_wealth,
                   const DpOptions& options, WealthDistribution& final_state);

struct McOptions {
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 1;
    std::int64_t t_cap = 10000000;
    // A path reaching wealth >= ceiling counts as safe; the ceiling is sized
    // so its true ruin probability is < ruin_neglect.
    double ruin_neglect = 1e-9;
    int threads = 1;
};

struct McResult {
    double estimate = 0.0;
    double ci_halfwidth = 0.0;      // 95% Agresti-Coull halfwidth; positive
                                    // even at 0 or n ruined paths
    std::int64_t n_paths = 0;
    std::int64_t ruined = 0;
    std::int64_t reached_ceiling = 0;
    double censored_fraction = 0.0; // paths undecided at t_cap (counted safe)
    double ceiling_bias_bound = 0.0;
    std::int64_t ceiling = 0;       // wealth treated as safe; <0 means none
};

// Result is identical for any thread count: path i always uses the stream
// derived from (seed, i).
McResult mc_ruin(const PayoffDistribution& d, int initial_wealth,
                 const McOptions& options = {});

// Ruin probability when the adversary's capital is finite: play stops on
// reaching wealth > W (a win) or < nu (ruin). Solves the banded harmonic
// system u(m) = sum_k p_k u(m+k) for nu <= m <= W with u = 1 below nu and
// u = 0 above W. Increases to the infinite-adversary P_ruin as W grows.
double finite_w_ruin(const PayoffDistribution& d, int initial_wealth, int W);

struct CrossCheckOptions {
    DpOptions dp;
    McOptions mc;
    std::vector<int> w_values; // empty = pick from the drift, see cross_check
    double dp_slack = 1e-6;    // allowance on top of dp's certified gap
    double fw_tol = 1e-6;      // |formula - finite_w at largest W|
    double mc_sigmas = 3.0;    // CI multiplier: flag only > 3 sigma outliers
};

struct OracleReport {
    double formula = 0.0;
    DpResult dp;
    bool dp_ok = false;
    McResult mc;
    bool mc_ok = false;
    std::vector<std::pair<int, double>> finite_w; // (W, value), W increasing
    double fw_extrapolated = 0.0; // Aitken limit of the W-sequence
    bool fw_monotone = false;
    bool fw_ok = false;
    bool all_ok() const { return dp_ok && mc_ok && fw_ok; }
};

// Runs all three oracles against a formula value and judges each:
//   dp  ok iff formula lies in [lower - slack, lower + gap + slack]
//   mc  ok iff |formula - estimate| <= sigmas * se + censoring + ceiling bias
//   fw  ok iff the W-sequence is nondecreasing and ends within fw_tol
OracleReport cross_check(const PayoffDistribution& d, int initial_wealth,
                         double formula_value,
                         const CrossCheckOptions& options = {});

} // namespace ruincalc
