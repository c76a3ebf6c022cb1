// Exact ruin probabilities from the in-disk roots.
//
// For a favorable game with maximal loss nu, initial wealth M >= nu and
// in-disk roots eta_1..eta_nu:
//
//   P_ruin(M) = sum_{n=1}^{nu} Phi_{n, M-n+1}(eta_1..eta_n)
//               * prod_{j=1}^{n-1} (1 - eta_j)
//
// where Phi_{n,r} is the complete homogeneous symmetric polynomial of degree
// r in n variables (Newton form; valid for repeated roots). With distinct
// roots this collapses to the Lagrange form
//
//   P_ruin(M) = sum_j eta_j^M prod_{i != j} (1 - eta_i) / (eta_j - eta_i).
//
// The same data gives the ruin-time fortune split: Q(z) = sum_n
// Phi_{n, M-n+1} prod_{j<n} (z - eta_j) has degree nu-1, its coefficient of
// z^k is the probability of being ruined with final fortune k, and
// Q(1) = P_ruin(M).
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ruincalc/payoff.hpp"
#include "ruincalc/roots.hpp"

namespace ruincalc {

enum class RuinMethod {
    lagrange, // distinct-root product form
    newton,   // symmetric-polynomial form, safe for clustered roots
    trivial,  // no computation needed: M < nu, or mean <= 0
};

const char* to_string(RuinMethod m);

struct RuinResult {
    int initial_wealth = 0;
    double p_ruin = 0.0;
    // Element k is the probability of ending ruined with fortune k,
    // for k = 0..nu-1. Sums to p_ruin. Empty in the mean <= 0 trivial
    // branch, where the split is not defined by the root formula.
    std::vector<double> final_fortune;
    RuinMethod method = RuinMethod::trivial;
    double max_root_abs = 0.0;  // |eta_1|, the decay rate of P_ruin in M
    double imag_residual = 0.0; // largest imaginary part discarded
    // |newton - lagrange|, present when both forms were evaluated.
    std::optional<double> cross_form_gap;
};

struct RuinOptions {
    double tail_tol = kDefaultTailTol;
    RootOptions roots;
    bool force_newton = false;      // use the Newton form even for distinct roots
    bool cross_check_forms = false; // evaluate both forms, record the gap
};

// Complete homogeneous symmetric polynomial of degree r in xs (Phi in the
// formula above). Phi_{n,0} = 1. Throws NumericOverflow if intermediates
// leave the safe range (cannot happen for |x| < 1).
std::complex<double> complete_symmetric(std::span<const std::complex<double>> xs,
                                        int r);

// The two forms, given precomputed roots. initial_wealth must be >= the nu
// implied by roots.count(). The Lagrange form throws RootsNotDistinct when
// any pair is within cluster distance. Either throws ImaginaryResidue if the
// conjugate symmetry of the root set fails to cancel imaginary parts.
RuinResult ruin_probability_newton(const DiskRoots& roots, int initial_wealth);
RuinResult ruin_probability_lagrange(const DiskRoots& roots, int initial_wealth);

// Full dispatch: trivial branches (M < nu, mean <= 0), root computation,
// then Lagrange unless roots are clustered or force_newton is set.
RuinResult ruin_probability(const PayoffDistribution& d, int initial_wealth,
                            const RuinOptions& options = {});

// Same, reusing roots already computed for d (batch evaluation over many M).
RuinResult ruin_probability(const PayoffDistribution& d, const DiskRoots& roots,
                            int initial_wealth, const RuinOptions& options = {});

// Just the fortune split (the q_k coefficients of Q).
std::vector<double> final_fortune_distribution(const PayoffDistribution& d,
                                               int initial_wealth,
                                               const RuinOptions& options = {});

} // namespace ruincalc
