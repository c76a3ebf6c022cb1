// Integer payoff distributions for the ruin model.
//
// A game pays an integer amount k per round with probability p_k. The largest
// possible loss is nu (so p_{-nu} > 0 and p_k = 0 for k < -nu). Analytic
// families with infinite upward support are realized as finite tables by
// truncating the upper tail below a caller-chosen tolerance; the dropped mass
// is tracked so downstream consumers can account for it.
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ruincalc {

inline constexpr double kDefaultTailTol = 1e-14;
inline constexpr double kMaxTailTol = 1e-6;
inline constexpr std::size_t kMaxSeriesTerms = 100000;

// Explicit finite table: entries[k] = p_k, keys may be any integers.
struct TableSpec {
    std::map<int, double> entries;
};

// Lose nu per round, win a Poisson(nu + epsilon) prize; net payoff X - nu.
// Mean epsilon, favorable iff epsilon > 0.
struct PoissonPrizeSpec {
    int nu = 1;
    double epsilon = 0.01;
};

// Two outcomes: lose nu with probability p_loss, win mu otherwise.
struct TwoPointSpec {
    int nu = 1;
    int mu = 1;
    double p_loss = 0.5;
};

using FamilySpec = std::variant<TableSpec, PoissonPrizeSpec, TwoPointSpec>;

class PayoffDistribution {
public:
    // Realizes a family as a validated table. For analytic families the upper
    // tail is cut once the remaining mass is <= tail_tol (throws
    // TailNotAchievable if that takes more than kMaxSeriesTerms terms).
    // Throws NegativeProbability / MassNotOne / ZeroFloorMass on bad tables
    // and InvalidArgument for tail_tol outside [0, kMaxTailTol].
    static PayoffDistribution build(const FamilySpec& spec,
                                    double tail_tol = kDefaultTailTol);

    int max_loss() const { return nu_; }
    // Largest k with p_k > 0 in the realized table.
    int max_gain() const { return static_cast<int>(coeffs_.size()) - 1 - nu_; }
    // Upper end of the support when it is exact, nullopt for truncated tails.
    std::optional<int> finite_upper_support() const;
    bool truncated() const { return truncated_; }
    double tail_mass_bound() const { return tail_mass_bound_; }

    double mean() const { return mean_; }
    bool favorable() const { return mean_ > 0.0; }
    double variance() const;

    // p_k; zero outside the realized support.
    double prob(int k) const;

    // Coefficients of h(z) = z^nu p(z): element i is p_{i - nu}. Element 0 is
    // positive and the last element is nonzero.
    std::span<const double> shifted_coeffs() const { return coeffs_; }

    // shifted_coeffs padded with zeros up to the given degree (inclusive).
    // Throws DegreeTooSmall if degree would drop support.
    std::vector<double> h_coefficients(int degree) const;

    // p(z) = sum p_k z^k, a Laurent polynomial. Throws ZeroArgument at z = 0.
    std::complex<double> evaluate_p(std::complex<double> z) const;
    double evaluate_p(double x) const;
    double evaluate_p_derivative(double x) const;

    const FamilySpec& family() const { return family_; }

private:
    PayoffDistribution() = default;

    FamilySpec family_;
    int nu_ = 0;
    std::vector<double> coeffs_; // h coefficients, index i holds p_{i - nu}
    double mean_ = 0.0;
    double tail_mass_bound_ = 0.0;
    bool truncated_ = false;
};

// Reads a JSON family spec: {"type": "table"|"poisson_prize"|"two_point", ...}.
// See README for the exact schema. Throws SpecParseError with position info.
FamilySpec parse_spec_file(const std::string& path);
FamilySpec parse_spec_json(const std::string& text);

// One-line description, e.g. "poisson_prize(nu=3, epsilon=0.01)".
std::string describe(const FamilySpec& spec);

} // namespace ruincalc
