#include "ruincalc/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ruincalc/errors.hpp"
#include "polyval.hpp"

namespace ruincalc {

namespace {

// Realized table as (offset -> probability), plus the mass dropped above the
// truncation point. Exact families report a zero bound.
struct Realized {
    std::map<int, double> entries;
    double tail_bound = 0.0;
    bool truncated = false;
};

Realized realize(const TableSpec& s, double) {
    return {s.entries, 0.0, false};
}

Realized realize(const TwoPointSpec& s, double) {
    if (s.nu < 1)
        throw InvalidArgument("two_point: nu must be >= 1");
    if (s.mu < 0)
        throw InvalidArgument("two_point: mu must be >= 0");
    if (s.p_loss < 0.0 || s.p_loss > 1.0)
        throw InvalidArgument("two_point: p_loss must lie in [0, 1]");
    Realized r;
    r.entries[-s.nu] = s.p_loss;
    r.entries[s.mu] += 1.0 - s.p_loss; // += so mu == -nu degenerates cleanly
    return r;
}

Realized realize(const PoissonPrizeSpec& s, double tail_tol) {
    if (s.nu < 1)
        throw InvalidArgument("poisson_prize: nu must be >= 1");
    const double lambda = static_cast<double>(s.nu) + s.epsilon;
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("poisson_prize: nu + epsilon must be positive");

    // Prize is Poisson(lambda); net payoff is prize - nu. Terms in log space,
    // running total in extended precision so the tail estimate stays honest
    // near the 1e-14 default.
    Realized r;
    r.truncated = true;
    const double log_lambda = std::log(lambda);
    long double cum = 0.0L;
    for (std::size_t k = 0; k < kMaxSeriesTerms; ++k) {
        const double kk = static_cast<double>(k);
        const double p = std::exp(kk * log_lambda - lambda - std::lgamma(kk + 1.0));
        cum += p;
        r.entries[static_cast<int>(k) - s.nu] = p;
        const double tail = static_cast<double>(std::max(0.0L, 1.0L - cum));
        if (tail <= tail_tol) {
            r.tail_bound = tail;
            return r;
        }
    }
    std::ostringstream msg;
    msg << "poisson_prize(nu=" << s.nu << ", epsilon=" << s.epsilon
        << "): tail below " << tail_tol << " needs more than " << kMaxSeriesTerms
        << " terms";
    throw TailNotAchievable(msg.str());
}

} // namespace

PayoffDistribution PayoffDistribution::build(const FamilySpec& spec,
                                             double tail_tol) {
    if (!(tail_tol >= 0.0 && tail_tol <= kMaxTailTol)) {
        std::ostringstream msg;
        msg << "tail_tol must lie in [0, " << kMaxTailTol << "], got " << tail_tol;
        throw InvalidArgument(msg.str());
    }

    Realized r = std::visit(
        [&](const auto& s) { return realize(s, tail_tol); }, spec);

    long double sum = 0.0L;
    for (const auto& [k, p] : r.entries) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            std::ostringstream msg;
            msg << "p_" << k << " = " << p << " is not a probability";
            throw NegativeProbability(msg.str());
        }
        sum += p;
    }
    if (!r.truncated) {
        // Exact families must carry full mass; truncated ones sum to
        // 1 - tail_bound by construction.
        const double err = static_cast<double>(std::abs(sum - 1.0L));
        if (err > 1e-12) {
            std::ostringstream msg;
            msg << "probabilities sum to " << static_cast<double>(sum)
                << ", off from 1 by " << err;
            throw MassNotOne(msg.str());
        }
    }

    std::erase_if(r.entries, [](const auto& kv) { return kv.second == 0.0; });
    if (r.entries.empty() || r.entries.begin()->first >= 0)
        throw ZeroFloorMass("no mass on any losing outcome (need some p_k > 0 "
                            "with k < 0)");

    PayoffDistribution d;
    d.family_ = spec;
    d.nu_ = -r.entries.begin()->first;
    d.truncated_ = r.truncated;
    d.tail_mass_bound_ = r.tail_bound;
    d.coeffs_.assign(static_cast<std::size_t>(r.entries.rbegin()->first + d.nu_) + 1,
                     0.0);
    long double mean = 0.0L;
    for (const auto& [k, p] : r.entries) {
        d.coeffs_[static_cast<std::size_t>(k + d.nu_)] = p;
        mean += static_cast<long double>(k) * p;
    }
    d.mean_ = static_cast<double>(mean);
    return d;
}

std::optional<int> PayoffDistribution::finite_upper_support() const {
    if (truncated_)
        return std::nullopt;
    return max_gain();
}

double PayoffDistribution::variance() const {
    long double m2 = 0.0L;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const long double k = static_cast<long double>(static_cast<int>(i) - nu_);
        m2 += k * k * coeffs_[i];
    }
    return static_cast<double>(m2 - static_cast<long double>(mean_) * mean_);
}

double PayoffDistribution::prob(int k) const {
    const long long i = static_cast<long long>(k) + nu_;
    if (i < 0 || i >= static_cast<long long>(coeffs_.size()))
        return 0.0;
    return coeffs_[static_cast<std::size_t>(i)];
}

std::vector<double> PayoffDistribution::h_coefficients(int degree) const {
    const int realized = static_cast<int>(coeffs_.size()) - 1;
    if (degree < realized) {
        std::ostringstream msg;
        msg << "degree " << degree << " drops realized support (need >= "
            << realized << ")";
        throw DegreeTooSmall(msg.str());
    }
    std::vector<double> out(coeffs_);
    out.resize(static_cast<std::size_t>(degree) + 1, 0.0);
    return out;
}

std::complex<double> PayoffDistribution::evaluate_p(std::complex<double> z) const {
    if (z == std::complex<double>(0.0, 0.0))
        throw ZeroArgument("p(z) has a pole at z = 0");
    return detail::horner(coeffs_, z) / detail::pow_int(z, nu_);
}

double PayoffDistribution::evaluate_p(double x) const {
    if (x == 0.0)
        throw ZeroArgument("p(z) has a pole at z = 0");
    return detail::horner(coeffs_, x) / detail::pow_int(x, nu_);
}

double PayoffDistribution::evaluate_p_derivative(double x) const {
    if (x == 0.0)
        throw ZeroArgument("p(z) has a pole at z = 0");
    // p = x^-nu h, so p' = (x h' - nu h) / x^(nu+1).
    double h, dh;
    detail::horner2(coeffs_, x, h, dh);
    return (x * dh - nu_ * h) / detail::pow_int(x, nu_ + 1);
}

std::string describe(const FamilySpec& spec) {
    std::ostringstream out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TableSpec>) {
                out << "table(" << s.entries.size() << " entries";
                if (!s.entries.empty())
                    out << " in " << s.entries.begin()->first << ".."
                        << s.entries.rbegin()->first;
                out << ")";
            } else if constexpr (std::is_same_v<T, PoissonPrizeSpec>) {
                out << "poisson_prize(nu=" << s.nu << ", epsilon=" << s.epsilon
                    << ")";
            } else {
                out << "two_point(nu=" << s.nu << ", mu=" << s.mu
                    << ", p_loss=" << s.p_loss << ")";
            }
        },
        spec);
    return out.str();
}

} // namespace ruincalc
