// Exact wealth-distribution evolution.
//
// One step scatters each live state s >= nu across s + k with weight p_k;
// states below nu absorb. dp_ruin tracks, besides the absorbed mass (a lower
// bound on P_ruin), a certified bound on how much ruin the not-yet-decided
// mass can still produce: a unit of mass at state s is ruined with
// probability at most z*^(s - nu + 1), because z*^{S_t} is a supermartingale
// whenever p(z*) <= 1. The same bound prices mass that spills over the cap
// or is pruned below the noise floor, so [lower, lower + bound_gap] always
// encloses the true value. For mean <= 0 there is no z* < 1 and the weights
// degrade to 1 (the gap is then just the undecided mass).
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ruincalc/errors.hpp"
#include "ruincalc/oracles.hpp"
#include "ruincalc/roots.hpp"

namespace ruincalc {

namespace {

constexpr double kPruneTol = 1e-18;
constexpr int kGapCheckStride = 16;
constexpr int kMaxAutoCap = 8000000;

long double sum_range(std::span<const double> v, std::size_t lo,
                      std::size_t hi) {
    long double s = 0.0L;
    for (std::size_t i = lo; i < hi; ++i)
        s += v[i];
    return s;
}

int auto_k_cap(const PayoffDistribution& d, int wealth, const DpOptions& opt,
               double z_c) {
    long long base;
    if (z_c < 1.0) {
        // States above this line hold less ruin potential than cap_neglect.
        const long long comfort =
            d.max_loss() - 1 +
            static_cast<long long>(
                std::ceil(std::log(opt.cap_neglect) / std::log(z_c)));
        base = std::max<long long>(wealth, comfort);
    } else {
        const double sigma = std::sqrt(std::max(0.0, d.variance()));
        base = static_cast<long long>(wealth) + 50LL * d.max_loss() +
               static_cast<long long>(
                   std::ceil(20.0 * sigma *
                             std::sqrt(static_cast<double>(opt.t_max))));
    }
    base += std::max(d.max_gain(), 0) + 1;
    return static_cast<int>(
        std::clamp<long long>(base, wealth + 1, kMaxAutoCap));
}

} // namespace

WealthDistribution WealthDistribution::point_mass(int wealth, int max_loss,
                                                  int k_cap) {
    if (max_loss < 1)
        throw InvalidArgument("point_mass: max_loss must be >= 1");
    if (wealth < 0 || wealth > k_cap)
        throw InvalidArgument("point_mass: wealth must lie in [0, k_cap]");
    if (k_cap < max_loss)
        throw InvalidArgument("point_mass: k_cap below the absorbing band");
    WealthDistribution w;
    w.max_loss = max_loss;
    w.mass.assign(static_cast<std::size_t>(k_cap) + 1, 0.0);
    w.mass[static_cast<std::size_t>(wealth)] = 1.0;
    return w;
}

double WealthDistribution::absorbed_total() const {
    return static_cast<double>(
        sum_range(mass, 0, static_cast<std::size_t>(max_loss)));
}

double WealthDistribution::live_total() const {
    return static_cast<double>(
        sum_range(mass, static_cast<std::size_t>(max_loss), mass.size()));
}

double WealthDistribution::total() const {
    return static_cast<double>(sum_range(mass, 0, mass.size()) +
                               static_cast<long double>(spill));
}

std::span<const double> WealthDistribution::absorbed() const {
    return std::span<const double>(mass.data(),
                                   static_cast<std::size_t>(max_loss));
}

WealthDistribution dp_step(const WealthDistribution& w,
                           const PayoffDistribution& d) {
    if (w.max_loss != d.max_loss())
        throw InvalidArgument("dp_step: distribution and state disagree on "
                              "the absorbing band");
    const int nu = w.max_loss;
    const int k_cap = w.k_cap();
    const auto c = d.shifted_coeffs();

    WealthDistribution out;
    out.t = w.t + 1;
    out.max_loss = nu;
    out.spill = w.spill;
    out.mass.assign(w.mass.size(), 0.0);
    for (int s = 0; s < nu; ++s)
        out.mass[static_cast<std::size_t>(s)] =
            w.mass[static_cast<std::size_t>(s)];

    for (int s = nu; s <= k_cap; ++s) {
        const double m = w.mass[static_cast<std::size_t>(s)];
        if (m == 0.0)
            continue;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0.0)
                continue;
            const int dest = s + static_cast<int>(i) - nu;
            if (dest > k_cap)
                out.spill += m * c[i];
            else
                out.mass[static_cast<std::size_t>(dest)] += m * c[i];
        }
    }
    return out;
}

DpResult dp_evolve(const PayoffDistribution& d, int initial_wealth,
                   const DpOptions& options, WealthDistribution& final_state) {
    if (initial_wealth < 0)
        throw InvalidArgument("dp_evolve: wealth must be >= 0");
    if (!(options.eps > 0.0))
        throw InvalidArgument("dp_evolve: eps must be positive");
    const int nu = d.max_loss();

    DpResult res;
    if (initial_wealth < nu) {
        res.lower = 1.0;
        res.absorbed.assign(static_cast<std::size_t>(nu), 0.0);
        res.absorbed[static_cast<std::size_t>(initial_wealth)] = 1.0;
        res.k_cap = std::max(nu, initial_wealth);
        final_state =
            WealthDistribution::point_mass(initial_wealth, nu, res.k_cap);
        return res;
    }

    const double z_c = d.favorable() ? find_z_star(d) : 1.0;
    const int k_cap =
        options.k_cap > 0 ? options.k_cap : auto_k_cap(d, initial_wealth, options, z_c);
    if (k_cap < initial_wealth)
        throw InvalidArgument("dp_evolve: k_cap below initial wealth");
    res.k_cap = k_cap;

    const auto c = d.shifted_coeffs();
    const int D = static_cast<int>(c.size()) - 1;
    const int up = D - nu; // top payoff offset, possibly negative
    std::vector<double> rev(c.rbegin(), c.rend());

    // Supermartingale weight per state, w[s] = z_c^max(0, s - nu + 1).
    const int w_len = k_cap + std::max(up, 0) + 2;
    std::vector<double> weight(static_cast<std::size_t>(w_len));
    for (int s = 0; s < w_len; ++s)
        weight[static_cast<std::size_t>(s)] =
            s < nu ? 1.0 : std::pow(z_c, static_cast<double>(s - nu + 1));

    // Live mass with D slots of zero padding on each side so the convolution
    // below never branches on bounds.
    const int pad = std::max(D, 1);
    std::vector<double> live_buf(static_cast<std::size_t>(k_cap + 1 + 2 * pad),
                                 0.0);
    std::vector<double> out_buf(static_cast<std::size_t>(k_cap + 1 + 2 * pad),
                                0.0);
    double* live = live_buf.data() + pad;
    double* out = out_buf.data() + pad;
    live[initial_wealth] = 1.0;
    int lo = initial_wealth, hi = initial_wealth;

    std::vector<double> absorbed(static_cast<std::size_t>(nu), 0.0);
    double spill = 0.0;
    double deferred_bound = 0.0; // certified ruin potential of spill + pruned
    int quiet = 0;
    bool absorption_started = false;
    const double quiet_level = options.eps * options.increment_factor;

    auto gap_now = [&] {
        long double g = deferred_bound;
        for (int s = lo; s <= hi; ++s)
            g += static_cast<long double>(live[s]) *
                 weight[static_cast<std::size_t>(s)];
        return static_cast<double>(g);
    };

    std::int64_t t = 0;
    bool stop = false;
    res.converged = false;
    while (t < options.t_max && !stop) {
        const int out_lo = std::max(0, lo - nu);
        const int out_hi = hi + up; // may undershoot out_lo when up < -nu
        for (int s = out_lo; s <= out_hi; ++s) {
            // out[s] = sum_k live[s - k] p_k, written as a forward dot
            // product against the reversed coefficients.
            const double* src = live + (s + nu - D);
            double acc = 0.0;
            for (int j = 0; j <= D; ++j)
                acc += src[j] * rev[static_cast<std::size_t>(j)];
            out[s] = acc;
        }
        ++t;

        double inc = 0.0;
        for (int s = out_lo; s <= std::min(out_hi, nu - 1); ++s) {
            absorbed[static_cast<std::size_t>(s)] += out[s];
            inc += out[s];
            out[s] = 0.0;
        }
        for (int s = k_cap + 1; s <= out_hi; ++s) {
            spill += out[s];
            deferred_bound += out[s] * weight[static_cast<std::size_t>(s)];
            out[s] = 0.0;
        }

        int nlo = std::max(nu, out_lo);
        int nhi = std::min(k_cap, out_hi);
        // Fresh window sits in out; clear the previous live window and swap.
        for (int s = lo; s <= hi; ++s)
            live[s] = 0.0;
        std::swap(live, out);
        while (nlo <= nhi && live[nlo] < kPruneTol) {
            deferred_bound += live[nlo] * weight[static_cast<std::size_t>(nlo)];
            live[nlo] = 0.0;
            ++nlo;
        }
        while (nhi >= nlo && live[nhi] < kPruneTol) {
            deferred_bound += live[nhi] * weight[static_cast<std::size_t>(nhi)];
            live[nhi] = 0.0;
            --nhi;
        }
        if (nlo > nhi) { // nothing live remains
            lo = nu;
            hi = nu - 1;
            res.converged = true;
            stop = true;
        } else {
            lo = nlo;
            hi = nhi;
        }

        // The increment rule only makes sense once absorption has begun;
        // before that (deep starts need (M - nu) / nu steps just to reach
        // the band) a run of zero increments says nothing.
        absorption_started = absorption_started || inc > 0.0;
        quiet = (absorption_started && inc < quiet_level) ? quiet + 1 : 0;
        if (!stop && quiet >= options.quiet_steps) {
            res.converged = true;
            stop = true;
        }
        if (!stop && (t % kGapCheckStride == 0) &&
            gap_now() <= 0.5 * options.eps) {
            res.converged = true;
            stop = true;
        }
    }

    res.bound_gap = gap_now();
    if (!res.converged)
        res.converged = res.bound_gap <= 0.5 * options.eps;
    res.steps = t;
    res.spill = spill;
    res.absorbed = absorbed;
    res.lower = static_cast<double>(
        std::accumulate(absorbed.begin(), absorbed.end(), 0.0L));

    final_state = WealthDistribution();
    final_state.t = t;
    final_state.max_loss = nu;
    final_state.spill = spill;
    final_state.mass.assign(static_cast<std::size_t>(k_cap) + 1, 0.0);
    for (int s = 0; s < nu; ++s)
        final_state.mass[static_cast<std::size_t>(s)] =
            absorbed[static_cast<std::size_t>(s)];
    for (int s = lo; s <= hi; ++s)
        final_state.mass[static_cast<std::size_t>(s)] = live[s];
    return res;
}

DpResult dp_ruin(const PayoffDistribution& d, int initial_wealth,
                 const DpOptions& options) {
    WealthDistribution ignored;
    return dp_evolve(d, initial_wealth, options, ignored);
}

} // namespace ruincalc
