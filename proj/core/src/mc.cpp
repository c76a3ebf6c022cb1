// Monte Carlo oracle. Each path draws from its own xoshiro256++ stream
// seeded by (seed, path index), so results are bit-identical for any thread
// count or partitioning. Paths that climb to the safe ceiling are counted as
// non-ruined; the supermartingale bound makes their true ruin probability
// < ruin_neglect, which is reported as ceiling_bias_bound.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "ruincalc/errors.hpp"
#include "ruincalc/oracles.hpp"
#include "ruincalc/roots.hpp"

namespace ruincalc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& x) {
    x += kGolden;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct Xoshiro256pp {
    std::uint64_t s[4];

    static Xoshiro256pp for_path(std::uint64_t seed, std::int64_t path) {
        std::uint64_t x =
            seed + kGolden * (static_cast<std::uint64_t>(path) + 1);
        Xoshiro256pp g;
        g.s[0] = splitmix64(x);
        g.s[1] = splitmix64(x);
        g.s[2] = splitmix64(x);
        g.s[3] = splitmix64(x);
        if ((g.s[0] | g.s[1] | g.s[2] | g.s[3]) == 0)
            g.s[0] = 1;
        return g;
    }

    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

// Cumulative table over the realized support, most probable outcome first so
// the expected scan depth is short. The last entry is forced to 1, which
// renormalizes away the truncated tail (bounded by tail_mass_bound).
struct Sampler {
    std::vector<double> cum;
    std::vector<int> offset;

    explicit Sampler(const PayoffDistribution& d) {
        const auto c = d.shifted_coeffs();
        const int nu = d.max_loss();
        std::vector<std::pair<double, int>> items;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] > 0.0)
                items.emplace_back(c[i], static_cast<int>(i) - nu);
        std::sort(items.begin(), items.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        double acc = 0.0;
        for (const auto& [p, k] : items) {
            acc += p;
            cum.push_back(acc);
            offset.push_back(k);
        }
        cum.back() = 1.0;
    }

    int draw(double u) const {
        std::size_t i = 0;
        while (i + 1 < cum.size() && u >= cum[i])
            ++i;
        return offset[i];
    }
};

struct Tally {
    std::int64_t ruined = 0;
    std::int64_t ceiling = 0;
    std::int64_t censored = 0;
};

Tally run_paths(const Sampler& sampler, std::int64_t first, std::int64_t last,
                std::uint64_t seed, int start, int nu, std::int64_t ceiling,
                std::int64_t t_cap) {
    Tally tally;
    for (std::int64_t path = first; path < last; ++path) {
        Xoshiro256pp rng = Xoshiro256pp::for_path(seed, path);
        std::int64_t s = start;
        bool decided = false;
        if (s >= ceiling) { // ceiling at or below the start: trivially safe
            ++tally.ceiling;
            continue;
        }
        for (std::int64_t t = 0; t < t_cap; ++t) {
            s += sampler.draw(rng.uniform());
            if (s < nu) {
                ++tally.ruined;
                decided = true;
                break;
            }
            if (s >= ceiling) {
                ++tally.ceiling;
                decided = true;
                break;
            }
        }
        if (!decided)
            ++tally.censored;
    }
    return tally;
}

} // namespace

McResult mc_ruin(const PayoffDistribution& d, int initial_wealth,
                 const McOptions& options) {
    if (initial_wealth < 0)
        throw InvalidArgument("mc_ruin: wealth must be >= 0");
    if (options.n_paths < 1)
        throw InvalidArgument("mc_ruin: need at least one path");
    if (options.t_cap < 1)
        throw InvalidArgument("mc_ruin: t_cap must be >= 1");
    if (!(options.ruin_neglect > 0.0 && options.ruin_neglect < 1.0))
        throw InvalidArgument("mc_ruin: ruin_neglect must lie in (0,1)");

    const int nu = d.max_loss();
    McResult res;
    res.n_paths = options.n_paths;
    res.ceiling = -1;

    if (initial_wealth < nu) {
        res.estimate = 1.0;
        res.ruined = options.n_paths;
        return res;
    }

    std::int64_t ceiling = std::numeric_limits<std::int64_t>::max();
    if (d.favorable()) {
        const double z = find_z_star(d);
        ceiling = nu - 1 +
                  static_cast<std::int64_t>(std::ceil(
                      std::log(options.ruin_neglect) / std::log(z)));
        ceiling = std::max<std::int64_t>(ceiling, nu);
        res.ceiling = ceiling;
        res.ceiling_bias_bound = options.ruin_neglect;
    }

    const Sampler sampler(d);
    const int threads = std::max(
        1, std::min<int>(options.threads,
                         static_cast<int>(options.n_paths)));

    Tally total;
    if (threads == 1) {
        total = run_paths(sampler, 0, options.n_paths, options.seed,
                          initial_wealth, nu, ceiling, options.t_cap);
    } else {
        std::vector<Tally> parts(static_cast<std::size_t>(threads));
        std::vector<std::thread> pool;
        const std::int64_t chunk =
            (options.n_paths + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::int64_t first = w * chunk;
            const std::int64_t last =
                std::min<std::int64_t>(options.n_paths, first + chunk);
            pool.emplace_back([&, w, first, last] {
                parts[static_cast<std::size_t>(w)] =
                    run_paths(sampler, first, last, options.seed,
                              initial_wealth, nu, ceiling, options.t_cap);
            });
        }
        for (auto& th : pool)
            th.join();
        for (const Tally& p : parts) {
            total.ruined += p.ruined;
            total.ceiling += p.ceiling;
            total.censored += p.censored;
        }
    }

    res.ruined = total.ruined;
    res.reached_ceiling = total.ceiling;
    const double n = static_cast<double>(options.n_paths);
    res.estimate = static_cast<double>(total.ruined) / n;
    res.censored_fraction = static_cast<double>(total.censored) / n;
    // Agresti-Coull interval: the plain binomial CI collapses to width zero
    // at 0 or n successes, which would make any rare-event comparison an
    // automatic disagreement; the adjusted count keeps the width honest.
    const double z = 1.96;
    const double n_adj = n + z * z;
    const double p_adj = (static_cast<double>(total.ruined) + 0.5 * z * z) / n_adj;
    res.ci_halfwidth = z * std::sqrt(p_adj * (1.0 - p_adj) / n_adj);
    return res;
}

} // namespace ruincalc
