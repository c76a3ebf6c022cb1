// Runs the three oracles against a formula value and judges agreement.
#include <algorithm>
#include <cmath>

#include "ruincalc/oracles.hpp"

namespace ruincalc {

namespace {

// W ladder with geometric spacing from M: errors shrink (at least) by a
// roughly constant factor between entries, which is what the Aitken
// extrapolation below assumes.
std::vector<int> auto_w_values(const PayoffDistribution& d, int M) {
    long long b;
    if (d.favorable())
        b = static_cast<long long>(std::ceil(100.0 / d.mean()));
    else
        b = std::max<long long>({200, 8LL * (M + 1), 25LL * d.max_loss()});
    b = std::clamp<long long>(b, 50, 1000000);
    std::vector<int> ws;
    for (long long mult : {1, 2, 4}) {
        const long long w = std::min<long long>(M + mult * b, 2000000);
        if (ws.empty() || w > ws.back())
            ws.push_back(static_cast<int>(w));
    }
    return ws;
}

double aitken(const std::vector<std::pair<int, double>>& seq) {
    const std::size_t n = seq.size();
    if (n < 3)
        return seq.back().second;
    const double x0 = seq[n - 3].second;
    const double x1 = seq[n - 2].second;
    const double x2 = seq[n - 1].second;
    const double denom = (x2 - x1) - (x1 - x0);
    if (std::abs(denom) < 1e-300)
        return x2;
    return x2 - (x2 - x1) * (x2 - x1) / denom;
}

} // namespace

OracleReport cross_check(const PayoffDistribution& d, int initial_wealth,
                         double formula_value,
                         const CrossCheckOptions& options) {
    OracleReport rep;
    rep.formula = formula_value;

    rep.dp = dp_ruin(d, initial_wealth, options.dp);
    rep.dp_ok = formula_value >= rep.dp.lower - options.dp_slack &&
                formula_value <= rep.dp.upper() + options.dp_slack;

    rep.mc = mc_ruin(d, initial_wealth, options.mc);
    const double se = rep.mc.ci_halfwidth / 1.96;
    const double allowance = options.mc_sigmas * se +
                             rep.mc.censored_fraction +
                             rep.mc.ceiling_bias_bound + 1e-9;
    rep.mc_ok = std::abs(formula_value - rep.mc.estimate) <= allowance;

    const std::vector<int> ws = options.w_values.empty()
                                    ? auto_w_values(d, initial_wealth)
                                    : options.w_values;
    for (int w : ws)
        rep.finite_w.emplace_back(w, finite_w_ruin(d, initial_wealth, w));
    rep.fw_monotone = true;
    for (std::size_t i = 1; i < rep.finite_w.size(); ++i)
        if (rep.finite_w[i].second < rep.finite_w[i - 1].second - 1e-12)
            rep.fw_monotone = false;
    rep.fw_extrapolated = aitken(rep.finite_w);
    const double fw_last = rep.finite_w.back().second;
    rep.fw_ok = rep.fw_monotone &&
                (std::abs(formula_value - fw_last) <= options.fw_tol ||
                 std::abs(formula_value - rep.fw_extrapolated) <= options.fw_tol);
    return rep;
}

} // namespace ruincalc
