#include "ruincalc/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruincalc/errors.hpp"
#include "polyval.hpp"

namespace ruincalc {

namespace {

using cd = std::complex<double>;

constexpr double kOverflowGuard = 1e15;
constexpr double kImagTol = 1e-6;   // beyond this the root set is inconsistent
constexpr double kRangeTol = 1e-9;  // probability clamp band
constexpr double kCoeffFloor = 1e-12;

[[noreturn]] void overflow(const char* where) {
    throw NumericOverflow(std::string(where) +
                          ": intermediate magnitude above 1e15");
}

// Assemble a RuinResult from the complex value and Q coefficients, enforcing
// the reality and range contracts.
RuinResult finalize(int M, RuinMethod method, double max_root_abs, cd total,
                    std::vector<cd> q) {
    double imag = std::abs(total.imag());
    for (const cd& c : q)
        imag = std::max(imag, std::abs(c.imag()));
    if (imag > kImagTol) {
        std::ostringstream msg;
        msg << "imaginary residue " << imag << " after summation; root set "
            << "is not conjugate-consistent";
        throw ImaginaryResidue(msg.str());
    }

    RuinResult r;
    r.initial_wealth = M;
    r.method = method;
    r.max_root_abs = max_root_abs;
    r.imag_residual = imag;

    const double p = total.real();
    if (p < -kRangeTol || p > 1.0 + kRangeTol) {
        std::ostringstream msg;
        msg << "ruin probability " << p << " outside [0,1] beyond tolerance";
        throw NumericalError(msg.str());
    }
    r.p_ruin = std::clamp(p, 0.0, 1.0);

    r.final_fortune.reserve(q.size());
    for (const cd& c : q) {
        double v = c.real();
        if (v < -kRangeTol || v > 1.0 + kRangeTol) {
            std::ostringstream msg;
            msg << "fortune coefficient " << v << " outside [0,1] beyond "
                << "tolerance";
            throw NumericalError(msg.str());
        }
        if (std::abs(v) < kCoeffFloor || v < 0.0)
            v = 0.0;
        r.final_fortune.push_back(std::min(v, 1.0));
    }
    return r;
}

void require_wealth(const DiskRoots& roots, int M) {
    if (roots.count() < 1)
        throw InvalidArgument("empty root set");
    if (M < roots.count()) {
        std::ostringstream msg;
        msg << "initial wealth " << M << " below the number of roots "
            << roots.count() << "; use the ruin_probability dispatcher";
        throw InvalidArgument(msg.str());
    }
}

RuinResult trivial_result(int M, int nu, bool split_known) {
    RuinResult r;
    r.initial_wealth = M;
    r.p_ruin = 1.0;
    r.method = RuinMethod::trivial;
    r.max_root_abs = 1.0; // no decay: ruin is certain at every wealth
    if (split_known) {
        // M < nu: the game never starts, the "final" fortune is M itself.
        r.final_fortune.assign(static_cast<std::size_t>(nu), 0.0);
        r.final_fortune[static_cast<std::size_t>(M)] = 1.0;
    }
    return r;
}

} // namespace

const char* to_string(RuinMethod m) {
    switch (m) {
    case RuinMethod::lagrange:
        return "lagrange";
    case RuinMethod::newton:
        return "newton";
    case RuinMethod::trivial:
        return "trivial";
    }
    return "?";
}

std::complex<double> complete_symmetric(std::span<const std::complex<double>> xs,
                                        int r) {
    if (xs.empty())
        throw InvalidArgument("complete_symmetric: need at least one variable");
    if (r < 0)
        throw InvalidArgument("complete_symmetric: negative degree");

    // Phi_{n,r} = Phi_{n-1,r} + x_n Phi_{n,r-1}, rolled over one degree layer.
    std::vector<cd> layer(static_cast<std::size_t>(r) + 1);
    layer[0] = 1.0;
    for (int j = 1; j <= r; ++j)
        layer[static_cast<std::size_t>(j)] =
            layer[static_cast<std::size_t>(j - 1)] * xs[0];
    for (std::size_t n = 1; n < xs.size(); ++n) {
        for (int j = 1; j <= r; ++j) {
            layer[static_cast<std::size_t>(j)] +=
                xs[n] * layer[static_cast<std::size_t>(j - 1)];
            if (std::abs(layer[static_cast<std::size_t>(j)]) > kOverflowGuard)
                overflow("complete_symmetric");
        }
    }
    return layer[static_cast<std::size_t>(r)];
}

RuinResult ruin_probability_newton(const DiskRoots& roots, int initial_wealth) {
    require_wealth(roots, initial_wealth);
    const int nu = roots.count();
    const int M = initial_wealth;

    // Level n contributes Phi_{n, M-n+1}(eta_1..eta_n) times the prefix
    // product prod_{j<n}(1 - eta_j). Phi is evaluated through its linear
    // recurrence against the elementary symmetric polynomials of the first n
    // roots: Phi_{n,r} = sum_k (-1)^{k+1} e_k Phi_{n,r-k}. All roots lie in
    // the unit disk, so the forward recurrence is stable and bounded.
    std::vector<cd> elem{1.0};      // e_0..e_n of the current prefix set
    cd prefix = 1.0;                // prod_{j<n} (1 - eta_j)
    std::vector<cd> basis{1.0};     // coefficients of prod_{j<n} (z - eta_j)
    std::vector<cd> q(static_cast<std::size_t>(nu), 0.0);
    cd total = 0.0;

    for (int n = 1; n <= nu; ++n) {
        const cd eta = roots.roots[static_cast<std::size_t>(n - 1)];
        elem.push_back(0.0);
        for (int k = n; k >= 1; --k)
            elem[static_cast<std::size_t>(k)] +=
                eta * elem[static_cast<std::size_t>(k - 1)];

        const int r_target = M - n + 1;
        std::vector<cd> window(static_cast<std::size_t>(n), 0.0);
        window[0] = 1.0; // Phi_{n,0}
        for (int r = 1; r <= r_target; ++r) {
            cd cur = 0.0;
            double sign = 1.0;
            for (int k = 1; k <= n; ++k) {
                cur += sign * elem[static_cast<std::size_t>(k)] *
                       window[static_cast<std::size_t>(k - 1)];
                sign = -sign;
            }
            if (std::abs(cur) > kOverflowGuard)
                overflow("ruin_probability_newton");
            for (int k = n - 1; k >= 1; --k)
                window[static_cast<std::size_t>(k)] =
                    window[static_cast<std::size_t>(k - 1)];
            window[0] = cur;
        }
        const cd phi = window[0];

        total += phi * prefix;
        for (int k = 0; k < n; ++k)
            q[static_cast<std::size_t>(k)] +=
                phi * basis[static_cast<std::size_t>(k)];

        prefix *= (1.0 - eta);
        basis.push_back(0.0);
        for (int k = n; k >= 1; --k)
            basis[static_cast<std::size_t>(k)] =
                basis[static_cast<std::size_t>(k - 1)] -
                eta * basis[static_cast<std::size_t>(k)];
        basis[0] *= -eta;
    }

    return finalize(M, RuinMethod::newton, roots.max_abs(), total,
                    std::move(q));
}

RuinResult ruin_probability_lagrange(const DiskRoots& roots,
                                     int initial_wealth) {
    require_wealth(roots, initial_wealth);
    if (roots.any_clustered())
        throw RootsNotDistinct("clustered roots: use ruin_probability_newton");
    const int nu = roots.count();
    const int M = initial_wealth;

    for (int i = 0; i < nu; ++i)
        for (int j = i + 1; j < nu; ++j)
            if (std::abs(roots.roots[static_cast<std::size_t>(i)] -
                         roots.roots[static_cast<std::size_t>(j)]) < 1e-12)
                throw RootsNotDistinct("coincident roots: use "
                                       "ruin_probability_newton");

    std::vector<cd> q(static_cast<std::size_t>(nu), 0.0);
    cd total = 0.0;
    std::vector<cd> numer; // coefficients of prod_{i != j} (z - eta_i)
    for (int j = 0; j < nu; ++j) {
        const cd eta_j = roots.roots[static_cast<std::size_t>(j)];
        cd weight = detail::pow_int(eta_j, M);
        numer.assign(1, cd(1.0));
        for (int i = 0; i < nu; ++i) {
            if (i == j)
                continue;
            const cd eta_i = roots.roots[static_cast<std::size_t>(i)];
            weight *= (1.0 - eta_i) / (eta_j - eta_i);
            numer.push_back(0.0);
            for (int k = static_cast<int>(numer.size()) - 1; k >= 1; --k)
                numer[static_cast<std::size_t>(k)] =
                    numer[static_cast<std::size_t>(k - 1)] -
                    eta_i * numer[static_cast<std::size_t>(k)];
            numer[0] *= -eta_i;
        }
        total += weight;
        // Q picks up eta_j^M prod (z - eta_i)/(eta_j - eta_i); fold the
        // (1 - eta_i) factors back out of the precomputed weight.
        cd scale = detail::pow_int(eta_j, M);
        for (int i = 0; i < nu; ++i)
            if (i != j)
                scale /= (eta_j - roots.roots[static_cast<std::size_t>(i)]);
        for (std::size_t k = 0; k < numer.size(); ++k)
            q[k] += scale * numer[k];
    }

    return finalize(M, RuinMethod::lagrange, roots.max_abs(), total,
                    std::move(q));
}

RuinResult ruin_probability(const PayoffDistribution& d,
                            const DiskRoots& roots, int initial_wealth,
                            const RuinOptions& options) {
    if (initial_wealth < 0)
        throw InvalidArgument("initial wealth must be >= 0");
    if (initial_wealth < d.max_loss())
        return trivial_result(initial_wealth, d.max_loss(), true);
    if (!d.favorable())
        return trivial_result(initial_wealth, d.max_loss(), false);

    const bool must_newton = options.force_newton || roots.any_clustered();
    if (options.cross_check_forms && !roots.any_clustered()) {
        RuinResult newton = ruin_probability_newton(roots, initial_wealth);
        RuinResult lagrange = ruin_probability_lagrange(roots, initial_wealth);
        const double gap = std::abs(newton.p_ruin - lagrange.p_ruin);
        RuinResult r = must_newton ? std::move(newton) : std::move(lagrange);
        r.cross_form_gap = gap;
        return r;
    }
    return must_newton ? ruin_probability_newton(roots, initial_wealth)
                       : ruin_probability_lagrange(roots, initial_wealth);
}

RuinResult ruin_probability(const PayoffDistribution& d, int initial_wealth,
                            const RuinOptions& options) {
    if (initial_wealth < 0)
        throw InvalidArgument("initial wealth must be >= 0");
    if (initial_wealth < d.max_loss())
        return trivial_result(initial_wealth, d.max_loss(), true);
    if (!d.favorable())
        return trivial_result(initial_wealth, d.max_loss(), false);
    const DiskRoots roots = find_disk_roots(d, options.roots);
    return ruin_probability(d, roots, initial_wealth, options);
}

std::vector<double> final_fortune_distribution(const PayoffDistribution& d,
                                               int initial_wealth,
                                               const RuinOptions& options) {
    return ruin_probability(d, initial_wealth, options).final_fortune;
}

} // namespace ruincalc
