// Finite-adversary oracle: ruin probability with an upper stopping barrier.
// u(m) = sum_k p_k u(m+k) on nu <= m <= W, u = 1 below nu, u = 0 above W.
// The matrix is banded (nu subdiagonals, max_gain superdiagonals); solved by
// banded LU with partial pivoting, LAPACK-style storage with nu extra
// superdiagonals for pivoting fill.
#include <algorithm>
#include <cmath>
#include <vector>

#include "ruincalc/errors.hpp"
#include "ruincalc/oracles.hpp"

namespace ruincalc {

double finite_w_ruin(const PayoffDistribution& d, int initial_wealth, int W) {
    const int nu = d.max_loss();
    if (initial_wealth < 0)
        throw InvalidArgument("finite_w_ruin: wealth must be >= 0");
    if (initial_wealth < nu)
        return 1.0;
    if (initial_wealth > W)
        return 0.0;

    const int N = W - nu + 1; // unknowns u(nu..W)
    const int kl = nu;
    const int ku = std::max(d.max_gain(), 0);
    const int stride = 2 * kl + ku + 1;
    if (static_cast<long long>(N) * stride > 400000000LL)
        throw InvalidArgument("finite_w_ruin: W too large for a dense banded "
                              "factorization");

    // Column-major band: entry (r, c) lives at ab[c * stride + kl + ku + r - c]
    // for r - c in [-(kl + ku), kl].
    std::vector<double> ab(static_cast<std::size_t>(N) * stride, 0.0);
    auto at = [&](int r, int c) -> double& {
        return ab[static_cast<std::size_t>(c) * stride + (kl + ku + r - c)];
    };
    std::vector<double> rhs(static_cast<std::size_t>(N), 0.0);

    const auto coeffs = d.shifted_coeffs();
    for (int i = 0; i < N; ++i) {
        at(i, i) += 1.0;
        for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
            const double p = coeffs[idx];
            if (p == 0.0)
                continue;
            const int k = static_cast<int>(idx) - nu;
            const int state = nu + i + k;
            if (state < nu)
                rhs[static_cast<std::size_t>(i)] += p;
            else if (state <= W)
                at(i, i + k) -= p;
        }
    }

    std::vector<int> piv(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        int pr = j;
        double pmax = std::abs(at(j, j));
        for (int r = j + 1; r <= std::min(j + kl, N - 1); ++r) {
            if (std::abs(at(r, j)) > pmax) {
                pmax = std::abs(at(r, j));
                pr = r;
            }
        }
        if (pmax < 1e-250)
            throw SingularSystem("finite_w_ruin: factorization broke down");
        piv[static_cast<std::size_t>(j)] = pr;
        const int ce = std::min(N - 1, j + kl + ku);
        if (pr != j)
            for (int c = j; c <= ce; ++c)
                std::swap(at(j, c), at(pr, c));
        for (int r = j + 1; r <= std::min(j + kl, N - 1); ++r) {
            const double m = at(r, j) / at(j, j);
            at(r, j) = m;
            for (int c = j + 1; c <= ce; ++c)
                at(r, c) -= m * at(j, c);
        }
    }

    for (int j = 0; j < N; ++j) {
        if (piv[static_cast<std::size_t>(j)] != j)
            std::swap(rhs[static_cast<std::size_t>(j)],
                      rhs[static_cast<std::size_t>(piv[static_cast<std::size_t>(j)])]);
        for (int r = j + 1; r <= std::min(j + kl, N - 1); ++r)
            rhs[static_cast<std::size_t>(r)] -=
                at(r, j) * rhs[static_cast<std::size_t>(j)];
    }
    for (int j = N - 1; j >= 0; --j) {
        double x = rhs[static_cast<std::size_t>(j)];
        const int ce = std::min(N - 1, j + kl + ku);
        for (int c = j + 1; c <= ce; ++c)
            x -= at(j, c) * rhs[static_cast<std::size_t>(c)];
        rhs[static_cast<std::size_t>(j)] = x / at(j, j);
    }

    return rhs[static_cast<std::size_t>(initial_wealth - nu)];
}

} // namespace ruincalc
