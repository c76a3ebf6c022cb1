#include "ruincalc/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ruincalc/errors.hpp"
#include "polyval.hpp"

namespace ruincalc {

namespace {

using cd = std::complex<double>;

// p(z) = 1 inside the disk is solved as g(z) = 0 with g = h - z^nu, h the
// shifted polynomial. g(0) = p_{-nu} > 0, so z = 0 is never a root.
std::vector<double> shifted_equation(const PayoffDistribution& d, int degree) {
    std::vector<double> g = degree < 0
        ? std::vector<double>(d.shifted_coeffs().begin(), d.shifted_coeffs().end())
        : d.h_coefficients(degree);
    g[static_cast<std::size_t>(d.max_loss())] -= 1.0;
    while (g.size() > 1 && g.back() == 0.0)
        g.pop_back();
    return g;
}

// Root-modulus estimates from the Newton polygon: the upper convex hull of
// (k, log|g_k|) yields one radius per hull edge, covering edge-width roots,
// in increasing order.
std::vector<double> polygon_radii(const std::vector<double>& g) {
    struct Pt {
        double k, y;
    };
    std::vector<Pt> pts;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g[k] != 0.0)
            pts.push_back({static_cast<double>(k), std::log(std::abs(g[k]))});

    std::vector<Pt> hull;
    for (const Pt& p : pts) {
        auto turns_up = [&] {
            const Pt& o = hull[hull.size() - 2];
            const Pt& a = hull[hull.size() - 1];
            return (a.k - o.k) * (p.y - o.y) - (a.y - o.y) * (p.k - o.k) >= 0.0;
        };
        while (hull.size() >= 2 && turns_up())
            hull.pop_back();
        hull.push_back(p);
    }

    std::vector<double> radii;
    for (std::size_t e = 1; e < hull.size(); ++e) {
        const double width = hull[e].k - hull[e - 1].k;
        const double r = std::exp((hull[e - 1].y - hull[e].y) / width);
        for (int m = 0; m < static_cast<int>(width); ++m)
            radii.push_back(r);
    }
    return radii;
}

std::vector<cd> initial_guesses(const std::vector<double>& g, int nu,
                                double z_star, double rotate) {
    const int n = static_cast<int>(g.size()) - 1;
    std::vector<double> radii = polygon_radii(g);
    radii.resize(static_cast<std::size_t>(n), radii.empty() ? 1.0 : radii.back());

    std::vector<cd> zs(static_cast<std::size_t>(n));
    // The nu smallest-radius slots take a fan on the z* circle (all in-disk
    // roots satisfy |z| <= z*); the rest start safely outside the disk.
    for (int j = 0; j < nu; ++j) {
        const double th = (2.0 * std::numbers::pi * j + 1.0) / nu + rotate;
        zs[static_cast<std::size_t>(j)] = std::polar(z_star, th);
    }
    for (int j = nu; j < n; ++j) {
        const double r = std::max(radii[static_cast<std::size_t>(j)], 1.02);
        const double th =
            2.0 * std::numbers::pi * (j - nu) / std::max(1, n - nu) + 0.7 + rotate;
        zs[static_cast<std::size_t>(j)] = std::polar(r, th);
    }
    return zs;
}

// Simultaneous Aberth-Ehrlich sweeps. A point stops moving once |g| falls
// below the floating-point noise floor of the evaluation.
void aberth(const std::vector<double>& g, std::vector<cd>& zs, int max_sweeps) {
    const std::size_t n = zs.size();
    std::vector<double> gabs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        gabs[i] = std::abs(g[i]);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            cd z = zs[i];
            cd f, df;
            detail::horner2(g, z, f, df);
            const double noise =
                4.0 * std::numeric_limits<double>::epsilon() *
                detail::abs_horner(gabs, std::abs(z));
            if (std::abs(f) <= noise)
                continue;
            if (df == cd(0.0, 0.0)) {
                zs[i] += cd(1e-6 * (1.0 + std::abs(z)), 3e-7);
                moved = true;
                continue;
            }
            const cd newton = f / df;
            cd repulsion = 0.0;
            bool collision = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                const cd dz = z - zs[j];
                if (std::abs(dz) < 1e-290) {
                    collision = true;
                    break;
                }
                repulsion += 1.0 / dz;
            }
            if (collision) {
                zs[i] += cd(1e-6 * (1.0 + std::abs(z)), -2e-7);
                moved = true;
                continue;
            }
            cd w = newton / (1.0 - newton * repulsion);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                w = newton;
            zs[i] = z - w;
            if (std::abs(w) > 5e-15 * (1.0 + std::abs(zs[i])))
                moved = true;
        }
        if (!moved)
            break;
    }
}

double residual_at(const PayoffDistribution& d, cd z) {
    return std::abs(d.evaluate_p(z) - 1.0);
}

// A couple of Newton steps against the full shifted polynomial, keeping the
// best residual seen (the Aberth fixed point is already close).
cd polish(const std::vector<double>& g, const PayoffDistribution& d, cd z,
          int iters) {
    cd best = z;
    double best_res = residual_at(d, z);
    for (int it = 0; it < iters; ++it) {
        cd f, df;
        detail::horner2(g, z, f, df);
        if (f == cd(0.0, 0.0) || df == cd(0.0, 0.0))
            break;
        z -= f / df;
        const double res = residual_at(d, z);
        if (res < best_res) {
            best_res = res;
            best = z;
        } else {
            break;
        }
    }
    return best;
}

// Real coefficients: snap near-real roots to the axis and average conjugate
// partners so the returned set is exactly conjugate-closed.
void symmetrize(std::vector<cd>& roots) {
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i])
            continue;
        cd& z = roots[i];
        if (std::abs(z.imag()) <= 1e-13 * (1.0 + std::abs(z))) {
            z = cd(z.real(), 0.0);
            used[i] = true;
            continue;
        }
        std::size_t partner = i;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j == i || used[j])
                continue;
            const double dist = std::abs(roots[j] - std::conj(z));
            if (dist < best) {
                best = dist;
                partner = j;
            }
        }
        if (partner != i && best <= 1e-6 * (1.0 + std::abs(z))) {
            const cd m = 0.5 * (z + std::conj(roots[partner]));
            z = m;
            roots[partner] = std::conj(m);
            used[partner] = true;
        }
        used[i] = true;
    }
}

} // namespace

bool DiskRoots::any_clustered() const {
    return std::any_of(cluster_flags.begin(), cluster_flags.end(),
                       [](char f) { return f != 0; });
}

double DiskRoots::max_abs() const {
    return roots.empty() ? 0.0 : std::abs(roots.front());
}

double find_z_star(const PayoffDistribution& d) {
    if (!d.favorable())
        throw NoInteriorRoot("p(z) = 1 has no root in (0,1): mean payoff is "
                             "not positive");
    const auto c = d.shifted_coeffs();
    const int nu = d.max_loss();
    // g(x) = h(x) - x^nu: positive at 0+ (g(0) = p_{-nu}), negative just
    // below 1 for favorable games (p(x) < 1 there).
    auto g = [&](double x) {
        return detail::horner(c, x) - detail::pow_int(x, nu);
    };

    double hi = -1.0;
    for (double delta = 1e-3; delta >= 1e-13; delta *= 0.1) {
        if (g(1.0 - delta) < 0.0) {
            hi = 1.0 - delta;
            break;
        }
    }
    if (hi < 0.0)
        throw NoInteriorRoot("drift too small to separate the interior root "
                             "from z = 1 in double precision");

    double lo = hi;
    while (g(lo) < 0.0) {
        lo *= 0.5;
        if (lo < 1e-300)
            throw NoInteriorRoot("no sign change found in (0,1)");
    }
    double neg = std::min(2.0 * lo, hi);

    for (int it = 0; it < 200 && (neg - lo) > 1e-17 * neg; ++it) {
        const double mid = 0.5 * (lo + neg);
        (g(mid) >= 0.0 ? lo : neg) = mid;
    }

    // Final Newton polish on g with compensated evaluation. Plain Horner
    // noise (~eps) would leave the root at eps / |g'(z*)|, and g'(z*) scales
    // with the drift, so small drifts would lose several digits; the
    // compensated value behaves like a double-double evaluation and lets the
    // iteration settle on the representable root.
    const std::vector<double> gpoly = shifted_equation(d, -1);
    double best = 0.5 * (lo + neg);
    double best_res = std::abs(detail::horner_compensated(gpoly, best));
    double x = best;
    for (int it = 0; it < 12; ++it) {
        const double f = detail::horner_compensated(gpoly, x);
        double fv, fp;
        detail::horner2(gpoly, x, fv, fp);
        if (fp == 0.0)
            break;
        const double step = f / fp;
        x -= step;
        if (!(x > 0.0 && x < 1.0))
            break;
        const double res = std::abs(detail::horner_compensated(gpoly, x));
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (std::abs(step) <= 1e-17 * x)
            break;
    }
    const double contract_res = std::abs(d.evaluate_p(best) - 1.0);
    if (contract_res > 1e-12) {
        std::ostringstream msg;
        msg << "z* residual |p(z*) - 1| = " << contract_res
            << " exceeds 1e-12";
        throw ResidualTooLarge(msg.str());
    }
    return best;
}

DiskRoots find_disk_roots(const PayoffDistribution& d,
                          const RootOptions& options, int degree) {
    if (!(options.residual_tol > 0.0) || !(options.cluster_tol > 0.0) ||
        options.max_sweeps < 1 || options.polish_iters < 0)
        throw InvalidArgument("find_disk_roots: malformed options");

    const double z_star = find_z_star(d);
    const int nu = d.max_loss();
    const std::vector<double> g = shifted_equation(d, degree);
    if (static_cast<int>(g.size()) - 1 <= nu)
        throw RootCountMismatch("equation degree too small: no winning "
                                "outcomes in the realized table");

    // One retry with rotated starting angles before giving up; Aberth can in
    // principle stall from an unlucky symmetric configuration.
    std::vector<cd> selected;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<cd> zs =
            initial_guesses(g, nu, z_star, attempt == 0 ? 0.0 : 0.83);
        aberth(g, zs, options.max_sweeps << attempt);
        selected.clear();
        for (const cd& z : zs)
            if (std::abs(z) < 1.0 - 1e-12)
                selected.push_back(z);
        if (static_cast<int>(selected.size()) == nu)
            break;
    }
    if (static_cast<int>(selected.size()) != nu) {
        std::ostringstream msg;
        msg << "found " << selected.size() << " roots inside the unit disk, "
            << "expected " << nu << " (winding count may disagree; see "
            << "winding_root_count)";
        throw RootCountMismatch(msg.str());
    }

    for (cd& z : selected)
        z = polish(g, d, z, options.polish_iters);
    symmetrize(selected);

    // The dedicated 1-D solver pins z* to about an ulp; replace the matching
    // simultaneous-iteration root with that value and keep it in front, so
    // roots[0] == z_star holds exactly.
    std::size_t zi = 0;
    double zdist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const double dist = std::abs(selected[i] - cd(z_star, 0.0));
        if (dist < zdist) {
            zdist = dist;
            zi = i;
        }
    }
    if (zdist > 1e-9)
        throw NumericalError("z* is missing from the in-disk root set");
    selected[zi] = cd(z_star, 0.0);
    std::swap(selected[0], selected[zi]);

    std::sort(selected.begin() + 1, selected.end(),
              [](const cd& a, const cd& b) {
                  const double ma = std::abs(a), mb = std::abs(b);
                  if (ma != mb)
                      return ma > mb;
                  return std::arg(a) < std::arg(b);
              });

    DiskRoots out;
    out.roots = std::move(selected);
    out.z_star = z_star;
    out.residuals.resize(out.roots.size());
    out.cluster_flags.assign(out.roots.size(), 0);
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
        out.residuals[i] = residual_at(d, out.roots[i]);
        if (out.residuals[i] > options.residual_tol) {
            std::ostringstream msg;
            msg << "root " << out.roots[i] << " has residual "
                << out.residuals[i] << " > " << options.residual_tol;
            throw ResidualTooLarge(msg.str());
        }
        if (std::abs(out.roots[i]) > z_star + 1e-9) {
            std::ostringstream msg;
            msg << "root " << out.roots[i] << " violates the |z| <= z* bound "
                << "(z* = " << z_star << ")";
            throw NumericalError(msg.str());
        }
    }

    for (std::size_t i = 0; i < out.roots.size(); ++i)
        for (std::size_t j = i + 1; j < out.roots.size(); ++j)
            if (std::abs(out.roots[i] - out.roots[j]) < options.cluster_tol)
                out.cluster_flags[i] = out.cluster_flags[j] = 1;

    return out;
}

int winding_root_count(const PayoffDistribution& d, double radius) {
    if (radius <= 0.0)
        radius = 0.5 * (find_z_star(d) + 1.0);
    const std::vector<double> g = shifted_equation(d, -1);
    std::vector<double> gabs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        gabs[i] = std::abs(g[i]);
    const double floor = 1e-13 * detail::abs_horner(gabs, radius);

    // Total argument change of g around the circle; each sample-to-sample
    // jump must stay well below pi or the sampling is refined.
    for (int samples = 4096; samples <= (1 << 21); samples *= 2) {
        double total = 0.0;
        cd prev = detail::horner(g, cd(radius, 0.0));
        bool ok = std::abs(prev) > floor;
        for (int k = 1; ok && k <= samples; ++k) {
            const double th = 2.0 * std::numbers::pi * k / samples;
            const cd v = detail::horner(g, std::polar(radius, th));
            if (std::abs(v) <= floor) {
                ok = false;
                break;
            }
            const double jump = std::arg(v / prev);
            if (std::abs(jump) > 1.5) {
                ok = false;
                break;
            }
            total += jump;
            prev = v;
        }
        if (ok) {
            const double winding = total / (2.0 * std::numbers::pi);
            const long long rounded = std::llround(winding);
            if (std::abs(winding - static_cast<double>(rounded)) > 0.25)
                continue;
            return static_cast<int>(rounded);
        }
    }
    throw NumericalError("winding_root_count: contour passes too close to a "
                         "zero; choose a different radius");
}

} // namespace ruincalc
