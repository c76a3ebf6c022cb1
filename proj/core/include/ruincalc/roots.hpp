// Roots of p(z) = 1 inside the unit disk.
//
// For a favorable game, p(z) = 1 has exactly nu solutions with |z| < 1
// (counted with multiplicity). They drive the explicit ruin formula. The
// unique real solution z* in (0,1) is also the in-disk root of maximal
// modulus, so every in-disk root satisfies |eta| <= z*.
#pragma once

#include <complex>
#include <vector>

#include "ruincalc/payoff.hpp"

namespace ruincalc {

struct RootOptions {
    double residual_tol = 1e-9; // max allowed |p(root) - 1|
    double cluster_tol = 1e-6;  // pair distance below which roots are flagged clustered
    int max_sweeps = 500;       // Aberth iteration budget
    int polish_iters = 40;      // Newton polishing budget per root
};

struct DiskRoots {
    // Sorted by decreasing |z|, ties by increasing arg; roots[0] == z_star.
    std::vector<std::complex<double>> roots;
    double z_star = 0.0;
    std::vector<double> residuals; // |p(root) - 1| per root
    std::vector<char> cluster_flags;

    int count() const { return static_cast<int>(roots.size()); }
    bool any_clustered() const;
    double max_abs() const;
};

// The unique root of p(x) = 1 with 0 < x < 1. Exists iff the game is
// favorable (throws NoInteriorRoot otherwise). |p(z*) - 1| <= 1e-12.
double find_z_star(const PayoffDistribution& d);

// All nu roots of p(z) = 1 with |z| < 1, found by an Aberth-Ehrlich sweep
// over h(z) - z^nu and Newton-polished against the full coefficient table.
// degree selects the truncation degree of h (-1 = the realized table; larger
// values only pad zeros and leave the root set unchanged; smaller values are
// rejected through h_coefficients). Throws RootCountMismatch if the in-disk
// count is not nu and ResidualTooLarge if a polished root fails residual_tol.
DiskRoots find_disk_roots(const PayoffDistribution& d,
                          const RootOptions& options = {}, int degree = -1);

// Zero count of h(z) - z^nu inside |z| = radius by the argument principle
// (radius <= 0 selects (z* + 1) / 2). Independent of the root finder; used to
// cross-validate the in-disk count.
int winding_root_count(const PayoffDistribution& d, double radius = -1.0);

} // namespace ruincalc
