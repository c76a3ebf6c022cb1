#include <algorithm>
#include <cmath>
#include <complex>

#include <doctest.h>

#include "ruincalc/errors.hpp"
#include "ruincalc/roots.hpp"

#include "fixtures.hpp"

using namespace ruincalc;
using cd = std::complex<double>;

namespace {

// Distance from z to the nearest element of a reference set.
double nearest(const std::vector<cd>& set, cd z) {
    double best = 1e300;
    for (const cd& w : set)
        best = std::min(best, std::abs(w - z));
    return best;
}

} // namespace

TEST_CASE("z* closed forms for simple walks") {
    // 0.4/x + 0.6x = 1 has interior root 2/3; 0.25/0.75 gives 1/3.
    CHECK(find_z_star(fixtures::simple_walk()) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(find_z_star(fixtures::table({{-1, 0.25}, {1, 0.75}})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("z* residual contract") {
    for (const auto& d :
         {fixtures::simple_walk(), fixtures::skip_walk(), fixtures::deep_loss(),
          fixtures::prize_game(), fixtures::near_double()}) {
        const double z = find_z_star(d);
        CHECK(z > 0.0);
        CHECK(z < 1.0);
        CHECK(std::abs(d.evaluate_p(z) - 1.0) <= 1e-12);
    }
}

TEST_CASE("z* requires a favorable game") {
    CHECK_THROWS_AS((void)find_z_star(fixtures::table({{-1, 0.6}, {1, 0.4}})),
                    NoInteriorRoot);
    CHECK_THROWS_AS((void)find_z_star(fixtures::table({{-1, 0.5}, {1, 0.5}})),
                    NoInteriorRoot);
}

TEST_CASE("single-root game: the root is z*") {
    const auto d = fixtures::skip_walk();
    const auto r = find_disk_roots(d);
    REQUIRE(r.count() == 1);
    CHECK(r.roots[0].imag() == 0.0);
    CHECK(r.roots[0].real() ==
          doctest::Approx(fixtures::kSkipWalkEta).epsilon(1e-13));
    CHECK(r.z_star == doctest::Approx(fixtures::kSkipWalkEta).epsilon(1e-13));
    CHECK(r.max_abs() == r.z_star);
    CHECK_FALSE(r.any_clustered());
}

TEST_CASE("two-root game with closed-form roots") {
    const auto r = find_disk_roots(fixtures::deep_loss());
    REQUIRE(r.count() == 2);
    // Sorted by decreasing modulus: positive root first.
    CHECK(r.roots[0].real() ==
          doctest::Approx(fixtures::deep_loss_root_hi()).epsilon(1e-12));
    CHECK(r.roots[0].imag() == 0.0);
    CHECK(r.roots[1].real() ==
          doctest::Approx(fixtures::deep_loss_root_lo()).epsilon(1e-12));
    CHECK(r.roots[1].imag() == 0.0);
    CHECK_FALSE(r.any_clustered());
    CHECK(r.residuals[0] <= 1e-12);
    CHECK(r.residuals[1] <= 1e-12);
}

TEST_CASE("benchmark game: three roots to high precision") {
    const auto d = fixtures::prize_game();
    const auto r = find_disk_roots(d);
    REQUIRE(r.count() == 3);

    const std::vector<cd> expected = {
        {fixtures::kPrizeZStar, 0.0},
        {fixtures::kPrizePairRe, fixtures::kPrizePairIm},
        {fixtures::kPrizePairRe, -fixtures::kPrizePairIm},
    };
    for (const cd& z : r.roots)
        CHECK(nearest(expected, z) <= 1e-9);

    // Ordering contract: decreasing modulus, z* in front.
    CHECK(r.roots[0] == cd(r.z_star, 0.0));
    CHECK(std::abs(r.roots[0]) >= std::abs(r.roots[1]));
    CHECK(std::abs(r.roots[1]) ==
          doctest::Approx(std::abs(r.roots[2])).epsilon(1e-12));
    // Conjugate closure is exact, not approximate.
    CHECK(r.roots[1] == std::conj(r.roots[2]));
    CHECK_FALSE(r.any_clustered());
    for (double res : r.residuals)
        CHECK(res <= 1e-9);
}

TEST_CASE("every in-disk root respects |z| <= z*") {
    for (const auto& d :
         {fixtures::simple_walk(), fixtures::deep_loss(), fixtures::prize_game(),
          fixtures::near_double()}) {
        const auto r = find_disk_roots(d);
        for (const cd& z : r.roots)
            CHECK(std::abs(z) <= r.z_star + 1e-9);
    }
}

TEST_CASE("near-coincident pair is found and flagged clustered") {
    const auto r = find_disk_roots(fixtures::near_double());
    REQUIRE(r.count() == 3);
    CHECK(std::abs(r.roots[0] - cd(fixtures::kNearDoubleRootReal, 0.0)) <=
          1e-7);
    CHECK(r.cluster_flags[0] == 0);
    // The pair: both within a couple of microns of the common point, both
    // flagged, regardless of whether they resolved as real or conjugate.
    for (int i : {1, 2}) {
        CHECK(std::abs(r.roots[static_cast<std::size_t>(i)] -
                       cd(fixtures::kNearDoublePairRe, 0.0)) <= 2e-6);
        CHECK(r.cluster_flags[static_cast<std::size_t>(i)] == 1);
    }
    CHECK(r.any_clustered());
}

TEST_CASE("padding the equation degree leaves the root set unchanged") {
    const auto d = fixtures::deep_loss();
    const auto base = find_disk_roots(d);
    const auto padded = find_disk_roots(d, RootOptions{},
                                        d.max_gain() + d.max_loss() + 7);
    REQUIRE(padded.count() == base.count());
    for (int i = 0; i < base.count(); ++i)
        CHECK(std::abs(padded.roots[static_cast<std::size_t>(i)] -
                       base.roots[static_cast<std::size_t>(i)]) <= 1e-12);
}

TEST_CASE("winding count agrees with the root count") {
    CHECK(winding_root_count(fixtures::simple_walk()) == 1);
    CHECK(winding_root_count(fixtures::skip_walk()) == 1);
    CHECK(winding_root_count(fixtures::deep_loss()) == 2);
    CHECK(winding_root_count(fixtures::near_double()) == 3);
    CHECK(winding_root_count(fixtures::prize_game()) == 3);
}

TEST_CASE("winding count over an explicit radius") {
    // Radius 0.5 encloses only the small pair of the benchmark game
    // (|pair| ~ 0.299), not z* ~ 0.993.
    CHECK(winding_root_count(fixtures::prize_game(), 0.5) == 2);
}

TEST_CASE("malformed root options are rejected") {
    RootOptions bad;
    bad.residual_tol = 0.0;
    CHECK_THROWS_AS((void)find_disk_roots(fixtures::simple_walk(), bad),
                    InvalidArgument);
    bad = RootOptions{};
    bad.max_sweeps = 0;
    CHECK_THROWS_AS((void)find_disk_roots(fixtures::simple_walk(), bad),
                    InvalidArgument);
}

TEST_CASE("root finding needs a winning outcome") {
    // All mass on losses: p(z) = 1 has no in-disk roots to find, and the
    // game is unfavorable anyway.
    CHECK_THROWS_AS((void)find_disk_roots(fixtures::table({{-1, 1.0}})),
                    NoInteriorRoot);
}
