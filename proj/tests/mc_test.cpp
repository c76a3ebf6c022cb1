#include <cmath>

#include <doctest.h>

#include "ruincalc/errors.hpp"
#include "ruincalc/oracles.hpp"

#include "fixtures.hpp"

using namespace ruincalc;

TEST_CASE("mc: sure-loss game is ruined on every path") {
    const auto d = fixtures::table({{-1, 1.0}});
    McOptions opts;
    opts.n_paths = 500;
    const auto res = mc_ruin(d, 5, opts);
    CHECK(res.estimate == 1.0);
    CHECK(res.ruined == 500);
    // The Agresti-Coull width stays positive even with every path ruined.
    CHECK(res.ci_halfwidth > 0.0);
    CHECK(res.ci_halfwidth < 0.01);
    CHECK(res.censored_fraction == 0.0);
    CHECK(res.ceiling == -1); // unfavorable: no safe ceiling exists
}

TEST_CASE("mc: wealth below the band is immediate ruin") {
    McOptions opts;
    opts.n_paths = 100;
    const auto res = mc_ruin(fixtures::deep_loss(), 1, opts);
    CHECK(res.estimate == 1.0);
    CHECK(res.ruined == 100);
}

TEST_CASE("mc: simple walk estimate brackets the closed form") {
    McOptions opts;
    opts.n_paths = 200000;
    opts.seed = 42;
    const auto res = mc_ruin(fixtures::simple_walk(), 5, opts);
    const double exact = std::pow(2.0 / 3.0, 5);
    CHECK(res.n_paths == 200000);
    CHECK(res.ruined + res.reached_ceiling == 200000); // none censored
    CHECK(res.censored_fraction == 0.0);
    CHECK(std::abs(res.estimate - exact) <=
          3.0 * res.ci_halfwidth + res.ceiling_bias_bound);
    CHECK(res.ci_halfwidth > 0.0);
    CHECK(res.ci_halfwidth < 3e-3);
}

TEST_CASE("mc: favorable games get a finite ceiling with a bias bound") {
    McOptions opts;
    opts.n_paths = 1000;
    opts.ruin_neglect = 1e-6;
    const auto res = mc_ruin(fixtures::simple_walk(), 5, opts);
    // ceiling = nu - 1 + ceil(ln 1e-6 / ln (2/3)) = 0 + 35.
    CHECK(res.ceiling == 35);
    CHECK(res.ceiling_bias_bound == 1e-6);

    // A start at or above the ceiling is counted safe without simulation.
    McOptions high = opts;
    const auto safe = mc_ruin(fixtures::simple_walk(), 40, high);
    CHECK(safe.estimate == 0.0);
    CHECK(safe.reached_ceiling == 1000);
}

TEST_CASE("mc: identical results for any thread count") {
    McOptions a;
    a.n_paths = 30000;
    a.seed = 7;
    a.threads = 1;
    McOptions b = a;
    b.threads = 4;
    McOptions c = a;
    c.threads = 13;
    const auto ra = mc_ruin(fixtures::deep_loss(), 4, a);
    const auto rb = mc_ruin(fixtures::deep_loss(), 4, b);
    const auto rc = mc_ruin(fixtures::deep_loss(), 4, c);
    CHECK(ra.ruined == rb.ruined);
    CHECK(ra.ruined == rc.ruined);
    CHECK(ra.reached_ceiling == rb.reached_ceiling);
    CHECK(ra.estimate == rb.estimate);
    CHECK(ra.estimate == rc.estimate);
}

TEST_CASE("mc: seed changes the draw, path count beats thread count") {
    McOptions a;
    a.n_paths = 20000;
    a.seed = 1;
    McOptions b = a;
    b.seed = 2;
    const auto ra = mc_ruin(fixtures::deep_loss(), 4, a);
    const auto rb = mc_ruin(fixtures::deep_loss(), 4, b);
    CHECK(ra.ruined != rb.ruined); // astronomically unlikely to collide

    McOptions tiny;
    tiny.n_paths = 3;
    tiny.threads = 16; // clamped to n_paths
    const auto rt = mc_ruin(fixtures::deep_loss(), 4, tiny);
    CHECK(rt.n_paths == 3);
    CHECK(rt.ruined + rt.reached_ceiling +
              static_cast<std::int64_t>(std::llround(
                  rt.censored_fraction * 3.0)) ==
          3);
}

TEST_CASE("mc: unfavorable game estimates certain ruin") {
    McOptions opts;
    opts.n_paths = 20000;
    const auto res = mc_ruin(fixtures::table({{-1, 0.7}, {1, 0.3}}), 6, opts);
    CHECK(res.estimate == 1.0);
    CHECK(res.ceiling == -1);
}

TEST_CASE("mc: t_cap censoring is reported, not hidden") {
    McOptions opts;
    opts.n_paths = 2000;
    opts.t_cap = 3; // from wealth 6 nothing can resolve in three steps
    const auto res = mc_ruin(fixtures::simple_walk(), 6, opts);
    CHECK(res.censored_fraction == 1.0);
    CHECK(res.estimate == 0.0);
}

TEST_CASE("mc: option validation") {
    McOptions opts;
    opts.n_paths = 0;
    CHECK_THROWS_AS((void)mc_ruin(fixtures::simple_walk(), 3, opts),
                    InvalidArgument);
    opts = McOptions{};
    opts.t_cap = 0;
    CHECK_THROWS_AS((void)mc_ruin(fixtures::simple_walk(), 3, opts),
                    InvalidArgument);
    opts = McOptions{};
    opts.ruin_neglect = 1.0;
    CHECK_THROWS_AS((void)mc_ruin(fixtures::simple_walk(), 3, opts),
                    InvalidArgument);
    CHECK_THROWS_AS((void)mc_ruin(fixtures::simple_walk(), -1), InvalidArgument);
}
