#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "ruincalc/errors.hpp"
#include "ruincalc/payoff.hpp"

#include "fixtures.hpp"

using namespace ruincalc;

TEST_CASE("table realization: support, probabilities, moments") {
    const auto d = fixtures::table({{-1, 0.4}, {1, 0.6}});
    CHECK(d.max_loss() == 1);
    CHECK(d.max_gain() == 1);
    CHECK(d.prob(-1) == 0.4);
    CHECK(d.prob(1) == 0.6);
    CHECK(d.prob(0) == 0.0);
    CHECK(d.prob(-7) == 0.0);
    CHECK(d.prob(7) == 0.0);
    CHECK(d.mean() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(d.variance() == doctest::Approx(0.96).epsilon(1e-14));
    CHECK(d.favorable());
    CHECK_FALSE(d.truncated());
    CHECK(d.tail_mass_bound() == 0.0);
    REQUIRE(d.finite_upper_support().has_value());
    CHECK(*d.finite_upper_support() == 1);
}

TEST_CASE("table realization: gaps in the support stay zero") {
    const auto d = fixtures::table({{-2, 0.3}, {2, 0.7}});
    CHECK(d.max_loss() == 2);
    CHECK(d.max_gain() == 2);
    CHECK(d.prob(-1) == 0.0);
    CHECK(d.prob(0) == 0.0);
    CHECK(d.prob(1) == 0.0);
    const auto c = d.shifted_coeffs();
    REQUIRE(c.size() == 5);
    CHECK(c[0] == 0.3);
    CHECK(c[4] == 0.7);
}

TEST_CASE("table realization: explicit zero entries are dropped") {
    const auto d = fixtures::table({{-1, 0.4}, {0, 0.0}, {1, 0.6}, {5, 0.0}});
    CHECK(d.max_gain() == 1);
    CHECK(d.shifted_coeffs().size() == 3);
}

TEST_CASE("two_point spec realization") {
    const auto d = PayoffDistribution::build(TwoPointSpec{2, 3, 0.45});
    CHECK(d.max_loss() == 2);
    CHECK(d.max_gain() == 3);
    CHECK(d.prob(-2) == 0.45);
    CHECK(d.prob(3) == 0.55);
    CHECK(d.mean() == doctest::Approx(-0.9 + 1.65).epsilon(1e-14));
}

TEST_CASE("poisson prize realization: truncated tail is tracked") {
    const auto d = fixtures::prize_game();
    CHECK(d.max_loss() == 3);
    CHECK(d.truncated());
    CHECK_FALSE(d.finite_upper_support().has_value());
    CHECK(d.tail_mass_bound() <= kDefaultTailTol);
    CHECK(d.tail_mass_bound() >= 0.0);
    // Net mean is epsilon up to the dropped tail.
    CHECK(d.mean() == doctest::Approx(0.01).epsilon(1e-9));
    // p_k = Poisson(3.01) pmf at k + 3.
    CHECK(d.prob(-3) == doctest::Approx(std::exp(-3.01)).epsilon(1e-14));
    CHECK(d.prob(0) ==
          doctest::Approx(std::exp(-3.01) * 3.01 * 3.01 * 3.01 / 6.0)
              .epsilon(1e-13));
    // The independently computed interior root satisfies p(z) = 1.
    CHECK(std::abs(d.evaluate_p(fixtures::kPrizeZStar) - 1.0) <= 1e-10);
}

TEST_CASE("poisson prize: coarser tail tolerance gives a shorter table") {
    const auto fine = fixtures::prize_game();
    const auto coarse =
        PayoffDistribution::build(PoissonPrizeSpec{3, 0.01}, 1e-8);
    CHECK(coarse.max_gain() < fine.max_gain());
    CHECK(coarse.tail_mass_bound() <= 1e-8);
    CHECK(coarse.tail_mass_bound() > fine.tail_mass_bound());
}

TEST_CASE("h coefficients: h(z) = z^nu p(z) and padding changes nothing") {
    const auto d = fixtures::near_double();
    const int nu = d.max_loss();
    const auto h = d.h_coefficients(d.max_gain() + nu);
    const std::complex<double> grid[] = {{0.7, 0.0}, {0.3, 0.4}, {-0.9, 0.1}};
    for (const auto z : grid) {
        std::complex<double> hz = 0.0;
        for (std::size_t i = h.size(); i-- > 0;)
            hz = hz * z + h[i];
        const auto expected = std::pow(z, nu) * d.evaluate_p(z);
        CHECK(std::abs(hz - expected) <= 1e-14);
    }

    const auto padded = d.h_coefficients(d.max_gain() + nu + 5);
    REQUIRE(padded.size() == h.size() + 5);
    for (std::size_t i = 0; i < h.size(); ++i)
        CHECK(padded[i] == h[i]);
    for (std::size_t i = h.size(); i < padded.size(); ++i)
        CHECK(padded[i] == 0.0);

    CHECK_THROWS_AS((void)d.h_coefficients(d.max_gain() + nu - 1),
                    DegreeTooSmall);
}

TEST_CASE("evaluate_p: pole at zero, agreement between overloads") {
    const auto d = fixtures::simple_walk();
    CHECK_THROWS_AS((void)d.evaluate_p(0.0), ZeroArgument);
    CHECK_THROWS_AS((void)d.evaluate_p(std::complex<double>(0.0, 0.0)),
                    ZeroArgument);
    CHECK_THROWS_AS((void)d.evaluate_p_derivative(0.0), ZeroArgument);
    // p(x) = 0.4/x + 0.6 x; p(2) = 1.4; p'(x) = -0.4/x^2 + 0.6.
    CHECK(d.evaluate_p(2.0) == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(d.evaluate_p(std::complex<double>(2.0, 0.0)).real() ==
          doctest::Approx(1.4).epsilon(1e-15));
    CHECK(d.evaluate_p_derivative(2.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("validation: rejected tables") {
    CHECK_THROWS_AS((void)fixtures::table({{-1, 0.5}, {1, -0.5}}),
                    NegativeProbability);
    CHECK_THROWS_AS((void)fixtures::table({{-1, 0.5}, {1, 0.6}}), MassNotOne);
    CHECK_THROWS_AS((void)fixtures::table({{0, 0.5}, {1, 0.5}}),
                    ZeroFloorMass);
    CHECK_THROWS_AS((void)fixtures::table({{-1, 0.0}, {1, 1.0}}),
                    ZeroFloorMass);
    // An empty table fails the mass check before anything else.
    CHECK_THROWS_AS((void)PayoffDistribution::build(TableSpec{}), MassNotOne);
    const double nan = std::nan("");
    CHECK_THROWS_AS((void)fixtures::table({{-1, nan}, {1, 0.5}}),
                    NegativeProbability);
}

TEST_CASE("validation: rejected family parameters") {
    CHECK_THROWS_AS((void)PayoffDistribution::build(TwoPointSpec{0, 1, 0.5}),
                    InvalidArgument);
    CHECK_THROWS_AS((void)PayoffDistribution::build(TwoPointSpec{1, -1, 0.5}),
                    InvalidArgument);
    CHECK_THROWS_AS((void)PayoffDistribution::build(TwoPointSpec{1, 1, 1.5}),
                    InvalidArgument);
    CHECK_THROWS_AS((void)PayoffDistribution::build(PoissonPrizeSpec{0, 0.01}),
                    InvalidArgument);
    CHECK_THROWS_AS((void)PayoffDistribution::build(PoissonPrizeSpec{1, -2.0}),
                    InvalidArgument);
    // tail_tol outside [0, 1e-6]
    CHECK_THROWS_AS(
        (void)PayoffDistribution::build(PoissonPrizeSpec{3, 0.01}, 1e-3),
        InvalidArgument);
    CHECK_THROWS_AS(
        (void)PayoffDistribution::build(PoissonPrizeSpec{3, 0.01}, -1e-9),
        InvalidArgument);
}

TEST_CASE("describe names the family and its parameters") {
    CHECK(describe(PoissonPrizeSpec{3, 0.01}) ==
          "poisson_prize(nu=3, epsilon=0.01)");
    CHECK(describe(TwoPointSpec{2, 3, 0.45}) ==
          "two_point(nu=2, mu=3, p_loss=0.45)");
    TableSpec t;
    t.entries = {{-1, 0.4}, {2, 0.6}};
    CHECK(describe(t) == "table(2 entries in -1..2)");
}

TEST_CASE("spec parsing: the three families round-trip") {
    const auto tab = parse_spec_json(
        R"({"type": "table", "entries": {"-1": 0.4, "1": 0.6}})");
    REQUIRE(std::holds_alternative<TableSpec>(tab));
    CHECK(std::get<TableSpec>(tab).entries.at(-1) == 0.4);
    CHECK(std::get<TableSpec>(tab).entries.at(1) == 0.6);

    const auto pz = parse_spec_json(
        R"({"type": "poisson_prize", "nu": 3, "epsilon": 0.01})");
    REQUIRE(std::holds_alternative<PoissonPrizeSpec>(pz));
    CHECK(std::get<PoissonPrizeSpec>(pz).nu == 3);
    CHECK(std::get<PoissonPrizeSpec>(pz).epsilon == 0.01);

    const auto tp = parse_spec_json(
        R"({"type": "two_point", "nu": 2, "mu": 3, "p_loss": 0.45})");
    REQUIRE(std::holds_alternative<TwoPointSpec>(tp));
    CHECK(std::get<TwoPointSpec>(tp).nu == 2);
    CHECK(std::get<TwoPointSpec>(tp).mu == 3);
    CHECK(std::get<TwoPointSpec>(tp).p_loss == 0.45);
}

TEST_CASE("spec parsing: malformed input fails with SpecParseError") {
    CHECK_THROWS_AS((void)parse_spec_json("not json"), SpecParseError);
    CHECK_THROWS_AS((void)parse_spec_json("[1,2]"), SpecParseError);
    CHECK_THROWS_AS((void)parse_spec_json(R"({"entries": {}})"),
                    SpecParseError);
    CHECK_THROWS_AS((void)parse_spec_json(R"({"type": "zeta"})"),
                    SpecParseError);
    CHECK_THROWS_AS(
        (void)parse_spec_json(R"({"type": "table", "entries": {"x": 0.5}})"),
        SpecParseError);
    CHECK_THROWS_AS(
        (void)parse_spec_json(R"({"type": "table", "entries": {"1": "p"}})"),
        SpecParseError);
    CHECK_THROWS_AS(
        (void)parse_spec_json(R"({"type": "poisson_prize", "nu": 2.5})"),
        SpecParseError);
    CHECK_THROWS_AS(
        (void)parse_spec_json(R"({"type": "two_point", "nu": 1, "mu": 1})"),
        SpecParseError);
}

TEST_CASE("spec parsing: file round-trip and missing-file error") {
    namespace fs = std::filesystem;
    const fs::path p =
        fs::temp_directory_path() / "ruincalc_payoff_test_spec.json";
    {
        std::ofstream out(p);
        out << R"({"type": "two_point", "nu": 1, "mu": 2, "p_loss": 0.3})";
    }
    const auto spec = parse_spec_file(p.string());
    REQUIRE(std::holds_alternative<TwoPointSpec>(spec));
    CHECK(std::get<TwoPointSpec>(spec).mu == 2);
    fs::remove(p);

    CHECK_THROWS_AS((void)parse_spec_file((p / "nowhere").string()),
                    SpecParseError);
}
