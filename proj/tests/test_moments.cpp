#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sisclosure/errors.hpp"
#include "sisclosure/moments.hpp"

using namespace sisclosure;

namespace {
bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
} // namespace

TEST_CASE("moments of simple distributions") {
    const auto full = ProbabilityVector::point_mass(10, 10);
    const auto empty = ProbabilityVector::point_mass(10, 0);
    for (int j = 1; j <= 3; ++j) {
        CHECK(moment_from_distribution(full, j) == doctest::Approx(1.0));
        CHECK(moment_from_distribution(empty, j) == 0.0);
    }

    const ProbabilityVector binom{oracle::binomial_pmf(10, 0.5), 0.0};
    CHECK(raw_moment_from_distribution(binom, 1) == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(raw_moment_from_distribution(binom, 2) == doctest::Approx(27.5).epsilon(1e-13));
    CHECK(raw_moment_from_distribution(binom, 3) == doctest::Approx(162.5).epsilon(1e-13));

    const auto m = moments_from_distribution(binom);
    CHECK(m.raw1() == doctest::Approx(5.0));
    CHECK(m.raw2() == doctest::Approx(27.5));
    CHECK_NOTHROW(m.validate());
    CHECK_THROWS_AS(raw_moment_from_distribution(binom, 0), ParameterError);
}

TEST_CASE("moment validity region") {
    CHECK_THROWS_AS((MomentState{1.2, 1.0, 10}.validate()), ParameterError);
    CHECK_THROWS_AS((MomentState{0.5, 0.2, 10}.validate()), ParameterError);  // y2 < y1^2
    CHECK_THROWS_AS((MomentState{0.5, 0.6, 10}.validate()), ParameterError);  // y2 > y1
    CHECK_NOTHROW((MomentState{0.5, 0.25, 10}.validate()));
}

TEST_CASE("pairwise counts from moments") {
    const int N = 40;
    SUBCASE("all infected") {
        const auto c = pairwise_from_moments(1.0, 1.0, 1.0, N);
        CHECK(c.SI == doctest::Approx(0.0));
        CHECK(c.SS == doctest::Approx(0.0));
        CHECK(c.II == doctest::Approx(N * (N - 1.0)));
        CHECK(c.ISI == doctest::Approx(0.0));
    }
    SUBCASE("all susceptible") {
        const auto c = pairwise_from_moments(0.0, 0.0, 0.0, N);
        CHECK(c.I == 0.0);
        CHECK(c.SS == doctest::Approx(N * (N - 1.0)));
        CHECK(c.SI == 0.0);
        CHECK(c.II == 0.0);
        CHECK(c.SSI == 0.0);
        CHECK(c.ISI == 0.0);
    }
    SUBCASE("point mass N = 4, k = 2 against direct counting") {
        const auto c = pairwise_from_moments(0.5, 0.25, 0.125, 4);
        CHECK(c.SI == doctest::Approx(4.0));
        CHECK(c.SSI == doctest::Approx(4.0));
        CHECK(c.ISI == doctest::Approx(4.0));
    }
}

TEST_CASE("translation consistency for random distributions") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int N : {3, 10, 57, 300}) {
        for (int trial = 0; trial < 20; ++trial) {
            ProbabilityVector p{std::vector<double>(static_cast<std::size_t>(N) + 1), 0.0};
            double total = 0.0;
            for (double& x : p.p) total += (x = u(rng));
            for (double& x : p.p) x /= total;

            const auto direct = pairwise_from_distribution(p);
            const auto via = pairwise_from_moments(moment_from_distribution(p, 1),
                                                   moment_from_distribution(p, 2),
                                                   moment_from_distribution(p, 3), N);
            const double scale = static_cast<double>(N) * N * N;
            CHECK(std::abs(direct.I - via.I) <= 1e-9 * N);
            CHECK(std::abs(direct.SI - via.SI) <= 1e-9 * scale / N);
            CHECK(std::abs(direct.II - via.II) <= 1e-9 * scale / N);
            CHECK(std::abs(direct.SS - via.SS) <= 1e-9 * scale / N);
            CHECK(std::abs(direct.SSI - via.SSI) <= 1e-9 * scale);
            CHECK(std::abs(direct.ISI - via.ISI) <= 1e-9 * scale);

            const PairwiseState pairs{via.I, via.SI, via.II, via.SS};
            CHECK(std::abs(pairs.pair_conservation_residual(N)) <= 1e-8 * N * N);
        }
    }
}

TEST_CASE("classic triple closure") {
    CHECK(classic_triple_closure(0.0, 3.0, 2.0, 10).value == 0.0);
    CHECK(classic_triple_closure(4.0, 4.0, 2.0, 4).value == doctest::Approx(16.0 / 3.0));
    CHECK(classic_triple_closure(1.0, 1.0, 1.0, 1'000'000).value ==
          doctest::Approx(1.0).epsilon(1e-6));
    const auto degenerate = classic_triple_closure(1.0, 1.0, 0.0, 10);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.value == 0.0);
}

TEST_CASE("classic closure in moment form") {
    CHECK(classic_closure_y3(0.0, 0.0, 50).value == 0.0);
    // Frozen from the SSI-closure route evaluated in 40-digit arithmetic.
    CHECK(classic_closure_y3(0.5, 0.3, 100).value ==
          doctest::Approx(0.21880808080808081).epsilon(1e-14));
    const auto all_infected = classic_closure_y3(1.0, 1.0, 50);
    CHECK(all_infected.degenerate);
    CHECK(all_infected.value == 1.0);

    // Closing SSI or ISI directly and via y3 must agree.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 3 + static_cast<int>(u(rng) * 500);
        const double y1 = u(rng);
        const double y2 = y1 * y1 + u(rng) * (y1 - y1 * y1);
        const double y3 = classic_closure_y3(y1, y2, N).value;
        const auto c = pairwise_from_moments(y1, y2, y3, N);
        const double ssi = classic_triple_closure(c.SS, c.SI, c.S, N).value;
        const double isi = classic_triple_closure(c.SI, c.SI, c.S, N).value;
        const double scale = static_cast<double>(N) * N * N;
        CHECK(std::abs(c.SSI - ssi) <= 1e-9 * scale);
        CHECK(std::abs(c.ISI - isi) <= 1e-9 * scale);
    }
}

TEST_CASE("pair closures") {
    CHECK(pair_closure_y2(0.0) == 0.0);
    CHECK(pair_closure_y2(1.0) == 1.0);
    CHECK(pair_closure_y2(0.3) == doctest::Approx(0.09));
    CHECK(limiting_pair_closure_y2(1.0, 37) == doctest::Approx(1.0));
    CHECK(limiting_pair_closure_y2(0.5, 100) == doctest::Approx(0.2525));
    CHECK(limiting_pair_closure_y2(0.4, 100'000'000) == doctest::Approx(0.16).epsilon(1e-7));
}

TEST_CASE("binomial fit") {
    const auto fit = binomial_fit(5.0, 27.5);
    CHECK(fit.valid);
    CHECK(fit.p == doctest::Approx(0.5));
    CHECK(fit.n == doctest::Approx(10.0));

    const auto point = binomial_fit(1.0, 1.0);
    CHECK(point.valid);
    CHECK(point.p == doctest::Approx(1.0));
    CHECK(point.n == doctest::Approx(1.0));

    CHECK_FALSE(binomial_fit(0.0, 1.0).valid);
    CHECK_FALSE(binomial_fit(2.0, 6.0).valid);  // variance equals the mean

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> size(1.0, 500.0), prob(0.01, 0.99);
    for (int trial = 0; trial < 500; ++trial) {
        const double n = size(rng), p = prob(rng);
        const auto m = binomial_moments(n, p);
        const auto back = binomial_fit(m.Y1, m.Y2);
        CHECK(back.valid);
        CHECK(close_rel(back.n, n, 1e-9));
        CHECK(close_rel(back.p, p, 1e-12));
    }
}

TEST_CASE("binomial closure") {
    CHECK(binomial_closure_Y3(5.0, 27.5).value == doctest::Approx(162.5));
    CHECK(binomial_closure_Y3(1.0, 1.0).value == doctest::Approx(1.0));
    CHECK(binomial_closure_Y3(0.0, 0.0).degenerate);
    CHECK(binomial_closure_y3(1.0, 1.0, 10).value == doctest::Approx(1.0));
    CHECK(binomial_closure_y3(0.5, 0.275, 10).value == doctest::Approx(0.1625));
    CHECK(binomial_closure_y3(0.0, 0.0, 10).degenerate);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 2 + static_cast<int>(u(rng) * 1000);
        const double y1 = u(rng);
        const double y2 = y1 * y1 + u(rng) * (y1 - y1 * y1);
        const double n = N;
        const double raw = binomial_closure_Y3(n * y1, n * n * y2).value;
        CHECK(close_rel(binomial_closure_y3(y1, y2, N).value, raw / (n * n * n), 1e-12));
    }
}

TEST_CASE("binomial closure is exact on binomial moments") {
    for (int n = 1; n <= 200; ++n) {
        for (int tenth = 1; tenth <= 9; ++tenth) {
            const double p = tenth / 10.0;
            const ProbabilityVector pmf{oracle::binomial_pmf(n, p), 0.0};
            const double Y1 = raw_moment_from_distribution(pmf, 1);
            const double Y2 = raw_moment_from_distribution(pmf, 2);
            const double Y3 = raw_moment_from_distribution(pmf, 3);
            CHECK(close_rel(binomial_closure_Y3(Y1, Y2).value, Y3, 1e-9));
        }
    }
}

TEST_CASE("simplified binomial closure") {
    CHECK(simplified_binomial_closure_y3(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(simplified_binomial_closure_y3(0.0, 0.0) == 0.0);
    CHECK(simplified_binomial_closure_y3(0.5, 0.25) == doctest::Approx(0.125));
}
