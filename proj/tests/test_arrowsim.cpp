#include <doctest.h>

#include <cmath>

#include "tunnelkit/arrowsim.hpp"
#include "tunnelkit/errors.hpp"

using namespace tunnelkit;

namespace {

EnsembleConfig small(std::uint64_t seed = 1) {
  EnsembleConfig c;
  c.n_walkers = 2000;
  c.n_steps = 120;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("arrowsim") {
  TEST_CASE("same seed, same trajectory") {
    const auto a = run_ensemble(small(5));
    const auto b = run_ensemble(small(5));
    REQUIRE(a.size() == b.size());
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same &= a[i].n_left == b[i].n_left;
    CHECK(same);
    const auto c = run_ensemble(small(6));
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].n_left != c[i].n_left;
    CHECK(differs);
  }

  TEST_CASE("generator stream is the standard mt19937_64") {
    Rng r(42);
    std::mt19937_64 ref(42);
    for (int i = 0; i < 100; ++i) CHECK(r.next() == ref());
    Rng u(3);
    for (int i = 0; i < 1000; ++i) {
      const double x = u.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
    }
  }

  TEST_CASE("walkers are conserved and records cover every step") {
    const auto t = run_ensemble(small());
    CHECK(t.size() == 121);
    CHECK(t.front().step == 0);
    CHECK(t.front().n_left == 2000);
    for (const auto& r : t) {
      CHECK(r.n_left + r.n_right == 2000);
      CHECK(r.entropy >= 0.0);
      CHECK(r.entropy <= std::log(2.0) + 1e-15);
      CHECK(r.entropy == doctest::Approx(two_box_entropy(r.f_left)).epsilon(1e-15));
    }
  }

  TEST_CASE("zero crossing probability freezes the ensemble") {
    auto c = small();
    c.D = 0.0;
    for (const auto& r : run_ensemble(c)) CHECK(r.n_left == 2000);
  }

  TEST_CASE("certain crossing swaps every walker each step") {
    auto c = small();
    c.D = 1.0;
    c.initial_left_fraction = 0.25;
    const auto t = run_ensemble(c);
    for (const auto& r : t) CHECK(r.n_left == (r.step % 2 ? 1500 : 500));
  }

  TEST_CASE("occupancy relaxes to an even split and entropy towards ln 2") {
    auto c = small();
    c.n_walkers = 10000;
    c.n_steps = 200;
    const auto t = run_ensemble(c);
    CHECK(std::fabs(t.back().f_left - 0.5) < 0.02);
    const auto trend = entropy_trend(t, 20);
    CHECK(trend.verdict == TrendVerdict::NonDecreasing);
    CHECK(trend.window_means.size() == 10);
    CHECK(trend.window_means.back() > 0.69);
  }

  TEST_CASE("a falling entropy series is flagged") {
    auto t = run_ensemble(small());
    for (auto& r : t) r.entropy = std::log(2.0) * (1.0 - r.step / 120.0);
    CHECK(entropy_trend(t, 10).verdict == TrendVerdict::Other);
  }

  TEST_CASE("stationary entropy spread matches the small-fluctuation estimate") {
    // For f = 1/2 + x with x ~ N(0, 1/(4n)), S ~ ln 2 - 2 x^2, whose SD is 2 sqrt(2) / (4n).
    const int n = 10000;
    CHECK(stationary_entropy_sd(n) == doctest::Approx(2.0 * std::sqrt(2.0) / (4.0 * n)).epsilon(0.01));
    CHECK(stationary_entropy_sd(2) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
  }

  TEST_CASE("binomial start places about the requested fraction") {
    auto c = small();
    c.n_walkers = 20000;
    c.placement = InitialPlacement::Binomial;
    c.initial_left_fraction = 0.3;
    const auto t = run_ensemble(c);
    CHECK(std::fabs(t.front().f_left - 0.3) < 0.015);
  }

  TEST_CASE("a single walker returns often, a large ensemble never") {
    EnsembleConfig one;
    one.n_walkers = 1;
    one.n_steps = 50;
    const auto r1 = reversal_test(one, 1000, 0.01);
    CHECK(r1.return_probability > 0.9);
    CHECK_FALSE(r1.degenerate);

    EnsembleConfig many;
    many.n_walkers = 10000;
    many.n_steps = 100;
    const auto r2 = reversal_test(many, 200, 0.01);
    CHECK(r2.forward_relaxation_probability == 1.0);
    CHECK(r2.returns_observed == 0);
    CHECK(r2.return_upper_bound_mc == doctest::Approx(3.0 / 200));
    CHECK(r2.log10_return_bound_analytic < -100.0);
  }

  TEST_CASE("degenerate configurations are reported") {
    EnsembleConfig c;
    c.n_walkers = 100;
    c.n_steps = 10;
    c.D = 1.0;
    const auto r = reversal_test(c, 20);
    CHECK(r.degenerate);
    CHECK(r.returns_observed == 20);
  }

  TEST_CASE("input checks") {
    auto c = small();
    c.D = 1.5;
    CHECK_THROWS_AS(run_ensemble(c), DomainError);
    c = small();
    c.n_walkers = 0;
    CHECK_THROWS_AS(run_ensemble(c), DomainError);
    CHECK_THROWS_AS(reversal_test(small(), 10, 0.7), DomainError);
    CHECK_THROWS_AS(entropy_trend(run_ensemble(small()), 0), DomainError);
  }
}
