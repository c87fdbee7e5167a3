#include <doctest.h>

#include <cstring>
#include <random>

#include "oracles.hpp"
#include "tunnelkit/barriers.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"

using namespace tunnelkit;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("barriers") {
  TEST_CASE("SN with zero image coefficient is the triangular barrier bit for bit") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> phi(1.0, 8.0), F(0.5, 15.0), u(0.0, 1.0);
    bool all_same = true;
    for (int i = 0; i < 1000000; ++i) {
      const double p = phi(rng), f = F(rng);
      const double z = u(rng) * 2.0 * p / f;
      all_same &= same_bits(motive_energy(schottky_nordheim(p, f, 0.0), z), motive_energy(triangular(p, f), z));
    }
    CHECK(all_same);
    const auto g1 = barrier_geometry(schottky_nordheim(4.5, 3.0, 0.0));
    const auto g2 = barrier_geometry(triangular(4.5, 3.0));
    CHECK(same_bits(g1.z2, g2.z2));
  }

  TEST_CASE("SN zeros are zeros and the peak is a maximum") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phi(2.0, 6.0), F(0.5, 10.0);
    for (int i = 0; i < 2000; ++i) {
      const auto p = schottky_nordheim(phi(rng), F(rng));
      const auto g = barrier_geometry(p);
      if (g.vanished) {
        CHECK(p.field >= reference_field(p) * (1 - 1e-12));
        continue;
      }
      CHECK(std::fabs(motive_energy(p, g.z1)) < 1e-10);
      CHECK(std::fabs(motive_energy(p, g.z2)) < 1e-10);
      CHECK(g.z1 < g.z_peak);
      CHECK(g.z_peak < g.z2);
      CHECK(g.z_peak == doctest::Approx(std::sqrt(oracle::image_B() / p.field)).epsilon(1e-12));
      CHECK(g.M_peak == doctest::Approx(p.height - 2.0 * std::sqrt(oracle::image_B() * p.field)).epsilon(1e-12));
      for (double d : {1e-3, 1e-2}) {
        CHECK(motive_energy(p, g.z_peak * (1 + d)) < g.M_peak);
        CHECK(motive_energy(p, g.z_peak * (1 - d)) < g.M_peak);
      }
    }
  }

  TEST_CASE("zeros at a nonzero energy") {
    const auto p = schottky_nordheim(4.5, 4.0);
    const auto g = barrier_geometry(p, -0.7);
    CHECK(std::fabs(motive_energy(p, g.z1) + 0.7) < 1e-10);
    CHECK(std::fabs(motive_energy(p, g.z2) + 0.7) < 1e-10);
  }

  TEST_CASE("Schottky lowering and reference field") {
    const auto p = schottky_nordheim(4.5, 5.0);
    CHECK(schottky_reduction(p) == doctest::Approx(2.0 * std::sqrt(oracle::image_B() * 5.0)).epsilon(1e-14));
    CHECK(reference_field(p) == doctest::Approx(14.06284622).epsilon(1e-9));
    const double cS = units::schottky_constant();
    CHECK(reference_field(p) == doctest::Approx(4.5 * 4.5 / (cS * cS)).epsilon(1e-13));
  }

  TEST_CASE("numeric vanishing field matches the closed forms") {
    const double sn = vanishing_field_numeric(schottky_nordheim(4.5, 1.0), 30.0, 1e-9);
    CHECK(std::fabs(sn - 4.5 * 4.5 / (4.0 * oracle::image_B())) < 1e-6);
    const auto h = hydrogenic_axial(13.606, 1.0, 1.0, ImagePlacement::None, 0.0);
    const double threshold = 13.606 * 13.606 / (4.0 * oracle::coulomb_k());
    CHECK(threshold == doctest::Approx(32.14).epsilon(1e-3));
    CHECK(std::fabs(vanishing_field_numeric(h, 60.0, 1e-9) - threshold) < 1e-6);
    CHECK(reference_field(h) == doctest::Approx(threshold).epsilon(1e-13));
  }

  TEST_CASE("hydrogenic geometry with image placements") {
    for (auto pl : {ImagePlacement::ElectronCentroid, ImagePlacement::NucleusOpposite}) {
      const auto p = hydrogenic_axial(24.587, 1.344, 44.0, pl, 0.4565);
      const auto g = barrier_geometry(p);
      REQUIRE_FALSE(g.vanished);
      CHECK(std::fabs(motive_energy(p, g.z1)) < 1e-10);
      CHECK(std::fabs(motive_energy(p, g.z2)) < 1e-10);
      CHECK(g.z2 < domain_end(p));
      CHECK(motive_energy(p, g.z_peak) == doctest::Approx(g.M_peak).epsilon(1e-12));
      // The image term lowers the barrier relative to no image.
      const auto none = barrier_geometry(hydrogenic_axial(24.587, 1.344, 44.0, ImagePlacement::None, 0.0));
      CHECK(g.M_peak < none.M_peak);
    }
  }

  TEST_CASE("zero image coefficient makes every placement identical to none") {
    auto base = hydrogenic_axial(24.587, 1.344, 44.0, ImagePlacement::None, 0.0);
    for (auto pl : {ImagePlacement::ElectronCentroid, ImagePlacement::NucleusOpposite}) {
      auto p = hydrogenic_axial(24.587, 1.344, 44.0, pl, 0.4565);
      p.image_coefficient = 0.0;
      for (double z : {0.05, 0.1, 0.3, 0.9, 5.0}) CHECK(same_bits(motive_energy(p, z), motive_energy(base, z)));
      const auto a = barrier_geometry(p), b = barrier_geometry(base);
      CHECK(same_bits(a.z1, b.z1));
      CHECK(same_bits(a.z2, b.z2));
    }
  }

  TEST_CASE("rectangular and straight-line-equivalent geometry") {
    const auto r = rectangular(2.0, 0.5);
    CHECK(motive_energy(r, 0.25) == 2.0);
    CHECK(motive_energy(r, 0.6) == 0.0);
    CHECK(barrier_geometry(r, 0.5).z2 == 0.5);
    CHECK(barrier_geometry(rectangular(2.0, 0.0)).vanished);
    CHECK(barrier_geometry(r, 2.5).vanished);
    const auto s = straight_line_equivalent(3.0, 1.2);
    CHECK(motive_energy(s, 0.6) == doctest::Approx(1.5));
    CHECK(barrier_geometry(s, 1.0).z2 == doctest::Approx(0.8));
    CHECK_THROWS_AS(barrier_geometry(s, -1.0), DomainError);
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(schottky_nordheim(-1.0, 3.0), DomainError);
    CHECK_THROWS_AS(schottky_nordheim(4.5, -3.0), DomainError);
    CHECK_THROWS_AS(rectangular(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(straight_line_equivalent(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(hydrogenic_axial(13.6, 0.0, 10.0, ImagePlacement::None, 0.0), DomainError);
    CHECK_THROWS_AS(hydrogenic_axial(13.6, 1.0, 10.0, ImagePlacement::ElectronCentroid, 0.0), DomainError);
    CHECK_THROWS_AS(motive_energy(schottky_nordheim(4.5, 3.0), 0.0), DomainError);
    CHECK_THROWS_AS(barrier_geometry(triangular(4.5, 0.0)), DomainError);
  }

  TEST_CASE("key-value records round-trip") {
    const auto p = hydrogenic_axial(24.587, 1.344, 44.0, ImagePlacement::NucleusOpposite, 0.4565);
    const auto q = from_record(to_record(p));
    CHECK(q.kind == p.kind);
    CHECK(q.height == p.height);
    CHECK(q.field == p.field);
    CHECK(q.image_coefficient == p.image_coefficient);
    CHECK(q.charge_number == p.charge_number);
    CHECK(q.placement == p.placement);
    CHECK(q.surface_distance == p.surface_distance);
    KeyValueRecord bad{{"kind", "sn"}, {"height_param", "4.5"}, {"F", "3"}, {"colour", "red"}};
    CHECK_THROWS_AS(from_record(bad), DomainError);
    CHECK_THROWS_AS(parse_barrier_kind("parabolic"), DomainError);
    CHECK(parse_image_placement("nucleus_opposite") == ImagePlacement::NucleusOpposite);
  }
}
