#include "tunnelkit/jwkb.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/numerics.hpp"

namespace tunnelkit {

std::string_view to_string(Direction d) {
  return d == Direction::LeftToRight ? "L->R" : "R->L";
}

std::string_view to_string(Method m) {
  return m == Method::Jwkb ? "jwkb" : "exact";
}

Direction parse_direction(std::string_view name) {
  if (name == "ltr" || name == "L->R" || name == "left_to_right") return Direction::LeftToRight;
  if (name == "rtl" || name == "R->L" || name == "right_to_left") return Direction::RightToLeft;
  throw DomainError("unknown direction '" + std::string(name) + "' (expected ltr or rtl)");
}

double jwkb_prefactor() { return 2.0 * units::kappa_coefficient(); }

GamowResult gamow_exponent(const BarrierProfile& profile, double energy_offset) {
  const BarrierGeometry geom = barrier_geometry(profile, energy_offset);
  GamowResult out;
  out.z1 = geom.z1;
  out.z2 = geom.z2;
  if (geom.vanished || geom.z2 <= geom.z1) {
    out.vanished = true;
    return out;
  }

  const double span = geom.z2 - geom.z1;
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double z = geom.z1 + span * s * s;
    // Rounding can push M a hair below zero right at the turning points.
    const double m = std::max(0.0, motive_energy(profile, z) - energy_offset);
    return std::sqrt(m) * 2.0 * span * s * c;
  };
  const auto q = numerics::integrate(integrand, 0.0, 0.5 * std::numbers::pi, 1e-12, 1e-14);
  out.G = jwkb_prefactor() * q.value;
  out.abs_error = jwkb_prefactor() * q.abs_error;
  return out;
}

TransmissionResult transmission(const BarrierProfile& profile, double energy_offset, Direction direction) {
  const GamowResult g = gamow_exponent(profile, energy_offset);
  TransmissionResult r;
  r.G = g.G;
  r.D = std::exp(-g.G);
  r.z1 = g.z1;
  r.z2 = g.z2;
  r.vanished = g.vanished;
  r.method = Method::Jwkb;
  r.direction = direction;
  return r;
}

}  // namespace tunnelkit
