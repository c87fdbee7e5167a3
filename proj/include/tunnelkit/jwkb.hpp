#pragma once

// First-order JWKB tunnelling: D = exp(-G) with the Gamow exponent
//   G = (8 m_e / hbar^2)^{1/2} * integral_{z1}^{z2} (M(z) - energy)^{1/2} dz.

#include "tunnelkit/barriers.hpp"

namespace tunnelkit {

enum class Direction { LeftToRight, RightToLeft };
enum class Method { Jwkb, Exact };

std::string_view to_string(Direction d);
std::string_view to_string(Method m);
Direction parse_direction(std::string_view name);

struct GamowResult {
  double G = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  bool vanished = false;
  double abs_error = 0.0;  // quadrature error estimate on G
};

struct TransmissionResult {
  double G = 0.0;
  double D = 1.0;
  double z1 = 0.0;
  double z2 = 0.0;
  bool vanished = false;
  Method method = Method::Jwkb;
  Direction direction = Direction::LeftToRight;
};

/// (8 m_e / hbar^2)^{1/2} in eV^{-1/2} nm^{-1}.
double jwkb_prefactor();

/// Gamow exponent at `energy_offset` above the profile's reference level.
/// The substitution z = z1 + (z2 - z1) sin^2(theta) removes the square-root
/// zeros at both ends before adaptive Gauss-Kronrod quadrature (relative
/// tolerance 1e-12). A vanished barrier gives G = 0 with `vanished` set; an
/// electron above the peak is treated the same way.
GamowResult gamow_exponent(const BarrierProfile& profile, double energy_offset = 0.0);

/// D = exp(-G). The integral does not depend on the side the electron comes
/// from, so the same number is returned for both directions; the tag is
/// carried for bookkeeping only.
TransmissionResult transmission(const BarrierProfile& profile, double energy_offset = 0.0,
                                Direction direction = Direction::LeftToRight);

}  // namespace tunnelkit
