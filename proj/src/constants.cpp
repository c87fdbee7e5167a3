#include "tunnelkit/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace tunnelkit {

FieldValue FieldValue::from_magnitude_fe(double F) {
  if (!(F > 0.0)) throw std::invalid_argument("field magnitude must be positive");
  return FieldValue(F, -F);
}

FieldValue FieldValue::from_conventional(double E) {
  if (E == 0.0 || !std::isfinite(E)) throw std::invalid_argument("conventional field must be finite and non-zero");
  return FieldValue(std::fabs(E), E);
}

namespace units {
namespace {
constexpr const PhysicalConstants& c = kCodata2018;
constexpr double pi = std::numbers::pi;
}  // namespace

double image_coefficient() {
  // e^2/(16 pi eps0) in J m, divided by e (J -> eV) and by 1 nm.
  return c.e / (16.0 * pi * c.eps0) / si::kNanometre;
}

double triangular_exponent_b() {
  return 4.0 * std::sqrt(2.0 * c.m_e * c.e) / (3.0 * c.hbar) * si::kNanometre;
}

double schottky_constant() {
  return std::sqrt(c.e / (4.0 * pi * c.eps0) / si::kNanometre);
}

double kappa_coefficient() {
  return std::sqrt(2.0 * c.m_e * c.e) / c.hbar * si::kNanometre;
}

double coulomb_coefficient() {
  return c.e / (4.0 * pi * c.eps0) / si::kNanometre;
}

double well_energy_coefficient() {
  return c.h_P * c.h_P / (8.0 * c.m_e) / c.e / (si::kNanometre * si::kNanometre);
}

}  // namespace units

std::vector<std::string> derived_constant_names() {
  return {"image_coefficient", "triangular_exponent_b", "schottky_constant", "kappa_coefficient"};
}

DerivedConstant derived_constant(std::string_view name) {
  const double e = kCodata2018.e;
  const double nm = si::kNanometre;
  if (name == "image_coefficient")
    return {std::string(name), units::image_coefficient(), "eV nm", e * nm};
  if (name == "triangular_exponent_b")
    return {std::string(name), units::triangular_exponent_b(), "eV^-3/2 V nm^-1", std::pow(e, -1.5) / nm};
  if (name == "schottky_constant")
    return {std::string(name), units::schottky_constant(), "eV (V/nm)^-1/2", e * std::sqrt(nm)};
  if (name == "kappa_coefficient")
    return {std::string(name), units::kappa_coefficient(), "eV^-1/2 nm^-1", 1.0 / (std::sqrt(e) * nm)};

  std::string msg = "unknown constant '" + std::string(name) + "'; valid names:";
  for (const auto& n : derived_constant_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

}  // namespace tunnelkit
