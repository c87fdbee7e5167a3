#pragma once

// Physical constants and the {eV, nm, V/nm, s} working unit system.
//
// SI values appear only in this header (CODATA 2018). Everything else in the
// library works with energies in eV, lengths in nm and fields in V/nm, so the
// pre-combined coefficients below carry those units.

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace tunnelkit {

struct PhysicalConstants {
  double e;     // elementary charge, C
  double m_e;   // electron mass, kg
  double hbar;  // reduced Planck constant, J s
  double h_P;   // Planck constant, J s
  double eps0;  // electric constant, F/m
  double n1;    // amount-of-substance of one entity, in entities
};

inline constexpr std::string_view kConstantsTableId = "CODATA-2018";

inline constexpr PhysicalConstants kCodata2018{
    1.602176634e-19,
    9.1093837015e-31,
    6.62607015e-34 / (2.0 * std::numbers::pi),
    6.62607015e-34,
    8.8541878128e-12,
    1.0,
};

namespace si {
inline constexpr double kNanometre = 1e-9;
}

/// Field value with the sign conventions used throughout: F is the positive
/// barrier-field magnitude, `conventional` the signed electrostatic field.
/// For field electron emission the conventional field is negative (E = -F).
class FieldValue {
public:
  static FieldValue from_magnitude_fe(double F);
  static FieldValue from_conventional(double E);

  double magnitude() const noexcept { return F_; }
  double conventional() const noexcept { return E_; }

private:
  FieldValue(double F, double E) : F_(F), E_(E) {}
  double F_;
  double E_;
};

/// Coefficients pre-combined from the SI table, in eV/nm-based units.
namespace units {

/// e^2 / (16 pi eps0), eV nm. Classical image-potential coefficient.
double image_coefficient();
/// 4 (2 m_e)^{1/2} / (3 e hbar), eV^{-3/2} V nm^{-1}.
double triangular_exponent_b();
/// (e^3 / (4 pi eps0))^{1/2}, eV (V/nm)^{-1/2}.
double schottky_constant();
/// (2 m_e)^{1/2} / hbar, eV^{-1/2} nm^{-1}.
double kappa_coefficient();
/// e^2 / (4 pi eps0), eV nm. Coulomb coefficient for a unit charge pair.
double coulomb_coefficient();
/// h_P^2 / (8 m_e), eV nm^2.
double well_energy_coefficient();

}  // namespace units

struct DerivedConstant {
  std::string name;
  double value;
  std::string unit;
  /// Multiply `value` by this factor to get the SI value.
  double to_si;
};

/// Looks up a derived constant by name. Throws std::invalid_argument listing
/// the valid names for anything else.
DerivedConstant derived_constant(std::string_view name);

std::vector<std::string> derived_constant_names();

}  // namespace tunnelkit
