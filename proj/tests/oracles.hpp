#pragma once

// Reference values computed straight from the SI constants with no library
// code in the path, used to check the library's pre-combined coefficients
// and solvers.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline constexpr double e = 1.602176634e-19;
inline constexpr double m_e = 9.1093837015e-31;
inline constexpr double h_P = 6.62607015e-34;
inline constexpr double hbar = h_P / (2.0 * std::numbers::pi);
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double nm = 1e-9;

// e^2 / (16 pi eps0) in eV nm
inline double image_B() { return e / (16.0 * std::numbers::pi * eps0) / nm; }
// e^2 / (4 pi eps0) in eV nm
inline double coulomb_k() { return e / (4.0 * std::numbers::pi * eps0) / nm; }
// (2 m_e)^{1/2} / hbar in eV^{-1/2} nm^{-1}
inline double kappa() { return std::sqrt(2.0 * m_e * e) / hbar * nm; }

// Triangular-barrier Gamow exponent (4/3)(2 m_e)^{1/2} phi^{3/2} / (e hbar F),
// evaluated in SI.
inline double triangular_G(double phi_eV, double F_V_per_nm) {
  const double phi = phi_eV * e;
  const double F = F_V_per_nm / nm;
  return 4.0 / 3.0 * std::sqrt(2.0 * m_e) * std::pow(phi, 1.5) / (e * hbar * F);
}

// Sommerfeld well level h^2 n^2 / (8 m_e L^2) in eV.
inline double well_energy(double L_nm, int n) {
  const double L = L_nm * nm;
  return h_P * h_P * n * n / (8.0 * m_e * L * L) / e;
}

// Transmission through a rectangular step of height V0 (eV) and width a (nm)
// at energy E (eV) above the flat outside level, by matching plane waves.
inline double rectangular_D(double V0, double a, double E) {
  using cd = std::complex<double>;
  const double k = kappa() * std::sqrt(E);
  const cd q = kappa() * std::sqrt(cd(E - V0));
  if (std::abs(q) == 0.0) {
    const double x = k * a / 2.0;
    return 1.0 / (1.0 + x * x);
  }
  const cd s = std::sin(q * a);
  const cd c = std::cos(q * a);
  // 1/t = e^{ika} [cos(qa) - i (k^2 + q^2)/(2kq) sin(qa)]
  const cd inv_t = c - cd(0.0, 1.0) * (k * k + q * q) / (2.0 * k * q) * s;
  return 1.0 / std::norm(inv_t);
}

// Standard simple approximation to the SN barrier function,
// v(f) ~ 1 - f + (f/6) ln f, good to about 0.0033 absolute on 0 < f <= 1.
inline double sn_v_approx(double f) { return 1.0 - f + f / 6.0 * std::log(f); }

}  // namespace oracle
