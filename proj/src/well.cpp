#include "tunnelkit/well.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {
namespace {

void check(const WellSpec& spec, int n) {
  if (!(spec.length > 0.0) || !std::isfinite(spec.length)) throw DomainError("well length must be positive");
  if (n < 1) throw DomainError("quantum number n must be >= 1");
}

}  // namespace

std::string_view to_string(NormMode mode) {
  switch (mode) {
    case NormMode::Conventional: return "conventional";
    case NormMode::Entity: return "entity";
    case NormMode::Charge: return "charge";
    case NormMode::Mass: return "mass";
  }
  return "?";
}

NormMode parse_norm_mode(std::string_view name) {
  if (name == "conventional") return NormMode::Conventional;
  if (name == "entity") return NormMode::Entity;
  if (name == "charge") return NormMode::Charge;
  if (name == "mass") return NormMode::Mass;
  throw DomainError("unknown norm mode '" + std::string(name) + "' (expected conventional, entity, charge, mass)");
}

std::string_view density_unit(NormMode mode) {
  switch (mode) {
    case NormMode::Conventional: return "1/nm";
    case NormMode::Entity: return "entity/nm";
    case NormMode::Charge: return "C/nm";
    case NormMode::Mass: return "kg/nm";
  }
  return "?";
}

double norm_total(NormMode mode) {
  switch (mode) {
    case NormMode::Conventional: return 1.0;
    case NormMode::Entity: return kCodata2018.n1;
    case NormMode::Charge: return kCodata2018.e;
    case NormMode::Mass: return kCodata2018.m_e;
  }
  return 1.0;
}

double energy_level(const WellSpec& spec, int n) {
  check(spec, n);
  const double nn = static_cast<double>(n);
  return nn * nn * units::well_energy_coefficient() / (spec.length * spec.length);
}

WellState well_state(const WellSpec& spec, int n, NormMode mode) {
  check(spec, n);
  return {n, n * std::numbers::pi / spec.length, energy_level(spec, n), mode};
}

std::vector<WaveSample> wavefunction_samples(const WellSpec& spec, int n, const std::vector<double>& grid,
                                             NormMode mode) {
  check(spec, n);
  const double L = spec.length;
  // Psi = (total)^{1/2} psi with psi normalised to one, so the squared moduli
  // of two modes differ pointwise by the ratio of their totals.
  const double norm = std::sqrt(norm_total(mode) * 2.0 / L);
  const double k = n * std::numbers::pi / L;
  std::vector<WaveSample> out;
  out.reserve(grid.size());
  for (double z : grid) {
    if (!(z >= 0.0 && z <= L)) throw DomainError("grid point outside [0, L]");
    // Exact zeros at the walls rather than sin(n pi) ~ 1e-16.
    const double amp = (z == 0.0 || z == L) ? 0.0 : norm * std::sin(k * z);
    out.push_back({z, amp, amp * amp});
  }
  return out;
}

std::vector<double> uniform_grid(const WellSpec& spec, int points) {
  if (points < 2) throw DomainError("grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = spec.length * i / (points - 1);
  grid.back() = spec.length;
  return grid;
}

}  // namespace tunnelkit
