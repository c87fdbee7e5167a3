#pragma once

// Sommerfeld well: an electron confined to [0, L] by infinitely high walls.

#include <string_view>
#include <vector>

namespace tunnelkit {

struct WellSpec {
  double length = 0.0;  // nm
};

/// How the squared modulus of a state is normalised.
///   Conventional: integrates to 1 (a pure number).
///   Entity:       integrates to n1 = 1 entity (amount of substance), so the
///                 squared modulus reads as a concentration of electron matter.
///   Charge, Mass: integrate to e (C) and m_e (kg).
enum class NormMode { Conventional, Entity, Charge, Mass };

std::string_view to_string(NormMode mode);
NormMode parse_norm_mode(std::string_view name);
/// Unit of the squared-modulus column for a mode, e.g. "entity/nm".
std::string_view density_unit(NormMode mode);
/// Total that the squared modulus integrates to (1, n1, e or m_e).
double norm_total(NormMode mode);

struct WellState {
  int n = 1;
  double k = 0.0;       // circular wave-number, nm^-1
  double energy = 0.0;  // eV
  NormMode norm_mode = NormMode::Conventional;
};

struct WaveSample {
  double z = 0.0;
  double amplitude = 0.0;
  double squared_modulus = 0.0;
};

/// n^2 h_P^2 / (8 m_e L^2) in eV. Throws DomainError for n < 1 or L <= 0.
double energy_level(const WellSpec& spec, int n);

WellState well_state(const WellSpec& spec, int n, NormMode mode = NormMode::Conventional);

/// Samples of N sin(n pi z / L). Throws DomainError for grid points outside [0, L].
std::vector<WaveSample> wavefunction_samples(const WellSpec& spec, int n, const std::vector<double>& grid,
                                             NormMode mode = NormMode::Conventional);

/// `points` evenly spaced grid points covering [0, L] inclusive.
std::vector<double> uniform_grid(const WellSpec& spec, int points);

}  // namespace tunnelkit
