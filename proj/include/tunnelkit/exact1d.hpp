#pragma once

// Exact one-dimensional scattering through a sliced potential.
//
// The barrier is cut into piecewise-constant slices (potential sampled at
// each slice midpoint) between two flat asymptotic regions. Inside a slice
// the Schrodinger equation is solved in closed form, so the only
// approximation is the slicing itself, which is second order in the slice
// width. Transmission and reflection come from the asymptotic flux ratios.

#include <vector>

#include "tunnelkit/barriers.hpp"
#include "tunnelkit/jwkb.hpp"

namespace tunnelkit {

/// Potential on the computational window [x_left, x_right], continued by
/// the constant values `v_left` and `v_right` outside it.
struct SlicedPotential {
  double x_left = 0.0;
  double x_right = 0.0;
  double v_left = 0.0;
  double v_right = 0.0;
  std::vector<double> widths;  // nm, left to right
  std::vector<double> values;  // eV, one per slice
};

struct WindowOptions {
  /// Profiles that fall to -inf (image/Coulomb singularity, linear ramp) are
  /// floored at -floor_factor * height, and the floor is the asymptotic
  /// potential on both sides. The exact D depends on this depth through the
  /// non-adiabatic entry into the barrier; 2 puts the floor 3 height-units
  /// below the barrier top, about the inner potential of a tungsten-like metal.
  double floor_factor = 2.0;
};

struct ScatteringOptions {
  int n_slices = 1000;
  /// Keep doubling n_slices until D changes by less than rel_tol.
  bool converge = true;
  double rel_tol = 1e-8;
  int max_slices = 1 << 20;
  WindowOptions window{};
};

struct ScatteringSolution {
  double D = 0.0;
  double R = 0.0;
  double energy = 0.0;
  int n_slices = 0;
  Direction direction = Direction::LeftToRight;
  bool converged = true;
};

/// Asymptotic potentials and window for a profile; throws DomainError for
/// profiles that cannot be windowed (zero field on an unbounded ramp).
SlicedPotential slice_profile(const BarrierProfile& profile, int n_slices, const WindowOptions& window = {});

/// Transfer through an explicit sliced potential. `energy` is on the same
/// scale as the potential values and must exceed both asymptotes.
ScatteringSolution transfer(const SlicedPotential& potential, double energy,
                            Direction direction = Direction::LeftToRight);

/// Exact transmission for a barrier profile. Energies use the motive scale,
/// i.e. `energy` here corresponds to `energy_offset` in the JWKB functions.
/// Throws ConvergenceError (with the last two estimates) when the slice
/// budget is exhausted.
ScatteringSolution solve_scattering(const BarrierProfile& profile, double energy,
                                    const ScatteringOptions& options = {},
                                    Direction direction = Direction::LeftToRight);

struct ComparisonRow {
  double energy = 0.0;
  double G = 0.0;
  double D_jwkb = 1.0;
  double D_exact = 0.0;
  double R_exact = 0.0;
  /// ln(D_jwkb / D_exact); meaningful below the peak.
  double ln_ratio = 0.0;
  bool above_peak = false;
};

std::vector<ComparisonRow> compare_jwkb(const BarrierProfile& profile, const std::vector<double>& energies,
                                        const ScatteringOptions& options = {});

}  // namespace tunnelkit
