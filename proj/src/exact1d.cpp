#include "tunnelkit/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/kvconfig.hpp"

namespace tunnelkit {
namespace {

using cplx = std::complex<double>;

bool floored(const BarrierProfile& p) {
  return p.kind == BarrierKind::SchottkyNordheim || p.kind == BarrierKind::Triangular ||
         p.kind == BarrierKind::HydrogenicAxial;
}

// Slice boundaries. Profiles with a 1/z singularity get half of their
// resolution on a logarithmic scale so the steep inner flank is resolved.
std::vector<double> slice_edges(const BarrierProfile& p, double a, double b, int n) {
  std::vector<double> edges(static_cast<std::size_t>(n) + 1);
  const bool graded = has_singularity(p) && a > 0.0;
  const double ratio = b / a;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double linear = a + (b - a) * u;
    edges[static_cast<std::size_t>(i)] = graded ? 0.5 * (linear + a * std::pow(ratio, u)) : linear;
  }
  edges.front() = a;
  edges.back() = b;
  return edges;
}

}  // namespace

SlicedPotential slice_profile(const BarrierProfile& p, int n_slices, const WindowOptions& window) {
  validate(p);
  if (n_slices < 1) throw DomainError("n_slices must be positive");

  SlicedPotential out;
  double floor_value = 0.0;
  if (floored(p)) {
    floor_value = -window.floor_factor * p.height;
    // The window ends where M meets the floor on either side.
    const BarrierGeometry g = barrier_geometry(p, floor_value);
    if (g.vanished) throw DomainError("cannot window a barrier that lies entirely below the floor");
    out.x_left = g.z1;
    out.x_right = g.z2;
    out.v_left = floor_value;
    out.v_right = floor_value;
  } else {
    out.x_left = 0.0;
    out.x_right = p.width;
  }
  if (out.x_right <= out.x_left) return out;

  const auto edges = slice_edges(p, out.x_left, out.x_right, n_slices);
  out.widths.reserve(static_cast<std::size_t>(n_slices));
  out.values.reserve(static_cast<std::size_t>(n_slices));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    double v = motive_energy(p, mid);
    if (floored(p)) v = std::max(v, floor_value);
    out.widths.push_back(edges[i + 1] - edges[i]);
    out.values.push_back(v);
  }
  return out;
}

ScatteringSolution transfer(const SlicedPotential& pot, double energy, Direction direction) {
  if (!std::isfinite(energy)) throw DomainError("energy must be finite");
  if (energy <= pot.v_left || energy <= pot.v_right)
    throw DomainError("energy " + format_shortest(energy) + " eV must exceed both asymptotic potentials (" +
                      format_shortest(pot.v_left) + ", " + format_shortest(pot.v_right) + " eV)");
  if (pot.widths.size() != pot.values.size()) throw DomainError("sliced potential: size mismatch");

  const bool ltr = direction == Direction::LeftToRight;
  const double kap2 = units::kappa_coefficient() * units::kappa_coefficient();
  // Incidence side and exit side in the mirrored frame for R->L.
  const double v_in = ltr ? pot.v_left : pot.v_right;
  const double v_out = ltr ? pot.v_right : pot.v_left;
  const double k_in = std::sqrt(kap2 * (energy - v_in));
  const double k_out = std::sqrt(kap2 * (energy - v_out));
  const double k_ref = std::max({k_in, k_out, 1.0});

  // Start from a unit transmitted wave and walk back towards the incidence
  // side. For L->R that means right-to-left through the slices; mirroring the
  // potential for R->L reverses the walk.
  cplx psi{1.0, 0.0};
  cplx dpsi{0.0, k_out};
  double log_scale = 0.0;
  const std::size_t n = pot.widths.size();
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t j = ltr ? n - 1 - step : step;
    const double h = pot.widths[j];
    const double q2 = kap2 * (energy - pot.values[j]);
    double c, s1, s2;
    if (q2 > 0.0) {
      const double q = std::sqrt(q2);
      const double sn = std::sin(q * h);
      c = std::cos(q * h);
      s1 = sn / q;
      s2 = q * sn;
    } else if (q2 < 0.0) {
      const double g = std::sqrt(-q2);
      const double sh = std::sinh(g * h);
      c = std::cosh(g * h);
      s1 = sh / g;
      s2 = -g * sh;
    } else {
      c = 1.0;
      s1 = h;
      s2 = 0.0;
    }
    const cplx psi_new = c * psi - s1 * dpsi;
    const cplx dpsi_new = s2 * psi + c * dpsi;
    psi = psi_new;
    dpsi = dpsi_new;

    const double size = std::max(std::abs(psi), std::abs(dpsi) / k_ref);
    if (size > 1e100) {
      psi /= size;
      dpsi /= size;
      log_scale += std::log(size);
    }
  }

  const cplx ik{0.0, k_in};
  const cplx incident = 0.5 * (psi + dpsi / ik);
  const cplx reflected = 0.5 * (psi - dpsi / ik);
  const double abs_in = std::abs(incident);

  ScatteringSolution sol;
  sol.energy = energy;
  sol.n_slices = static_cast<int>(n);
  sol.direction = direction;
  sol.D = std::exp(std::log(k_out / k_in) - 2.0 * (log_scale + std::log(abs_in)));
  const double r = std::abs(reflected) / abs_in;
  sol.R = r * r;
  return sol;
}

ScatteringSolution solve_scattering(const BarrierProfile& profile, double energy, const ScatteringOptions& options,
                                    Direction direction) {
  if (options.n_slices < 100) throw DomainError("n_slices must be at least 100");
  int n = options.n_slices;
  auto run = [&](int slices) { return transfer(slice_profile(profile, slices, options.window), energy, direction); };
  ScatteringSolution coarse = run(n);
  if (!options.converge) return coarse;

  // The slicing error is c h^2 + O(h^4), so each doubling is combined with
  // the previous one (Richardson) and the extrapolated values are what must
  // settle to rel_tol.
  auto extrapolate = [](const ScatteringSolution& c, const ScatteringSolution& f) {
    ScatteringSolution e = f;
    e.D = std::clamp((4.0 * f.D - c.D) / 3.0, 0.0, 1.0);
    e.R = std::clamp((4.0 * f.R - c.R) / 3.0, 0.0, 1.0);
    return e;
  };
  std::optional<ScatteringSolution> prev;
  while (true) {
    if (n > options.max_slices / 2)
      throw ConvergenceError("exact solver did not converge within " + std::to_string(options.max_slices) +
                             " slices; last two estimates D = " + (prev ? format_shortest(prev->D) : "n/a") +
                             ", " + format_shortest(coarse.D));
    n *= 2;
    const ScatteringSolution fine = run(n);
    const ScatteringSolution cur = extrapolate(coarse, fine);
    if (prev && std::fabs(cur.D - prev->D) <= options.rel_tol * cur.D) return cur;
    // Exactly piecewise-constant potentials need no extrapolation at all.
    if (std::fabs(fine.D - coarse.D) <= 0.01 * options.rel_tol * fine.D) return fine;
    prev = cur;
    coarse = fine;
  }
}

std::vector<ComparisonRow> compare_jwkb(const BarrierProfile& profile, const std::vector<double>& energies,
                                        const ScatteringOptions& options) {
  std::vector<ComparisonRow> rows;
  rows.reserve(energies.size());
  for (double e : energies) {
    const TransmissionResult jw = transmission(profile, e);
    const ScatteringSolution ex = solve_scattering(profile, e, options);
    ComparisonRow row;
    row.energy = e;
    row.G = jw.G;
    row.D_jwkb = jw.D;
    row.D_exact = ex.D;
    row.R_exact = ex.R;
    row.above_peak = jw.vanished;
    row.ln_ratio = -jw.G - std::log(ex.D);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tunnelkit
