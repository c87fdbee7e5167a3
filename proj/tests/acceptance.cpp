// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "oracles.hpp"
#include "tunnelkit/arrowsim.hpp"
#include "tunnelkit/barriers.hpp"
#include "tunnelkit/cli.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/esfi_fim.hpp"
#include "tunnelkit/exact1d.hpp"
#include "tunnelkit/jwkb.hpp"
#include "tunnelkit/kvconfig.hpp"
#include "tunnelkit/well.hpp"

using namespace tunnelkit;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(double v, int digits = 6) { return format_significant(v, digits); }

ScatteringOptions fixed_slices(int n) {
  ScatteringOptions o;
  o.n_slices = n;
  o.converge = false;
  return o;
}

Outcome well_level() {
  std::ostringstream out, err;
  const int code = cli::dispatch({"well", "--length-nm", "10", "--n", "1", "--format", "json"}, out, err);
  if (code != 0) return {false, "cli exit " + std::to_string(code) + ": " + err.str()};
  const auto j = nlohmann::json::parse(out.str());
  const double E_meV = j["state"]["energy_eV"].get<double>() * 1e3;
  const std::string two = format_significant(E_meV, 2);
  return {two == "3.8", "E1 = " + fmt(E_meV) + " meV, 2 s.f. " + two};
}

Outcome triangular_closed_form() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> phi(2.0, 6.0), F(1.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double p = phi(rng), f = F(rng);
    worst = std::max(worst, std::fabs(gamow_exponent(triangular(p, f)).G / oracle::triangular_G(p, f) - 1.0));
  }
  return {worst < 1e-6, "max relative error " + fmt(worst, 3) + " over 1000 draws"};
}

Outcome sn_vanishing() {
  const double phi = 4.5, tol = 1e-9;
  const double F_num = vanishing_field_numeric(schottky_nordheim(phi, 1.0), 30.0, tol);
  const double cS = units::schottky_constant();
  const double F_closed = phi * phi / (cS * cS);
  const double D = transmission(schottky_nordheim(phi, F_num + tol)).D;
  const bool ok = std::fabs(F_num - F_closed) < 1e-4 && D == 1.0;
  return {ok, "F_numeric = " + fmt(F_num, 10) + ", phi^2/c_S^2 = " + fmt(F_closed, 10) + ", D = " + fmt(D, 17)};
}

BarrierProfile random_profile(std::mt19937_64& rng, int kind) {
  std::uniform_real_distribution<double> phi(2.0, 6.0), F(1.0, 12.0), w(0.05, 1.5);
  switch (kind) {
    case 0: return schottky_nordheim(phi(rng), F(rng));
    case 1: return triangular(phi(rng), F(rng));
    case 2: return rectangular(phi(rng), w(rng));
    default: return straight_line_equivalent(phi(rng), w(rng));
  }
}

// Also records the worst |D + R - 1| seen, for the unitarity half of criterion 5.
double g_unitarity_worst = 0.0;

Outcome reciprocity() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double jwkb_worst = 0.0, exact_worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int kind = i % 4;
    const auto p = random_profile(rng, kind);
    const bool flat_outside = kind >= 2;
    // Energies from well below the top to somewhat above it.
    const double E = flat_outside ? p.height * (0.02 + 1.3 * u(rng)) : p.height * (-0.5 + 1.3 * u(rng));
    jwkb_worst = std::max(jwkb_worst, std::fabs(transmission(p, E, Direction::LeftToRight).D -
                                                transmission(p, E, Direction::RightToLeft).D));
    const auto l = solve_scattering(p, E, fixed_slices(200), Direction::LeftToRight);
    const auto r = solve_scattering(p, E, fixed_slices(200), Direction::RightToLeft);
    exact_worst = std::max(exact_worst, std::fabs(l.D - r.D));
    g_unitarity_worst = std::max({g_unitarity_worst, std::fabs(l.D + l.R - 1.0), std::fabs(r.D + r.R - 1.0)});
  }
  return {jwkb_worst == 0.0 && exact_worst < 1e-10,
          "10000 cases: JWKB max |dD| = " + fmt(jwkb_worst, 3) + ", exact max |dD| = " + fmt(exact_worst, 3)};
}

Outcome rectangular_oracle() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> V(0.5, 8.0), a(0.05, 1.5), frac(0.02, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double V0 = V(rng), w = a(rng), E = frac(rng) * V0;
    const auto s = solve_scattering(rectangular(V0, w), E, fixed_slices(100));
    worst = std::max(worst, std::fabs(s.D / oracle::rectangular_D(V0, w, E) - 1.0));
    g_unitarity_worst = std::max(g_unitarity_worst, std::fabs(s.D + s.R - 1.0));
  }
  return {worst < 1e-9 && g_unitarity_worst < 1e-10,
          "max relative error " + fmt(worst, 3) + " over 1000 cases, max |D+R-1| " + fmt(g_unitarity_worst, 3) +
              " over all exact runs"};
}

Outcome jwkb_regime() {
  double worst = 0.0, min_R = 1.0;
  int opaque = 0;
  for (double phi : {4.0, 4.5, 5.0}) {
    for (double F : {2.0, 3.0, 4.0, 5.0}) {
      const auto p = schottky_nordheim(phi, F);
      for (double E : {-1.0, -0.5, 0.0}) {
        const auto row = compare_jwkb(p, {E}).front();
        if (row.G <= 10.0) continue;
        ++opaque;
        worst = std::max(worst, std::fabs(row.ln_ratio) / row.G);
      }
      const double peak = barrier_geometry(p).M_peak;
      min_R = std::min(min_R, solve_scattering(p, peak + 0.01).R);
    }
  }
  return {opaque > 0 && worst < 0.1 && min_R > 0.01,
          std::to_string(opaque) + " barriers with G > 10: max |ln ratio|/G = " + fmt(worst, 3) +
              "; 10 meV above the peak: min R = " + fmt(min_R, 3)};
}

Outcome esfi_bracket() {
  const auto H = species_by_name("H");
  const double F_num = vanishing_field_numeric(axial_profile(H, 1.0), 60.0, 1e-9);
  const double F_closed = over_barrier_field(H);
  const auto He = species_by_name("He");
  bool inside = true;
  std::string ranges;
  for (auto pl : {ImagePlacement::None, ImagePlacement::ElectronCentroid, ImagePlacement::NucleusOpposite}) {
    const auto iv = usable_field_interval(He, 4.5, pl);
    inside &= iv.lo >= 20.0 && iv.hi <= 60.0;
    ranges += " " + std::string(to_string(pl)) + " [" + fmt(iv.lo, 4) + ", " + fmt(iv.hi, 4) + "]";
  }
  const bool ok = std::fabs(F_num - 32.1) <= 0.1 && std::fabs(F_num - F_closed) < 1e-6 && inside;
  return {ok, "H threshold " + fmt(F_num, 7) + " V/nm; He usable V/nm:" + ranges};
}

Outcome table_one() {
  const auto spec = default_facet();
  const auto fc = facet_contrast(build_sites(spec), spec.species, spec.tau);
  double corner_t = 0, edge_t = 0, interior_t = 0, corner_o = 0, interior_o = 0;
  for (const auto& r : fc.sites) {
    if (r.kind == SiteKind::Corner) corner_t = r.etr_tunnelling, corner_o = r.etr_overlap;
    if (r.kind == SiteKind::Edge) edge_t = r.etr_tunnelling;
    if (r.kind == SiteKind::Interior) interior_t = r.etr_tunnelling, interior_o = r.etr_overlap;
  }
  const bool ok = corner_t > edge_t && edge_t > interior_t && corner_o < interior_o &&
                  fc.tunnelling_explains_image == true && fc.overlap_explains_image == false;
  return {ok, "tunnelling corner/edge/interior " + fmt(corner_t, 4) + "/" + fmt(edge_t, 4) + "/" + fmt(interior_t, 4) +
                  "; overlap corner/interior " + fmt(corner_o, 4) + "/" + fmt(interior_o, 4) + "; " +
                  table_verdict("tunnelling-integral", fc.tunnelling_explains_image) + " / " +
                  table_verdict("overlap-integral", fc.overlap_explains_image)};
}

Outcome arrow_of_time() {
  EnsembleConfig c;
  c.n_walkers = 10000;
  c.D = 0.1;
  c.n_steps = 500;
  c.seed = 42;
  const auto traj = run_ensemble(c);
  const double f_final = traj.back().f_left;
  const auto trend = entropy_trend(traj, 20);

  // Stationarity: final occupancies over 1000 seeds against Binomial(n, 1/2).
  // 200 steps leave a mean offset of n (1 - 2p)^200 / 2 ~ 2e-16 walkers.
  const int seeds = 1000;
  c.n_steps = 200;
  std::vector<int> finals;
  for (int s = 0; s < seeds; ++s) {
    c.seed = mix_seed(20240601, static_cast<std::uint64_t>(s));
    finals.push_back(run_ensemble(c).back().n_left);
  }
  const boost::math::binomial_distribution<double> law(c.n_walkers, 0.5);
  const int bins = 10;
  std::vector<double> upper;  // inclusive upper edge of each bin but the last
  for (int b = 1; b < bins; ++b) upper.push_back(std::floor(boost::math::quantile(law, static_cast<double>(b) / bins)));
  std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
  for (int x : finals) {
    int b = 0;
    while (b < bins - 1 && x > upper[b]) ++b;
    observed[b] += 1;
  }
  double prev_cdf = 0.0, chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double cdf = b < bins - 1 ? boost::math::cdf(law, upper[b]) : 1.0;
    expected[b] = (cdf - prev_cdf) * seeds;
    prev_cdf = cdf;
    chi2 += (observed[b] - expected[b]) * (observed[b] - expected[b]) / expected[b];
  }
  const double p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), chi2));

  const bool ok = std::fabs(f_final - 0.5) <= 0.015 && trend.verdict == TrendVerdict::NonDecreasing && p_value > 0.01;
  return {ok, "final f_left " + fmt(f_final, 4) + "; entropy " + std::string(to_string(trend.verdict)) +
                  " (max drop " + fmt(trend.max_decrease, 3) + " <= " + fmt(trend.tolerance, 3) + "); chi-square " +
                  fmt(chi2, 4) + " on " + std::to_string(bins - 1) + " dof, p = " + fmt(p_value, 3)};
}

Outcome entity_normalization() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> L(0.1, 100.0);
  std::uniform_int_distribution<int> n(1, 25);
  double worst_norm = 0.0;
  bool pointwise = true;
  const int points = 4001;
  for (int i = 0; i < 100; ++i) {
    const WellSpec spec{L(rng)};
    const int q = n(rng);
    const auto grid = uniform_grid(spec, points);
    const auto ent = wavefunction_samples(spec, q, grid, NormMode::Entity);
    const auto conv = wavefunction_samples(spec, q, grid, NormMode::Conventional);
    const double h = spec.length / (points - 1);
    double s = ent.front().squared_modulus + ent.back().squared_modulus;
    for (int k = 1; k < points - 1; ++k) s += (k % 2 ? 4.0 : 2.0) * ent[k].squared_modulus;
    worst_norm = std::max(worst_norm, std::fabs(s * h / 3.0 - 1.0));
    for (int k = 0; k < points; ++k) pointwise &= ent[k].squared_modulus == conv[k].squared_modulus * kCodata2018.n1;
  }
  return {worst_norm < 1e-6 && pointwise, "100 random (L, n): max |integral - 1| = " + fmt(worst_norm, 3) +
                                              ", entity == conventional x n1 pointwise: " +
                                              (pointwise ? "yes" : "no")};
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Sommerfeld well ground level", 1.0, well_level},
      {2, "triangular closed form", 10.0, triangular_closed_form},
      {3, "SN barrier vanishing field", 1.0, sn_vanishing},
      {4, "reciprocity", 60.0, reciprocity},
      {5, "rectangular oracle and unitarity", 30.0, rectangular_oracle},
      {6, "JWKB quality regime", 60.0, jwkb_regime},
      {7, "ESFI sanity bracket", 5.0, esfi_bracket},
      {8, "facet contrast ordering", 1.0, table_one},
      {9, "arrow-of-time ensemble", 120.0, arrow_of_time},
      {10, "entity normalization", 10.0, entity_normalization},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] criterion %d: %s | %s | %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
