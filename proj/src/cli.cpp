#include "tunnelkit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "tunnelkit/arrowsim.hpp"
#include "tunnelkit/barriers.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/esfi_fim.hpp"
#include "tunnelkit/exact1d.hpp"
#include "tunnelkit/jwkb.hpp"
#include "tunnelkit/kvconfig.hpp"
#include "tunnelkit/version.hpp"
#include "tunnelkit/well.hpp"

namespace tunnelkit::cli {
namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Result {
  Table table;
  json extra = json::object();        // JSON-only summary fields
  std::vector<std::string> verdicts;  // human-readable lines
  std::string gnuplot;
  std::optional<std::uint64_t> seed;
};

struct CommonArgs {
  std::string format = "csv";
  std::string out = "-";
  std::string manifest;
  int digits = 9;
  int jobs = 1;
  bool gnuplot_hint = false;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--out", a.out, "Output path, or - for stdout")->capture_default_str();
  sub->add_option("--manifest", a.manifest, "Write the run manifest to this path");
  sub->add_option("--digits", a.digits, "Significant digits in CSV output")->check(CLI::Range(1, 17))->capture_default_str();
  sub->add_option("--jobs", a.jobs, "Parallel workers for parameter sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--gnuplot-hint", a.gnuplot_hint, "Print a suggested gnuplot recipe to stderr");
}

// Runs f(i) for i in [0, n) on `jobs` threads. Results land in caller-owned
// slots, so ordering never depends on scheduling; the lowest-index exception
// is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += static_cast<std::size_t>(jobs)) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 1 || n < 2) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, static_cast<std::size_t>(t));
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// barrier profile flags

struct ProfileArgs {
  std::string kind = "sn";
  std::vector<double> heights;
  std::vector<double> fields;
  double image_coefficient = 0.0;
  double Z = 1.0;
  double width = 0.0;
  std::string placement = "none";
  double surface_distance = 0.0;
  std::string profile_file;

  CLI::Option* kind_opt = nullptr;
  CLI::Option* image_opt = nullptr;
  CLI::Option* Z_opt = nullptr;
  CLI::Option* width_opt = nullptr;
  CLI::Option* placement_opt = nullptr;
  CLI::Option* surface_opt = nullptr;
};

void add_profile_options(CLI::App* sub, ProfileArgs& a, bool lists) {
  a.kind_opt = sub->add_option("--kind", a.kind, "Barrier kind: sn, triangular, rectangular, sle, hydrogenic")
                   ->capture_default_str();
  auto* h = sub->add_option("--phi,--height", a.heights,
                            "Work function / ionization energy / step or ramp height, eV");
  auto* f = sub->add_option("--field", a.fields, "Field magnitude F, V/nm");
  if (lists) {
    h->delimiter(',');
    f->delimiter(',');
  } else {
    h->expected(1);
    f->expected(1);
  }
  a.image_opt = sub->add_option("--image-coefficient", a.image_coefficient,
                                "Image coefficient, eV nm (default: classical e^2/16 pi eps0 for sn and hydrogenic)");
  a.Z_opt = sub->add_option("--Z", a.Z, "Nuclear charge number (hydrogenic)")->capture_default_str();
  a.width_opt = sub->add_option("--width", a.width, "Width, nm (rectangular, sle)");
  a.placement_opt = sub->add_option("--placement", a.placement,
                                    "Image placement (hydrogenic): none, electron_centroid, nucleus_opposite")
                        ->capture_default_str();
  a.surface_opt = sub->add_option("--surface-distance", a.surface_distance, "Nucleus to surface distance, nm");
  sub->add_option("--profile", a.profile_file, "Read the barrier from a key = value file; flags override it");
}

BarrierProfile make_profile(const ProfileArgs& a, std::optional<double> height, std::optional<double> field) {
  BarrierProfile p;
  bool from_file = !a.profile_file.empty();
  if (from_file) {
    KeyValueRecord record;
    for (const auto& [k, v] : read_key_value_file(a.profile_file)) record[k] = v;
    p = from_record(record);
  }
  if (!from_file || a.kind_opt->count() > 0) p.kind = parse_barrier_kind(a.kind);
  if (height) p.height = *height;
  if (field) p.field = *field;
  if (a.image_opt->count() > 0) {
    p.image_coefficient = a.image_coefficient;
  } else if (!from_file) {
    const bool classical = p.kind == BarrierKind::SchottkyNordheim || p.kind == BarrierKind::HydrogenicAxial;
    p.image_coefficient = classical ? units::image_coefficient() : 0.0;
  }
  if (!from_file || a.Z_opt->count() > 0) p.charge_number = a.Z;
  if (!from_file || a.width_opt->count() > 0) p.width = a.width;
  if (!from_file || a.placement_opt->count() > 0) p.placement = parse_image_placement(a.placement);
  if (!from_file || a.surface_opt->count() > 0) p.surface_distance = a.surface_distance;
  if (!from_file && !height) throw DomainError("missing --phi/--height");
  validate(p);
  return p;
}

std::vector<std::optional<double>> optional_list(const std::vector<double>& values) {
  if (values.empty()) return {std::nullopt};
  return {values.begin(), values.end()};
}

BarrierProfile single_profile(const ProfileArgs& a) {
  return make_profile(a, a.heights.empty() ? std::nullopt : std::optional(a.heights.front()),
                      a.fields.empty() ? std::nullopt : std::optional(a.fields.front()));
}

// ---------------------------------------------------------------------------
// subcommands

struct BarrierCmd {
  ProfileArgs profile;
  double energy = 0.0;
  int samples = 0;
};

Result run_barrier(const BarrierCmd& c) {
  const BarrierProfile p = single_profile(c.profile);
  const BarrierGeometry g = barrier_geometry(p, c.energy);
  Result r;
  if (c.samples > 0) {
    if (c.samples < 2) throw DomainError("--samples needs at least 2 points");
    double lo = 0.0;
    double hi = g.vanished ? 2.0 * g.z_peak : 1.25 * g.z2;
    if (!std::isfinite(hi) || hi <= 0.0) hi = p.width > 0.0 ? 1.25 * p.width : 1.0;
    hi = std::min(hi, domain_end(p));
    if (has_singularity(p)) lo = hi * 1e-3;
    r.table.columns = {"z_nm", "M_eV"};
    for (int i = 0; i < c.samples; ++i) {
      double z = lo + (hi - lo) * i / (c.samples - 1);
      if (z >= domain_end(p)) z = std::nextafter(domain_end(p), 0.0);
      r.table.rows.push_back({z, motive_energy(p, z) - c.energy});
    }
    r.gnuplot = "set datafile separator ','; set xlabel 'z (nm)'; set ylabel 'M (eV)'; plot 'FILE' skip 1 using 1:2 with lines";
    return r;
  }
  r.table.columns = {"kind", "height_param", "F", "energy", "z1", "z2", "z_peak", "M_peak", "vanished",
                     "schottky_reduction", "reference_field"};
  Cell reduction = std::string();
  Cell reference = std::string();
  if (p.kind == BarrierKind::SchottkyNordheim) reduction = schottky_reduction(p);
  try {
    reference = reference_field(p);
  } catch (const DomainError&) {
  }
  r.table.rows.push_back({std::string(to_string(p.kind)), p.height, p.field, c.energy, g.z1, g.z2, g.z_peak,
                          g.M_peak, g.vanished, reduction, reference});
  r.extra["profile"] = json::object();
  for (const auto& [k, v] : to_record(p)) r.extra["profile"][k] = v;
  return r;
}

struct TransmitCmd {
  ProfileArgs profile;
  std::vector<double> offsets{0.0};
  std::string direction = "ltr";
};

Result run_transmit(const TransmitCmd& c, int jobs) {
  struct Point {
    BarrierProfile profile;
    double offset;
  };
  std::vector<Point> points;
  for (auto h : optional_list(c.profile.heights))
    for (auto f : optional_list(c.profile.fields))
      for (double off : c.offsets) points.push_back({make_profile(c.profile, h, f), off});

  const Direction dir = parse_direction(c.direction);
  std::vector<TransmissionResult> results(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    results[i] = transmission(points[i].profile, points[i].offset, dir);
  });

  Result r;
  r.table.columns = {"kind", "phi", "F", "offset", "G", "D", "z1", "z2", "vanished", "direction", "method"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i].profile;
    const auto& t = results[i];
    r.table.rows.push_back({std::string(to_string(p.kind)), p.height, p.field, points[i].offset, t.G, t.D, t.z1,
                            t.z2, t.vanished, std::string(to_string(t.direction)), std::string(to_string(t.method))});
  }
  r.gnuplot = "set datafile separator ','; set logscale y; set xlabel 'F (V/nm)'; set ylabel 'D'; "
              "plot 'FILE' skip 1 using 3:6 with linespoints";
  return r;
}

struct ScatterArgs {
  int slices = 1000;
  bool no_converge = false;
  double floor_factor = 2.0;
  double rel_tol = 1e-8;

  ScatteringOptions options() const {
    ScatteringOptions o;
    o.n_slices = slices;
    o.converge = !no_converge;
    o.rel_tol = rel_tol;
    o.window.floor_factor = floor_factor;
    return o;
  }
};

void add_scatter_options(CLI::App* sub, ScatterArgs& s) {
  sub->add_option("--slices", s.slices, "Initial slice count (>= 100)")->capture_default_str();
  sub->add_flag("--no-converge", s.no_converge, "Use exactly --slices slices, no refinement");
  sub->add_option("--floor-factor", s.floor_factor, "Asymptotic floor depth in units of the barrier height")
      ->capture_default_str();
  sub->add_option("--rel-tol", s.rel_tol, "Relative convergence tolerance on D")->capture_default_str();
}

struct OracleCmd {
  ProfileArgs profile;
  std::vector<double> energies;
  std::string direction = "ltr";
  ScatterArgs scatter;
};

Result run_oracle(const OracleCmd& c, int jobs) {
  const BarrierProfile p = single_profile(c.profile);
  const Direction dir = parse_direction(c.direction);
  const ScatteringOptions opts = c.scatter.options();
  std::vector<ScatteringSolution> sols(c.energies.size());
  parallel_for(c.energies.size(), jobs, [&](std::size_t i) { sols[i] = solve_scattering(p, c.energies[i], opts, dir); });
  Result r;
  r.table.columns = {"energy", "D_exact", "R_exact", "n_slices", "direction"};
  for (const auto& s : sols)
    r.table.rows.push_back({s.energy, s.D, s.R, static_cast<long long>(s.n_slices), std::string(to_string(s.direction))});
  r.gnuplot = "set datafile separator ','; set logscale y; plot 'FILE' skip 1 using 1:2 title 'D', '' skip 1 using 1:3 title 'R'";
  return r;
}

struct CompareCmd {
  ProfileArgs profile;
  std::vector<double> energies;
  double e_min = 0.0, e_max = 0.0;
  int steps = 0;
  ScatterArgs scatter;
};

Result run_compare(const CompareCmd& c, int jobs) {
  const BarrierProfile p = single_profile(c.profile);
  std::vector<double> energies = c.energies;
  if (c.steps > 0) {
    if (c.steps == 1) {
      energies.push_back(c.e_min);
    } else {
      for (int i = 0; i < c.steps; ++i) energies.push_back(c.e_min + (c.e_max - c.e_min) * i / (c.steps - 1));
    }
  }
  const ScatteringOptions opts = c.scatter.options();
  std::vector<ComparisonRow> rows(energies.size());
  parallel_for(energies.size(), jobs, [&](std::size_t i) { rows[i] = compare_jwkb(p, {energies[i]}, opts).front(); });
  Result r;
  r.table.columns = {"energy", "G", "D_jwkb", "D_exact", "R_exact", "ln_ratio", "above_peak"};
  for (const auto& row : rows)
    r.table.rows.push_back({row.energy, row.G, row.D_jwkb, row.D_exact, row.R_exact, row.ln_ratio, row.above_peak});
  r.gnuplot = "set datafile separator ','; set logscale y; plot 'FILE' skip 1 using 1:3 title 'JWKB' with lines, "
              "'' skip 1 using 1:4 title 'exact' with lines";
  return r;
}

struct WellCmd {
  double length = 0.0;
  int n = 1;
  int grid = 0;
  std::string norm = "conventional";
};

Result run_well(const WellCmd& c) {
  const WellSpec spec{c.length};
  const NormMode mode = parse_norm_mode(c.norm);
  const WellState st = well_state(spec, c.n, mode);
  Result r;
  r.extra["state"] = {{"n", st.n},
                      {"length_nm", spec.length},
                      {"k_per_nm", st.k},
                      {"energy_eV", st.energy},
                      {"energy_meV_2sf", format_significant(st.energy * 1e3, 2)},
                      {"norm_mode", std::string(to_string(mode))},
                      {"unit", std::string(density_unit(mode))}};
  if (c.grid > 0) {
    r.table.columns = {"z_nm", "amplitude", "squared_modulus", "unit"};
    for (const auto& s : wavefunction_samples(spec, c.n, uniform_grid(spec, c.grid), mode))
      r.table.rows.push_back({s.z, s.amplitude, s.squared_modulus, std::string(density_unit(mode))});
    r.gnuplot = "set datafile separator ','; plot 'FILE' skip 1 using 1:3 with lines title 'squared modulus'";
  } else {
    r.table.columns = {"n", "length_nm", "k_per_nm", "energy_eV"};
    r.table.rows.push_back({static_cast<long long>(st.n), spec.length, st.k, st.energy});
  }
  return r;
}

struct SpeciesArgs {
  std::string name = "He";
  double ionization = 0.0;
  double z_eff = 0.0;
  CLI::Option* name_opt = nullptr;

  GasSpecies species() const {
    if (ionization > 0.0) {
      GasSpecies s = hydrogenic_species(name_opt && name_opt->count() ? name : "custom", ionization);
      if (z_eff > 0.0) s.z_eff = z_eff;
      return s;
    }
    GasSpecies s = species_by_name(name);
    if (z_eff > 0.0) s.z_eff = z_eff;
    return s;
  }
};

void add_species_options(CLI::App* sub, SpeciesArgs& s) {
  s.name_opt = sub->add_option("--species", s.name, "Gas species: H, He, Ne, Ar")->capture_default_str();
  sub->add_option("--ionization", s.ionization, "Custom ionization energy, eV (overrides the species table)");
  sub->add_option("--z-eff", s.z_eff, "Override the effective charge number");
}

struct EsfiCmd {
  SpeciesArgs species;
  double phi = 4.5;
  double field = 0.0;
  std::string placement = "none";
  double surface_distance = 0.0;
  bool sensitivity = false;
  bool usable = false;
  double min_decay = 1e-9, max_decay = 1e-3;
};

Result run_esfi(const EsfiCmd& c) {
  const GasSpecies sp = c.species.species();
  Result r;
  if (c.usable) {
    r.table.columns = {"species", "placement", "F_lo", "F_hi", "min_decay", "max_decay"};
    for (auto pl : {ImagePlacement::None, ImagePlacement::ElectronCentroid, ImagePlacement::NucleusOpposite}) {
      const FieldInterval iv = usable_field_interval(sp, c.phi, pl, {c.min_decay, c.max_decay});
      r.table.rows.push_back({sp.name, std::string(to_string(pl)), iv.lo, iv.hi, c.min_decay, c.max_decay});
    }
    return r;
  }
  if (!(c.field > 0.0)) throw DomainError("missing or non-positive --field");
  const double dc = critical_distance(sp, c.phi, c.field);
  const double ds = c.surface_distance > 0.0 ? c.surface_distance : dc;
  r.table.columns = {"species", "I", "Z_eff", "F", "placement", "surface_distance", "d_critical",
                     "G", "decay", "vanished", "over_barrier_field"};
  auto row = [&](ImagePlacement pl, const EsfiExponent& e) {
    r.table.rows.push_back({sp.name, sp.ionization_energy, sp.z_eff, c.field, std::string(to_string(pl)),
                            pl == ImagePlacement::None ? 0.0 : ds, dc, e.G, std::exp(-e.G), e.vanished,
                            over_barrier_field(sp)});
  };
  if (c.sensitivity) {
    const PlacementSensitivity s = image_placement_sensitivity(sp, c.phi, c.field, ds);
    row(ImagePlacement::None, s.none);
    row(ImagePlacement::ElectronCentroid, s.electron_centroid);
    row(ImagePlacement::NucleusOpposite, s.nucleus_opposite);
    r.extra["differences"] = {{"centroid_minus_none", s.electron_centroid.G - s.none.G},
                              {"nucleus_opposite_minus_none", s.nucleus_opposite.G - s.none.G},
                              {"centroid_minus_nucleus_opposite", s.electron_centroid.G - s.nucleus_opposite.G}};
  } else {
    const ImagePlacement pl = parse_image_placement(c.placement);
    row(pl, esfi_rate_exponent(sp, axial_profile(sp, c.field, pl, ds)));
  }
  return r;
}

struct FimCmd {
  std::string config;
  SpeciesArgs species;
  double phi = 4.5;
  double field = 44.0;
  double tau = 2.0;
  CLI::Option* phi_opt = nullptr;
  CLI::Option* field_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
};

Result run_fim(const FimCmd& c) {
  FacetSpec spec = c.config.empty() ? default_facet() : facet_from_config(read_key_value_file(c.config));
  if (c.species.name_opt->count() > 0 || c.species.ionization > 0.0) spec.species = c.species.species();
  if (c.phi_opt->count() > 0) spec.phi = c.phi;
  if (c.field_opt->count() > 0) spec.base_field = c.field;
  if (c.tau_opt->count() > 0) spec.tau = c.tau;

  const auto sites = build_sites(spec);
  const FacetContrast fc = facet_contrast(sites, spec.species, spec.tau);
  Result r;
  r.table.columns = {"site_kind", "F_local", "d_critical", "H_eff", "G_tunnelling", "etr_tunnelling",
                     "etr_overlap", "tunnelling_agrees", "overlap_agrees"};
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    const auto& e = fc.sites[i];
    r.table.rows.push_back({std::string(to_string(s.kind)), s.field_local, s.d_critical, s.h_eff, e.G_tunnelling,
                            e.etr_tunnelling, e.etr_overlap, e.tunnelling_agrees_with_image,
                            e.overlap_agrees_with_image});
  }
  r.verdicts.push_back(table_verdict("tunnelling-integral", fc.tunnelling_explains_image));
  r.verdicts.push_back(table_verdict("overlap-integral", fc.overlap_explains_image));
  auto resolution_json = [&](const std::optional<ResolutionVerdict>& v, std::string_view name) {
    if (!v) return json(nullptr);
    r.verdicts.push_back(std::string(name) + ": over-atom/midpoint ETR ratio " + format_significant(v->ratio, 4) +
                         (v->resolved ? " > " : " <= ") + format_significant(spec.tau, 4) +
                         (v->resolved ? ", atoms resolved" : ", atoms not resolved"));
    return json{{"ratio", v->ratio}, {"resolved", v->resolved}};
  };
  auto opt_bool = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
  r.extra["base"] = {{"species", spec.species.name}, {"phi", spec.phi}, {"F0", spec.base_field}, {"tau", spec.tau}};
  r.extra["verdicts"] = {{"tunnelling_explains_image", opt_bool(fc.tunnelling_explains_image)},
                         {"overlap_explains_image", opt_bool(fc.overlap_explains_image)},
                         {"tunnelling_resolution", resolution_json(fc.tunnelling_resolution, "tunnelling-integral")},
                         {"overlap_resolution", resolution_json(fc.overlap_resolution, "overlap-integral")}};
  return r;
}

struct ArrowCmd {
  std::string config;
  EnsembleConfig ensemble;
  bool binomial_start = false;
  int window = 20;
  int reversal_trials = 0;
  double epsilon = 0.01;
  std::string d_profile;
  double d_energy = 0.0;
  std::map<std::string, CLI::Option*> opts;
};

EnsembleConfig ensemble_from(const ArrowCmd& c) {
  EnsembleConfig e;
  if (!c.config.empty()) {
    for (const auto& [k, v] : read_key_value_file(c.config)) {
      if (k == "n_walkers") e.n_walkers = static_cast<int>(parse_integer(v, k));
      else if (k == "D") e.D = parse_double(v, k);
      else if (k == "attempt_rate") e.attempt_rate = parse_double(v, k);
      else if (k == "n_steps") e.n_steps = static_cast<int>(parse_integer(v, k));
      else if (k == "seed") e.seed = static_cast<std::uint64_t>(parse_integer(v, k));
      else if (k == "initial_left_fraction") e.initial_left_fraction = parse_double(v, k);
      else if (k == "placement") e.placement = v == "binomial" ? InitialPlacement::Binomial : InitialPlacement::Exact;
      else throw DomainError("unknown ensemble key '" + k + "'");
    }
  } else if (const char* env = std::getenv("TUNNELKIT_SEED")) {
    e.seed = static_cast<std::uint64_t>(parse_integer(env, "TUNNELKIT_SEED"));
  }
  auto given = [&](const char* name) { return c.opts.at(name)->count() > 0; };
  if (given("--walkers")) e.n_walkers = c.ensemble.n_walkers;
  if (given("--D")) e.D = c.ensemble.D;
  if (given("--attempt-rate")) e.attempt_rate = c.ensemble.attempt_rate;
  if (given("--steps")) e.n_steps = c.ensemble.n_steps;
  if (given("--seed")) e.seed = c.ensemble.seed;
  if (given("--initial-left")) e.initial_left_fraction = c.ensemble.initial_left_fraction;
  if (c.binomial_start) e.placement = InitialPlacement::Binomial;
  if (!c.d_profile.empty()) {
    KeyValueRecord record;
    for (const auto& [k, v] : read_key_value_file(c.d_profile)) record[k] = v;
    e.D = transmission(from_record(record), c.d_energy).D;
  }
  validate(e);
  return e;
}

Result run_arrow(const ArrowCmd& c) {
  const EnsembleConfig e = ensemble_from(c);
  const auto traj = run_ensemble(e);
  const int window = std::min<int>(c.window, static_cast<int>(traj.size()));
  const EntropyTrend trend = entropy_trend(traj, window);
  Result r;
  r.seed = e.seed;
  r.table.columns = {"step", "n_left", "f_left", "entropy_nats"};
  for (const auto& t : traj)
    r.table.rows.push_back({static_cast<long long>(t.step), static_cast<long long>(t.n_left), t.f_left, t.entropy});

  r.extra["config"] = {{"n_walkers", e.n_walkers},
                       {"D", e.D},
                       {"attempt_rate", e.attempt_rate},
                       {"n_steps", e.n_steps},
                       {"seed", e.seed},
                       {"initial_left_fraction", e.initial_left_fraction},
                       {"placement", e.placement == InitialPlacement::Exact ? "exact" : "binomial"}};
  r.extra["rng"] = std::string(Rng::kAlgorithm);
  r.extra["entropy_trend"] = {{"window", window},
                              {"verdict", std::string(to_string(trend.verdict))},
                              {"max_decrease", trend.max_decrease},
                              {"tolerance", trend.tolerance}};
  r.extra["final_f_left"] = traj.back().f_left;
  r.verdicts.push_back("entropy trend (window " + std::to_string(window) + "): " +
                       std::string(to_string(trend.verdict)) + ", max decrease " +
                       format_significant(trend.max_decrease, 3) + " nats, tolerance " +
                       format_significant(trend.tolerance, 3));
  const double p = crossing_probability(e);
  if (p == 0.0 || p == 1.0)
    r.verdicts.push_back("degenerate configuration (a*D = " + format_shortest(p) + "): the chain does not mix");

  if (c.reversal_trials > 0) {
    const ReversalReport rep = reversal_test(e, c.reversal_trials, c.epsilon);
    r.extra["reversal"] = {{"trials", rep.trials},
                           {"horizon", rep.horizon},
                           {"epsilon", rep.epsilon},
                           {"forward_relaxation_probability", rep.forward_relaxation_probability},
                           {"return_probability", rep.return_probability},
                           {"returns_observed", rep.returns_observed},
                           {"return_upper_bound_mc", rep.return_upper_bound_mc},
                           {"log10_return_bound_analytic", rep.log10_return_bound_analytic},
                           {"degenerate", rep.degenerate}};
    r.verdicts.push_back("reversal: left ordered state in " + format_significant(rep.forward_relaxation_probability, 4) +
                         " of trials, returned in " + std::to_string(rep.returns_observed) + "/" +
                         std::to_string(rep.trials) + " (MC upper bound " +
                         format_significant(rep.return_upper_bound_mc, 3) + ", analytic log10 bound " +
                         format_significant(rep.log10_return_bound_analytic, 4) + ")");
  }
  r.gnuplot = "set datafile separator ','; set xlabel 'step'; plot 'FILE' skip 1 using 1:3 title 'f_left' with lines, "
              "'' skip 1 using 1:4 title 'entropy' with lines axes x1y2";
  return r;
}

// ---------------------------------------------------------------------------
// output

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string csv_cell(const Cell& c, int digits) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_significant(v, digits);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_field(v);
      },
      c);
}

json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (v.empty()) return nullptr;
        }
        return v;
      },
      c);
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest_for(const CLI::App* sub, const Result& r) {
  json params = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
      params[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  json m = {{"subcommand", sub->get_name()}, {"parameters", params}};
  m["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  m["toolkit_version"] = std::string(kVersion);
  m["constants_table_id"] = std::string(kConstantsTableId);
  m["timestamp"] = iso_timestamp();
  return m;
}

void write_output(const CLI::App* sub, const CommonArgs& common, const Result& r, std::ostream& out,
                  std::ostream& err) {
  const json manifest = manifest_for(sub, r);
  std::ostringstream payload;
  if (common.format == "json") {
    json doc = {{"manifest", manifest}};
    for (const auto& [k, v] : r.extra.items()) doc[k] = v;
    if (!r.verdicts.empty()) doc["verdict_lines"] = r.verdicts;
    json rows = json::array();
    for (const auto& row : r.table.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = json_cell(row[i]);
      rows.push_back(obj);
    }
    doc["rows"] = rows;
    payload << doc.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < r.table.columns.size(); ++i) payload << (i ? "," : "") << csv_field(r.table.columns[i]);
    payload << '\n';
    for (const auto& row : r.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) payload << (i ? "," : "") << csv_cell(row[i], common.digits);
      payload << '\n';
    }
    for (const auto& v : r.verdicts) err << v << '\n';
  }

  if (common.out == "-") {
    out << payload.str();
  } else {
    std::ofstream f(common.out, std::ios::binary);
    if (!f) throw DomainError("cannot write '" + common.out + "'");
    f << payload.str();
  }
  std::string manifest_path = common.manifest;
  if (manifest_path.empty() && common.format == "csv" && common.out != "-") manifest_path = common.out + ".manifest.json";
  if (!manifest_path.empty()) {
    std::ofstream f(manifest_path, std::ios::binary);
    if (!f) throw DomainError("cannot write '" + manifest_path + "'");
    f << manifest.dump(2) << '\n';
  }
  if (common.gnuplot_hint && !r.gnuplot.empty()) {
    std::string hint = r.gnuplot;
    const std::string file = common.out == "-" ? "data.csv" : common.out;
    for (auto pos = hint.find("FILE"); pos != std::string::npos; pos = hint.find("FILE", pos + file.size()))
      hint.replace(pos, 4, file);
    err << "gnuplot: " << hint << '\n';
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tunnelkit: field-emission and field-ionization tunnelling numerics", "tunnelkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs common;

  BarrierCmd barrier;
  auto* s_barrier = app.add_subcommand("barrier", "Zeros, peak and Schottky lowering of a motive-energy profile");
  add_profile_options(s_barrier, barrier.profile, false);
  s_barrier->add_option("--energy", barrier.energy, "Electron energy above the reference level, eV")->capture_default_str();
  s_barrier->add_option("--samples", barrier.samples, "Emit M(z) at this many points instead of the geometry");

  TransmitCmd transmit;
  auto* s_transmit = app.add_subcommand("transmit", "First-order JWKB Gamow exponent and transmission probability");
  add_profile_options(s_transmit, transmit.profile, true);
  s_transmit->add_option("--offset", transmit.offsets, "Energy offsets above the reference level, eV (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  s_transmit->add_option("--direction", transmit.direction, "ltr or rtl")->capture_default_str();

  OracleCmd oracle;
  auto* s_oracle = app.add_subcommand("oracle", "Exact transfer-matrix transmission and reflection");
  add_profile_options(s_oracle, oracle.profile, false);
  s_oracle->add_option("--energy", oracle.energies, "Electron energies on the motive scale, eV (comma list)")
      ->delimiter(',')
      ->required();
  s_oracle->add_option("--direction", oracle.direction, "ltr or rtl")->capture_default_str();
  add_scatter_options(s_oracle, oracle.scatter);

  CompareCmd compare;
  auto* s_compare = app.add_subcommand("compare", "JWKB against the exact solver over an energy sweep");
  add_profile_options(s_compare, compare.profile, false);
  s_compare->add_option("--energies", compare.energies, "Energies, eV (comma list)")->delimiter(',');
  s_compare->add_option("--e-min", compare.e_min, "Sweep start, eV");
  s_compare->add_option("--e-max", compare.e_max, "Sweep end, eV");
  s_compare->add_option("--steps", compare.steps, "Sweep points");
  add_scatter_options(s_compare, compare.scatter);

  WellCmd well;
  auto* s_well = app.add_subcommand("well", "Sommerfeld well levels and entity-normalised wave-functions");
  s_well->add_option("--length-nm", well.length, "Well length L, nm")->required();
  s_well->add_option("--n", well.n, "Quantum number")->capture_default_str();
  s_well->add_option("--grid", well.grid, "Emit wave-function samples at this many grid points");
  s_well->add_option("--norm", well.norm, "conventional, entity, charge or mass")->capture_default_str();

  EsfiCmd esfi;
  auto* s_esfi = app.add_subcommand("esfi", "Axial field-ionization Gamow exponent of a hydrogenic entity");
  add_species_options(s_esfi, esfi.species);
  s_esfi->add_option("--phi", esfi.phi, "Emitter work function, eV")->capture_default_str();
  s_esfi->add_option("--field", esfi.field, "Field, V/nm");
  s_esfi->add_option("--placement", esfi.placement, "none, electron_centroid, nucleus_opposite")->capture_default_str();
  s_esfi->add_option("--surface-distance", esfi.surface_distance, "Nucleus to surface, nm (default: critical distance)");
  s_esfi->add_flag("--sensitivity", esfi.sensitivity, "Report all three image placements");
  s_esfi->add_flag("--usable", esfi.usable, "Report the usable-rate field interval per placement");
  s_esfi->add_option("--min-decay", esfi.min_decay, "Lower edge of the usable exp(-G) band")->capture_default_str();
  s_esfi->add_option("--max-decay", esfi.max_decay, "Upper edge of the usable exp(-G) band")->capture_default_str();

  FimCmd fim;
  auto* s_fim = app.add_subcommand("fim", "FIM facet contrast: tunnelling-integral vs overlap-integral ETRs");
  s_fim->add_option("--config", fim.config, "Facet description file");
  add_species_options(s_fim, fim.species);
  fim.phi_opt = s_fim->add_option("--phi", fim.phi, "Emitter work function, eV")->capture_default_str();
  fim.field_opt = s_fim->add_option("--field", fim.field, "Base field F0, V/nm")->capture_default_str();
  fim.tau_opt = s_fim->add_option("--tau", fim.tau, "Resolution threshold")->capture_default_str();

  ArrowCmd arrow;
  auto* s_arrow = app.add_subcommand("arrow", "Two-region crossing ensemble: occupancy, entropy and reversal statistics");
  s_arrow->add_option("--config", arrow.config, "Ensemble config file");
  arrow.opts["--walkers"] = s_arrow->add_option("--walkers", arrow.ensemble.n_walkers, "Number of walkers")->capture_default_str();
  arrow.opts["--D"] = s_arrow->add_option("--D", arrow.ensemble.D, "Crossing probability per attempt")->capture_default_str();
  arrow.opts["--attempt-rate"] =
      s_arrow->add_option("--attempt-rate", arrow.ensemble.attempt_rate, "Attempts per step per walker")->capture_default_str();
  arrow.opts["--steps"] = s_arrow->add_option("--steps", arrow.ensemble.n_steps, "Steps")->capture_default_str();
  arrow.opts["--seed"] = s_arrow->add_option("--seed", arrow.ensemble.seed, "RNG seed (fallback: TUNNELKIT_SEED, then 42)");
  arrow.opts["--initial-left"] = s_arrow->add_option("--initial-left", arrow.ensemble.initial_left_fraction,
                                                     "Initial left fraction")->capture_default_str();
  s_arrow->add_flag("--binomial-start", arrow.binomial_start, "Place walkers independently at random");
  s_arrow->add_option("--window", arrow.window, "Entropy averaging window")->capture_default_str();
  s_arrow->add_option("--reversal-trials", arrow.reversal_trials, "Run the reversal test with this many trials");
  s_arrow->add_option("--epsilon", arrow.epsilon, "Ordered-state tolerance for the reversal test")->capture_default_str();
  s_arrow->add_option("--d-from-profile", arrow.d_profile, "Take D from the JWKB transmission of this barrier file");
  s_arrow->add_option("--energy", arrow.d_energy, "Energy offset for --d-from-profile, eV");

  for (auto* sub : {s_barrier, s_transmit, s_oracle, s_compare, s_well, s_esfi, s_fim, s_arrow}) add_common(sub, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    // Prints the selected subcommand's help when one was given.
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "tunnelkit: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    Result r;
    if (sub == s_barrier) r = run_barrier(barrier);
    else if (sub == s_transmit) r = run_transmit(transmit, common.jobs);
    else if (sub == s_oracle) r = run_oracle(oracle, common.jobs);
    else if (sub == s_compare) r = run_compare(compare, common.jobs);
    else if (sub == s_well) r = run_well(well);
    else if (sub == s_esfi) r = run_esfi(esfi);
    else if (sub == s_fim) r = run_fim(fim);
    else r = run_arrow(arrow);
    write_output(sub, common, r, out, err);
  } catch (const ConvergenceError& e) {
    err << "tunnelkit: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    err << "tunnelkit: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace tunnelkit::cli
