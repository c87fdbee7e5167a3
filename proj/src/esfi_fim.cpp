#include "tunnelkit/esfi_fim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/jwkb.hpp"
#include "tunnelkit/numerics.hpp"

namespace tunnelkit {
namespace {

constexpr double kRydbergEv = 13.605693122994;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

void check_species(const GasSpecies& s) {
  if (!(s.ionization_energy > 0.0)) throw DomainError("ionization energy must be positive");
  if (!(s.z_eff > 0.0)) throw DomainError("effective charge number must be positive");
}

}  // namespace

GasSpecies hydrogenic_species(std::string name, double ionization_energy) {
  GasSpecies s{std::move(name), ionization_energy, std::sqrt(ionization_energy / kRydbergEv)};
  check_species(s);
  return s;
}

GasSpecies species_by_name(std::string_view name) {
  const std::string key = lower(name);
  if (key == "h") return {"H", 13.606, 1.0};
  if (key == "he") return hydrogenic_species("He", 24.587);
  if (key == "ne") return hydrogenic_species("Ne", 21.565);
  if (key == "ar") return hydrogenic_species("Ar", 15.760);
  throw DomainError("unknown species '" + std::string(name) + "' (expected H, He, Ne, Ar)");
}

double critical_distance(const GasSpecies& species, double phi, double field) {
  check_species(species);
  if (!(field > 0.0)) throw DomainError("field must be positive");
  if (species.ionization_energy <= phi)
    throw DomainError("no critical surface (ionization energy below work function)");
  return (species.ionization_energy - phi) / field;
}

BarrierProfile axial_profile(const GasSpecies& species, double field, ImagePlacement placement,
                             double surface_distance) {
  check_species(species);
  return hydrogenic_axial(species.ionization_energy, species.z_eff, field, placement, surface_distance);
}

double over_barrier_field(const GasSpecies& species) {
  check_species(species);
  const double I = species.ionization_energy;
  return I * I / (4.0 * species.z_eff * units::coulomb_coefficient());
}

EsfiExponent esfi_rate_exponent(const GasSpecies& species, const BarrierProfile& profile) {
  check_species(species);
  if (profile.kind != BarrierKind::HydrogenicAxial || profile.height != species.ionization_energy ||
      profile.charge_number != species.z_eff)
    throw DomainError("profile is not the hydrogenic axial profile of species " + species.name);
  const GamowResult g = gamow_exponent(profile);
  return {g.G, g.vanished, g.z1, g.z2};
}

PlacementSensitivity image_placement_sensitivity(const GasSpecies& species, double phi, double field,
                                                 double surface_distance) {
  const double dc = critical_distance(species, phi, field);
  if (surface_distance < dc || surface_distance > 3.0 * dc)
    throw DomainError("surface_distance must lie in [d_c, 3 d_c] = [" + format_shortest(dc) + ", " +
                      format_shortest(3.0 * dc) + "] nm");
  PlacementSensitivity out;
  out.critical_distance = dc;
  auto run = [&](ImagePlacement placement) {
    return esfi_rate_exponent(species, axial_profile(species, field, placement, surface_distance));
  };
  out.none = run(ImagePlacement::None);
  out.electron_centroid = run(ImagePlacement::ElectronCentroid);
  out.nucleus_opposite = run(ImagePlacement::NucleusOpposite);
  return out;
}

FieldInterval usable_field_interval(const GasSpecies& species, double phi, ImagePlacement placement,
                                    const UsableRateBand& band) {
  if (!(band.min_decay > 0.0 && band.min_decay < band.max_decay && band.max_decay < 1.0))
    throw DomainError("usable band needs 0 < min_decay < max_decay < 1");
  auto exponent = [&](double F) {
    const double dc = critical_distance(species, phi, F);
    return esfi_rate_exponent(species, axial_profile(species, F, placement, dc)).G;
  };
  // G falls monotonically with F and is zero by the free-space over-barrier field.
  const double F_top = over_barrier_field(species);
  auto field_for = [&](double decay) {
    const double target = -std::log(decay);
    double lo = 0.5 * F_top;
    while (exponent(lo) < target) {
      lo *= 0.5;
      if (lo < 1e-6 * F_top) throw DomainError("usable band not reached above 1e-6 of the over-barrier field");
    }
    return numerics::bisect([&](double F) { return exponent(F) - target; }, lo, F_top, 1e-9);
  };
  return {field_for(band.min_decay), field_for(band.max_decay)};
}

std::string_view to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::Corner: return "corner";
    case SiteKind::Edge: return "edge";
    case SiteKind::Interior: return "interior";
    case SiteKind::Midpoint: return "midpoint";
  }
  return "?";
}

SiteKind parse_site_kind(std::string_view name) {
  const std::string key = lower(name);
  if (key == "corner") return SiteKind::Corner;
  if (key == "edge") return SiteKind::Edge;
  if (key == "interior") return SiteKind::Interior;
  if (key == "midpoint") return SiteKind::Midpoint;
  throw DomainError("unknown site kind '" + std::string(name) + "' (expected corner, edge, interior, midpoint)");
}

FacetSpec default_facet() {
  FacetSpec spec;
  spec.species = species_by_name("He");
  spec.sites = {
      {SiteKind::Corner, 1.10, 1.05, 1.0},
      {SiteKind::Edge, 1.05, 1.02, 1.0},
      {SiteKind::Interior, 1.00, 1.00, 1.0},
      {SiteKind::Midpoint, 0.95, 1.00, 1.0},
  };
  return spec;
}

FacetSpec facet_from_config(const KeyValueList& config) {
  FacetSpec spec;
  spec.species = species_by_name("He");
  bool have_sites = false;
  for (const auto& [key, value] : config) {
    if (key == "F0") {
      spec.base_field = parse_double(value, "F0");
    } else if (key == "species") {
      spec.species = species_by_name(value);
    } else if (key == "phi") {
      spec.phi = parse_double(value, "phi");
    } else if (key == "tau") {
      spec.tau = parse_double(value, "tau");
    } else if (key == "site") {
      std::istringstream fields(value);
      std::string kind, f, d, rho;
      fields >> kind >> f >> d >> rho;
      if (kind.empty() || f.empty() || d.empty())
        throw DomainError("site entry needs '<kind> <F_multiplier> <d_multiplier> [rho_rel]'");
      SiteTemplate site{parse_site_kind(kind), parse_double(f, "F_multiplier"), parse_double(d, "d_multiplier"),
                        rho.empty() ? 1.0 : parse_double(rho, "rho_rel")};
      spec.sites.push_back(site);
      have_sites = true;
    } else {
      throw DomainError("unknown facet key '" + key + "'");
    }
  }
  if (!have_sites) spec.sites = default_facet().sites;
  return spec;
}

std::vector<SiteModel> build_sites(const FacetSpec& spec) {
  const double dc = critical_distance(spec.species, spec.phi, spec.base_field);
  std::vector<SiteModel> sites;
  sites.reserve(spec.sites.size());
  for (const auto& t : spec.sites) {
    if (!(t.field_multiplier > 0.0 && t.distance_multiplier > 0.0 && t.rho_rel > 0.0))
      throw DomainError("site multipliers must be positive");
    sites.push_back({t.kind, spec.base_field * t.field_multiplier, dc * t.distance_multiplier,
                     spec.species.ionization_energy - spec.phi, t.rho_rel});
  }
  return sites;
}

FacetContrast facet_contrast(const std::vector<SiteModel>& facet, const GasSpecies& species, double tau) {
  check_species(species);
  if (facet.empty()) throw DomainError("facet has no sites");
  const auto ref = std::find_if(facet.begin(), facet.end(), [](const SiteModel& s) { return s.kind == SiteKind::Interior; });
  if (ref == facet.end()) throw DomainError("facet needs an interior site as the normalization reference");

  const double kappa = units::kappa_coefficient() * std::sqrt(species.ionization_energy);
  // Work with log-rates so that normalization never divides two tiny numbers.
  auto log_tunnelling = [](const SiteModel& s) {
    if (!(s.field_local > 0.0 && s.h_eff > 0.0)) throw DomainError("site needs positive F_local and H_eff");
    return -gamow_exponent(straight_line_equivalent(s.h_eff, s.h_eff / s.field_local)).G;
  };
  auto log_overlap = [&](const SiteModel& s) {
    if (!(s.d_critical > 0.0 && s.rho_rel > 0.0)) throw DomainError("site needs positive d_critical and rho_rel");
    return std::log(s.rho_rel) - 2.0 * kappa * s.d_critical;
  };
  const double ref_t = log_tunnelling(*ref);
  const double ref_o = log_overlap(*ref);

  FacetContrast out;
  for (const auto& s : facet) {
    EtrResult r;
    r.kind = s.kind;
    r.G_tunnelling = -log_tunnelling(s);
    r.etr_tunnelling = std::exp(-r.G_tunnelling - ref_t);
    r.etr_overlap = std::exp(log_overlap(s) - ref_o);
    auto agrees = [&](double rel) {
      switch (s.kind) {
        case SiteKind::Corner:
        case SiteKind::Edge: return rel > 1.0;
        case SiteKind::Midpoint: return rel < 1.0;
        case SiteKind::Interior: break;
      }
      return true;
    };
    r.tunnelling_agrees_with_image = agrees(r.etr_tunnelling);
    r.overlap_agrees_with_image = agrees(r.etr_overlap);
    out.sites.push_back(r);
  }

  auto ordering = [&](double EtrResult::*rate) -> std::optional<bool> {
    double corner_min = INFINITY, edge_min = INFINITY, edge_max = -INFINITY, interior_max = -INFINITY;
    bool has_corner = false, has_edge = false;
    for (const auto& r : out.sites) {
      const double v = r.*rate;
      if (r.kind == SiteKind::Corner) has_corner = true, corner_min = std::min(corner_min, v);
      if (r.kind == SiteKind::Edge) has_edge = true, edge_min = std::min(edge_min, v), edge_max = std::max(edge_max, v);
      if (r.kind == SiteKind::Interior) interior_max = std::max(interior_max, v);
    }
    if (!has_corner || !has_edge) return std::nullopt;
    return corner_min > edge_max && edge_min > interior_max;
  };
  out.tunnelling_explains_image = ordering(&EtrResult::etr_tunnelling);
  out.overlap_explains_image = ordering(&EtrResult::etr_overlap);

  auto resolution = [&](double EtrResult::*rate) -> std::optional<ResolutionVerdict> {
    const auto mid = std::find_if(out.sites.begin(), out.sites.end(),
                                  [](const EtrResult& r) { return r.kind == SiteKind::Midpoint; });
    if (mid == out.sites.end()) return std::nullopt;
    const double ratio = 1.0 / ((*mid).*rate);
    return ResolutionVerdict{ratio, ratio > tau};
  };
  out.tunnelling_resolution = resolution(&EtrResult::etr_tunnelling);
  out.overlap_resolution = resolution(&EtrResult::etr_overlap);
  return out;
}

std::string table_verdict(std::string_view formulation, const std::optional<bool>& explains) {
  std::string answer = !explains ? "undetermined (facet lacks corner or edge sites)"
                       : *explains ? "yes"
                                   : "no";
  return std::string(formulation) + " ETR reproduces the observed brightness order corner > edge > interior: " +
         answer;
}

}  // namespace tunnelkit
