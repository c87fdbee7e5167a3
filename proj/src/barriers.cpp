#include "tunnelkit/barriers.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/kvconfig.hpp"
#include "tunnelkit/numerics.hpp"

namespace tunnelkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The image term only exists when both a placement and a non-zero coefficient
// are set; with either missing the hydrogenic profile is the free-space one.
ImagePlacement effective_placement(const BarrierProfile& p) {
  if (p.kind != BarrierKind::HydrogenicAxial || p.image_coefficient == 0.0) return ImagePlacement::None;
  return p.placement;
}

bool is_linear_sn(const BarrierProfile& p) {
  return p.kind == BarrierKind::Triangular ||
         (p.kind == BarrierKind::SchottkyNordheim && p.image_coefficient == 0.0);
}

// Coefficient C of the -C/z term for the closed-form kinds.
double inverse_z_coefficient(const BarrierProfile& p) {
  if (p.kind == BarrierKind::SchottkyNordheim) return p.image_coefficient;
  return p.charge_number * units::coulomb_coefficient();
}

// Roots of M = h - F z - C/z, i.e. F z^2 - h z + C = 0, using the
// cancellation-free pairing of the two roots.
BarrierGeometry inverse_z_geometry(double h, double F, double C) {
  if (F == 0.0) {
    if (h > 0.0) throw DomainError("no outer zero: zero field leaves the barrier unbounded");
    return {0.0, 0.0, kInf, h, true};
  }
  const double z_peak = std::sqrt(C / F);
  const double M_peak = h - 2.0 * std::sqrt(C * F);
  const double disc = h * h - 4.0 * F * C;
  if (h <= 0.0 || disc <= 0.0) return {z_peak, z_peak, z_peak, M_peak, true};
  const double s = std::sqrt(disc);
  return {2.0 * C / (h + s), (h + s) / (2.0 * F), z_peak, M_peak, false};
}

double image_term(const BarrierProfile& p, double z) {
  switch (effective_placement(p)) {
    case ImagePlacement::ElectronCentroid:
      return p.image_coefficient / (p.surface_distance - z);
    case ImagePlacement::NucleusOpposite:
      return 2.0 * p.image_coefficient / (2.0 * p.surface_distance - z);
    case ImagePlacement::None:
      break;
  }
  return 0.0;
}

// Numerical geometry for the near-surface hydrogenic profiles. M is concave
// on (0, domain_end), so the peak is unique and there are at most two zeros.
BarrierGeometry numeric_geometry(const BarrierProfile& p, double energy) {
  const double end = domain_end(p);
  auto shifted = [&](double z) { return motive_energy(p, z) - energy; };

  const double lo = end * 1e-12;
  const double hi = end * (1.0 - 1e-12);
  const auto peak = numerics::golden_section_max(shifted, lo, hi);
  if (peak.value <= 0.0) return {peak.x, peak.x, peak.x, peak.value, true};

  // Starting brackets from the image-free roots where they exist.
  const double C = inverse_z_coefficient(p);
  const double h = p.height - energy;
  double inner = 0.5 * peak.x;
  double outer = 0.5 * (peak.x + end);
  if (p.field > 0.0 && h * h > 4.0 * p.field * C) {
    const double s = std::sqrt(h * h - 4.0 * p.field * C);
    inner = std::min(inner, 2.0 * C / (h + s));
    const double z2_free = (h + s) / (2.0 * p.field);
    if (z2_free > peak.x && z2_free < end) outer = z2_free;
  }
  while (shifted(inner) > 0.0) inner *= 0.5;
  while (shifted(outer) > 0.0) {
    const double expanded = peak.x + 2.0 * (outer - peak.x);
    outer = expanded < end ? expanded : end - 0.5 * (end - outer);
  }

  BarrierGeometry g;
  g.z_peak = peak.x;
  g.M_peak = peak.value;
  g.z1 = numerics::bisect(shifted, inner, peak.x, 0.0);
  g.z2 = numerics::bisect(shifted, peak.x, outer, 0.0);
  return g;
}

double peak_numeric(const BarrierProfile& p) {
  const double end = domain_end(p);
  double hi = end;
  if (!std::isfinite(hi)) {
    // M <= height - F z for every kind with a field, so the peak lies below height / F.
    if (p.field <= 0.0) throw DomainError("peak search needs a positive field");
    hi = p.height / p.field;
  }
  auto M = [&](double z) { return motive_energy(p, z); };
  return numerics::golden_section_max(M, hi * 1e-12, hi * (1.0 - 1e-12)).value;
}

}  // namespace

void validate(const BarrierProfile& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.height) || p.height <= 0.0) throw DomainError("height_param must be positive");
  if (!finite(p.field) || p.field < 0.0) throw DomainError("field must be non-negative");
  if (!finite(p.image_coefficient) || p.image_coefficient < 0.0)
    throw DomainError("image_coefficient must be non-negative");
  switch (p.kind) {
    case BarrierKind::Rectangular:
      if (!finite(p.width) || p.width < 0.0) throw DomainError("width must be non-negative");
      break;
    case BarrierKind::StraightLineEquivalent:
      if (!finite(p.width) || p.width <= 0.0) throw DomainError("width must be positive");
      break;
    case BarrierKind::HydrogenicAxial:
      if (!finite(p.charge_number) || p.charge_number <= 0.0) throw DomainError("Z must be positive");
      if (effective_placement(p) != ImagePlacement::None &&
          (!finite(p.surface_distance) || p.surface_distance <= 0.0))
        throw DomainError("surface_distance must be positive when an image placement is set");
      break;
    default:
      break;
  }
}

BarrierProfile schottky_nordheim(double phi, double field) {
  return schottky_nordheim(phi, field, units::image_coefficient());
}

BarrierProfile schottky_nordheim(double phi, double field, double image_coefficient) {
  BarrierProfile p;
  p.kind = BarrierKind::SchottkyNordheim;
  p.height = phi;
  p.field = field;
  p.image_coefficient = image_coefficient;
  validate(p);
  return p;
}

BarrierProfile triangular(double phi, double field) {
  BarrierProfile p;
  p.kind = BarrierKind::Triangular;
  p.height = phi;
  p.field = field;
  validate(p);
  return p;
}

BarrierProfile rectangular(double step_height, double width) {
  BarrierProfile p;
  p.kind = BarrierKind::Rectangular;
  p.height = step_height;
  p.width = width;
  validate(p);
  return p;
}

BarrierProfile straight_line_equivalent(double height, double width) {
  BarrierProfile p;
  p.kind = BarrierKind::StraightLineEquivalent;
  p.height = height;
  p.width = width;
  validate(p);
  return p;
}

BarrierProfile hydrogenic_axial(double ionization_energy, double charge_number, double field,
                                ImagePlacement placement, double surface_distance) {
  BarrierProfile p;
  p.kind = BarrierKind::HydrogenicAxial;
  p.height = ionization_energy;
  p.charge_number = charge_number;
  p.field = field;
  p.image_coefficient = units::image_coefficient();
  p.placement = placement;
  p.surface_distance = surface_distance;
  validate(p);
  return p;
}

bool has_singularity(const BarrierProfile& p) {
  return p.kind == BarrierKind::HydrogenicAxial ||
         (p.kind == BarrierKind::SchottkyNordheim && p.image_coefficient > 0.0);
}

double domain_end(const BarrierProfile& p) {
  switch (effective_placement(p)) {
    case ImagePlacement::ElectronCentroid:
      return p.surface_distance;
    case ImagePlacement::NucleusOpposite:
      return 2.0 * p.surface_distance;
    case ImagePlacement::None:
      break;
  }
  return kInf;
}

double motive_energy(const BarrierProfile& p, double z) {
  if (std::isnan(z)) throw DomainError("motive_energy: z is NaN");
  if (is_linear_sn(p)) {
    if (z < 0.0) throw DomainError("motive_energy: z must be >= 0");
    return p.height - p.field * z;
  }
  switch (p.kind) {
    case BarrierKind::SchottkyNordheim:
      if (z <= 0.0) throw DomainError("motive_energy: image singularity at z <= 0");
      return p.height - p.field * z - p.image_coefficient / z;
    case BarrierKind::Rectangular:
      return (z >= 0.0 && z < p.width) ? p.height : 0.0;
    case BarrierKind::StraightLineEquivalent:
      return (z >= 0.0 && z <= p.width) ? p.height * (1.0 - z / p.width) : 0.0;
    case BarrierKind::HydrogenicAxial: {
      if (z <= 0.0) throw DomainError("motive_energy: Coulomb singularity at z <= 0");
      if (z >= domain_end(p)) throw DomainError("motive_energy: z beyond the image singularity");
      const double coulomb = p.charge_number * units::coulomb_coefficient() / z;
      return p.height - coulomb - p.field * z - image_term(p, z);
    }
    case BarrierKind::Triangular:
      break;
  }
  return p.height - p.field * z;
}

BarrierGeometry barrier_geometry(const BarrierProfile& p, double energy) {
  validate(p);
  if (!std::isfinite(energy)) throw DomainError("energy must be finite");
  const double h = p.height - energy;

  if (is_linear_sn(p)) {
    if (h <= 0.0) return {0.0, 0.0, 0.0, h, true};
    if (p.field == 0.0) throw DomainError("no outer zero: zero field leaves the barrier unbounded");
    return {0.0, h / p.field, 0.0, h, false};
  }

  switch (p.kind) {
    case BarrierKind::SchottkyNordheim:
      return inverse_z_geometry(h, p.field, p.image_coefficient);
    case BarrierKind::HydrogenicAxial:
      if (effective_placement(p) == ImagePlacement::None)
        return inverse_z_geometry(h, p.field, inverse_z_coefficient(p));
      return numeric_geometry(p, energy);
    case BarrierKind::Rectangular:
      if (energy < 0.0) throw DomainError("no outer zero: energy below the flat asymptote");
      if (h <= 0.0 || p.width == 0.0) return {0.0, 0.0, 0.0, h, true};
      return {0.0, p.width, 0.0, h, false};
    case BarrierKind::StraightLineEquivalent:
      if (energy < 0.0) throw DomainError("no outer zero: energy below the flat asymptote");
      if (h <= 0.0) return {0.0, 0.0, 0.0, h, true};
      return {0.0, p.width * h / p.height, 0.0, h, false};
    case BarrierKind::Triangular:
      break;
  }
  throw DomainError("unhandled barrier kind");
}

double schottky_reduction(const BarrierProfile& p) {
  validate(p);
  if (p.kind != BarrierKind::SchottkyNordheim) throw DomainError("schottky_reduction needs an SN profile");
  return 2.0 * std::sqrt(p.image_coefficient * p.field);
}

double reference_field(const BarrierProfile& p) {
  validate(p);
  if (p.kind == BarrierKind::SchottkyNordheim && p.image_coefficient > 0.0)
    return p.height * p.height / (4.0 * p.image_coefficient);
  if (p.kind == BarrierKind::HydrogenicAxial && effective_placement(p) == ImagePlacement::None)
    return p.height * p.height / (4.0 * inverse_z_coefficient(p));
  throw DomainError("reference_field has a closed form only for SN and image-free hydrogenic profiles");
}

double vanishing_field_numeric(const BarrierProfile& profile, double field_hi, double field_tol) {
  BarrierProfile p = profile;
  auto peak_at = [&](double F) {
    p.field = F;
    return peak_numeric(p);
  };
  if (peak_at(field_hi) > 0.0) throw DomainError("barrier still present at the upper field bracket");
  double lo = field_hi * 1e-9;
  if (peak_at(lo) <= 0.0) throw DomainError("barrier already vanished at the lower field bracket");
  double hi = field_hi;
  while (hi - lo > field_tol) {
    const double mid = 0.5 * (lo + hi);
    if (peak_at(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string_view to_string(BarrierKind kind) {
  switch (kind) {
    case BarrierKind::SchottkyNordheim: return "sn";
    case BarrierKind::Triangular: return "triangular";
    case BarrierKind::Rectangular: return "rectangular";
    case BarrierKind::StraightLineEquivalent: return "sle";
    case BarrierKind::HydrogenicAxial: return "hydrogenic";
  }
  return "?";
}

std::string_view to_string(ImagePlacement placement) {
  switch (placement) {
    case ImagePlacement::None: return "none";
    case ImagePlacement::ElectronCentroid: return "electron_centroid";
    case ImagePlacement::NucleusOpposite: return "nucleus_opposite";
  }
  return "?";
}

BarrierKind parse_barrier_kind(std::string_view name) {
  if (name == "sn" || name == "schottky_nordheim") return BarrierKind::SchottkyNordheim;
  if (name == "triangular") return BarrierKind::Triangular;
  if (name == "rectangular") return BarrierKind::Rectangular;
  if (name == "sle" || name == "straight_line_equivalent") return BarrierKind::StraightLineEquivalent;
  if (name == "hydrogenic" || name == "hydrogenic_axial") return BarrierKind::HydrogenicAxial;
  throw DomainError("unknown barrier kind '" + std::string(name) +
                    "' (expected sn, triangular, rectangular, sle, hydrogenic)");
}

ImagePlacement parse_image_placement(std::string_view name) {
  if (name == "none") return ImagePlacement::None;
  if (name == "electron_centroid" || name == "centroid") return ImagePlacement::ElectronCentroid;
  if (name == "nucleus_opposite" || name == "nucleus") return ImagePlacement::NucleusOpposite;
  throw DomainError("unknown image placement '" + std::string(name) +
                    "' (expected none, electron_centroid, nucleus_opposite)");
}

KeyValueRecord to_record(const BarrierProfile& p) {
  return {
      {"kind", std::string(to_string(p.kind))},
      {"height_param", format_shortest(p.height)},
      {"F", format_shortest(p.field)},
      {"image_coefficient", format_shortest(p.image_coefficient)},
      {"Z", format_shortest(p.charge_number)},
      {"width", format_shortest(p.width)},
      {"image_placement", std::string(to_string(p.placement))},
      {"surface_distance", format_shortest(p.surface_distance)},
  };
}

BarrierProfile from_record(const KeyValueRecord& r) {
  static const char* const kKeys[] = {"kind", "height_param", "F", "image_coefficient",
                                      "Z", "width", "image_placement", "surface_distance"};
  for (const auto& [key, value] : r) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw DomainError("unknown barrier key '" + key + "'");
  }
  auto get = [&](const char* key) -> const std::string* {
    auto it = r.find(key);
    return it == r.end() ? nullptr : &it->second;
  };
  auto number = [&](const char* key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_double(*v, key) : fallback;
  };

  const std::string* kind = get("kind");
  if (!kind) throw DomainError("barrier record is missing 'kind'");
  BarrierProfile p;
  p.kind = parse_barrier_kind(*kind);
  p.height = number("height_param", 0.0);
  p.field = number("F", 0.0);
  const bool classical_image =
      p.kind == BarrierKind::SchottkyNordheim || p.kind == BarrierKind::HydrogenicAxial;
  p.image_coefficient = number("image_coefficient", classical_image ? units::image_coefficient() : 0.0);
  p.charge_number = number("Z", 1.0);
  p.width = number("width", 0.0);
  if (const std::string* v = get("image_placement")) p.placement = parse_image_placement(*v);
  p.surface_distance = number("surface_distance", 0.0);
  validate(p);
  return p;
}

}  // namespace tunnelkit
