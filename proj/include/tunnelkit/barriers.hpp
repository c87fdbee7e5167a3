#pragma once

// One-dimensional motive-energy profiles M(z) and their geometry.
//
// M(z) is the electron potential energy minus the normal component of its
// kinetic energy; the barrier is the region where M > 0. Energies are in eV,
// distances in nm and fields in V/nm.

#include <map>
#include <string>
#include <string_view>

namespace tunnelkit {

enum class BarrierKind { SchottkyNordheim, Triangular, Rectangular, StraightLineEquivalent, HydrogenicAxial };

/// Where the image charge of the tunnelling electron is placed for a
/// hydrogenic entity close to a conducting surface.
///   ElectronCentroid: the usual self-image, -B/(d - z), following the electron.
///   NucleusOpposite:  the image is pinned at the mirror point of the nucleus,
///                     giving -2B/(2d - z). Both agree when the electron sits on
///                     the nucleus (z -> 0).
/// Neither choice is preferred here; see barriers.cpp.
enum class ImagePlacement { None, ElectronCentroid, NucleusOpposite };

struct BarrierProfile {
  BarrierKind kind = BarrierKind::SchottkyNordheim;
  /// Work function (SN, Triangular), ionization energy (HydrogenicAxial),
  /// ramp height (StraightLineEquivalent) or step height (Rectangular). eV.
  double height = 0.0;
  double field = 0.0;              // V/nm
  double image_coefficient = 0.0;  // eV nm; zero disables the image term
  double charge_number = 1.0;      // Z, HydrogenicAxial only
  double width = 0.0;              // nm, Rectangular and StraightLineEquivalent
  ImagePlacement placement = ImagePlacement::None;
  double surface_distance = 0.0;   // nm, nucleus to surface
};

/// Throws DomainError if the profile breaks its invariants.
void validate(const BarrierProfile& profile);

BarrierProfile schottky_nordheim(double phi, double field);
BarrierProfile schottky_nordheim(double phi, double field, double image_coefficient);
BarrierProfile triangular(double phi, double field);
BarrierProfile rectangular(double step_height, double width);
BarrierProfile straight_line_equivalent(double height, double width);
BarrierProfile hydrogenic_axial(double ionization_energy, double charge_number, double field,
                                ImagePlacement placement = ImagePlacement::None,
                                double surface_distance = 0.0);

/// True when M(z) -> -inf somewhere inside the domain (image or Coulomb term).
bool has_singularity(const BarrierProfile& profile);

/// Open upper end of the domain of z for a near-surface hydrogenic profile;
/// +inf for everything else.
double domain_end(const BarrierProfile& profile);

/// M(z) in eV. Throws DomainError at or beyond a singularity.
double motive_energy(const BarrierProfile& profile, double z);

struct BarrierGeometry {
  double z1 = 0.0;
  double z2 = 0.0;
  double z_peak = 0.0;
  double M_peak = 0.0;  // measured from the electron energy, i.e. max(M) - energy
  bool vanished = false;
};

/// Zeros and peak of M(z) - energy. `energy` shifts the electron energy up
/// from the reference level the profile's height is measured from. A
/// non-positive peak gives vanished = true with z1 = z2 = z_peak.
///
/// Throws DomainError when the barrier has no outer zero (zero field on an
/// unbounded profile, or a flat profile below a negative energy).
BarrierGeometry barrier_geometry(const BarrierProfile& profile, double energy = 0.0);

/// Peak lowering relative to the zero-field height of an SN barrier,
/// 2 (B F)^{1/2} (equal to c_S F^{1/2} for the classical coefficient).
double schottky_reduction(const BarrierProfile& profile);

/// Field at which the barrier first disappears, from the closed form:
/// phi^2 / 4B for SN, I^2 / 4 Z k for the image-free hydrogenic profile.
double reference_field(const BarrierProfile& profile);

/// Same threshold found numerically: bisection in F on the sign of the peak
/// located by golden-section search. Works for every profile with a field.
double vanishing_field_numeric(const BarrierProfile& profile, double field_hi, double field_tol = 1e-9);

// Flat key/value form used by config files and the CLI.
using KeyValueRecord = std::map<std::string, std::string>;

KeyValueRecord to_record(const BarrierProfile& profile);
BarrierProfile from_record(const KeyValueRecord& record);

std::string_view to_string(BarrierKind kind);
std::string_view to_string(ImagePlacement placement);
BarrierKind parse_barrier_kind(std::string_view name);
ImagePlacement parse_image_placement(std::string_view name);

}  // namespace tunnelkit
