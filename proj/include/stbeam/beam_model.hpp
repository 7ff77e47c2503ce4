#pragma once

#include <variant>

namespace stbeam {

// Cross-section given directly by its second moment of area.
struct DirectSection {
  double second_moment_of_area = 0.0;  // m^4
};

// Annular cross-section (covers the solid circle with inner_diameter = 0).
struct AnnularSection {
  double outer_diameter = 0.0;  // m
  double inner_diameter = 0.0;  // m
};

using CrossSection = std::variant<DirectSection, AnnularSection>;

// Second moment of area of the cross-section, pi*(Do^4 - Di^4)/64 for the
// annulus, passthrough for the direct form. Throws GeometryError on
// non-positive or inverted diameters.
double section_properties(const CrossSection& cross_section);

struct EndBody {
  double mass = 0.0;            // kg
  double rotary_inertia = 0.0;  // kg m^2 about its own center of mass
  double eccentricity = 0.0;    // m, signed offset of the center of mass along the beam axis
};

// Dimensional description of the standing cantilever: uniform Euler-Bernoulli
// beam clamped at the ground, rigid body attached at the free (top) end,
// axially loaded by its own weight (and optionally the end body's weight).
struct PhysicalConfig {
  double modulus_of_elasticity = 0.0;  // Pa
  double linear_mass_density = 0.0;    // kg/m
  double length = 0.0;                 // m
  CrossSection cross_section;
  EndBody end_body;
  double gravity = 9.81;  // m/s^2; negative flips to the hanging-beam case
  bool include_tip_weight_in_axial_load = true;
};

// Throws GeometryError when an invariant is violated (non-positive modulus,
// density, length; negative end-body mass or rotary inertia; bad section).
// gravity = 0 is allowed (unloaded limit); gravity < 0 is the hanging beam.
void validate(const PhysicalConfig& config);

// The dimensionless tuple that fully determines the eigenproblem, plus the
// two reference scales needed to convert results back to dimensional form.
// Compression is positive: a standing beam has axial_load_at_base > 0 and
// axial_load_slope < 0.
struct DimensionlessParams {
  double end_mass_ratio = 0.0;      // end-body mass / beam mass
  double end_inertia_ratio = 0.0;   // rotary inertia / (m L^3)
  double eccentricity_ratio = 0.0;  // eccentricity / L, signed
  double axial_load_at_base = 0.0;  // p(0)
  double axial_load_slope = 0.0;    // p(1) - p(0)
  double time_scale = 1.0;          // s; omega = sqrt(eigenvalue) / time_scale
  double length_scale = 1.0;        // m

  double load_at(double z) const { return axial_load_at_base + axial_load_slope * z; }
};

// Maps the physical description onto the dimensionless parameter tuple.
// Validates the config first.
DimensionlessParams nondimensionalize(const PhysicalConfig& config);

}  // namespace stbeam
