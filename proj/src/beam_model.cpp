#include "stbeam/beam_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stbeam/errors.hpp"

namespace stbeam {

double section_properties(const CrossSection& cross_section) {
  if (const auto* direct = std::get_if<DirectSection>(&cross_section)) {
    if (!(direct->second_moment_of_area > 0.0)) {
      throw GeometryError("second moment of area must be positive");
    }
    return direct->second_moment_of_area;
  }
  const auto& annulus = std::get<AnnularSection>(cross_section);
  const double outer = annulus.outer_diameter;
  const double inner = annulus.inner_diameter;
  if (!(outer > 0.0) || inner < 0.0 || inner >= outer) {
    std::ostringstream msg;
    msg << "invalid annulus: outer diameter " << outer << " m, inner diameter " << inner << " m";
    throw GeometryError(msg.str());
  }
  const double outer4 = outer * outer * outer * outer;
  const double inner4 = inner * inner * inner * inner;
  return std::numbers::pi * (outer4 - inner4) / 64.0;
}

void validate(const PhysicalConfig& config) {
  if (!(config.modulus_of_elasticity > 0.0)) {
    throw GeometryError("modulus of elasticity must be positive");
  }
  if (!(config.linear_mass_density > 0.0)) {
    throw GeometryError("linear mass density must be positive");
  }
  if (!(config.length > 0.0)) {
    throw GeometryError("length must be positive");
  }
  if (!std::isfinite(config.gravity)) {
    throw GeometryError("gravity must be finite");
  }
  if (config.end_body.mass < 0.0) {
    throw GeometryError("end-body mass must be non-negative");
  }
  if (config.end_body.rotary_inertia < 0.0) {
    throw GeometryError("end-body rotary inertia must be non-negative");
  }
  section_properties(config.cross_section);  // throws on bad geometry
}

DimensionlessParams nondimensionalize(const PhysicalConfig& config) {
  validate(config);

  const double second_moment = section_properties(config.cross_section);
  const double flexural_rigidity = config.modulus_of_elasticity * second_moment;
  const double length = config.length;
  const double mass_per_length = config.linear_mass_density;

  DimensionlessParams params;
  params.end_mass_ratio = config.end_body.mass / (mass_per_length * length);
  params.end_inertia_ratio =
      config.end_body.rotary_inertia / (mass_per_length * length * length * length);
  params.eccentricity_ratio = config.end_body.eccentricity / length;
  params.length_scale = length;
  params.time_scale =
      std::sqrt(mass_per_length * length * length * length * length / flexural_rigidity);

  // Axial force, compression positive: the weight of the beam above height Z
  // plus (optionally) the end body's weight. Sampled at both ends; the
  // profile in between is linear in z.
  const double tip_mass =
      config.include_tip_weight_in_axial_load ? config.end_body.mass : 0.0;
  const double load_scale = length * length / flexural_rigidity;
  const double load_base = config.gravity * (mass_per_length * length + tip_mass) * load_scale;
  const double load_tip = config.gravity * tip_mass * load_scale;
  params.axial_load_at_base = load_base;
  params.axial_load_slope = load_tip - load_base;
  return params;
}

}  // namespace stbeam
