#include "qev/units.hpp"

namespace qev {

const char* to_string(QuantityRole role) {
  switch (role) {
    case QuantityRole::time: return "time";
    case QuantityRole::position: return "position";
    case QuantityRole::energy: return "energy";
    case QuantityRole::momentum: return "momentum";
    case QuantityRole::potential: return "potential";
    case QuantityRole::mass: return "mass";
  }
  return "?";
}

QuantityRole role_from_string(const std::string& name) {
  if (name == "time") return QuantityRole::time;
  if (name == "position") return QuantityRole::position;
  if (name == "energy") return QuantityRole::energy;
  if (name == "momentum") return QuantityRole::momentum;
  if (name == "potential") return QuantityRole::potential;
  if (name == "mass") return QuantityRole::mass;
  throw ConfigError("unknown quantity role: " + name);
}

Real natural_per_si(QuantityRole role) {
  constexpr Real c = UnitSystem::c;
  constexpr Real e = UnitSystem::e_charge;
  constexpr Real hbar = UnitSystem::hbar;
  switch (role) {
    case QuantityRole::time: return c;
    case QuantityRole::position: return 1.0;
    case QuantityRole::energy: return 1.0 / (hbar * c);
    case QuantityRole::momentum: return 1.0 / hbar;
    case QuantityRole::potential: return e / (hbar * c);
    case QuantityRole::mass: return c / hbar;
  }
  return 1.0;
}

TaggedQuantity convert_units(const TaggedQuantity& q, UnitMode to) {
  if (q.mode == to) return q;
  const Real factor = natural_per_si(q.role);
  TaggedQuantity out = q;
  out.mode = to;
  out.value = (to == UnitMode::natural) ? q.value * factor : q.value / factor;
  return out;
}

Real propagator_prefactor(const UnitSystem& units) {
  return units.mode == UnitMode::si ? UnitSystem::hbar * UnitSystem::hbar : 1.0;
}

}  // namespace qev
