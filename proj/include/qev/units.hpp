#ifndef QEV_UNITS_HPP
#define QEV_UNITS_HPP

#include "qev/common.hpp"

namespace qev {

enum class UnitMode { natural, si };

// Natural mode: c = hbar = 1, every coordinate in meters and every momentum
// component in 1/m. The SI constants restore seconds, Coulombs, Joules and
// kilograms via the fixed substitutions implemented in convert().
struct UnitSystem {
  UnitMode mode = UnitMode::natural;

  static constexpr Real c = 2.99792458e8;          // m/s
  static constexpr Real e_charge = 1.60217646e-19; // C
  static constexpr Real hbar = 1.05457148e-34;     // J s
};

enum class QuantityRole { time, position, energy, momentum, potential, mass };

const char* to_string(QuantityRole role);
QuantityRole role_from_string(const std::string& name);

struct TaggedQuantity {
  Real value = 0;
  QuantityRole role = QuantityRole::position;
  UnitMode mode = UnitMode::natural;
};

// Natural value of one SI unit of the given role:
//   time      t  -> c t        [m]
//   position  x  -> x          [m]
//   energy    E  -> E/(hbar c) [1/m]
//   momentum  p  -> p/hbar     [1/m]
//   potential A  -> e A/(hbar c) [1/m]
//   mass      m  -> m c/hbar   [1/m]
Real natural_per_si(QuantityRole role);

TaggedQuantity convert_units(const TaggedQuantity& q, UnitMode to);

// Scale factor in front of the mass-shell delta: 1 in natural units,
// hbar^2 in SI.
Real propagator_prefactor(const UnitSystem& units);

inline void require_same_mode(UnitMode a, UnitMode b, const char* what) {
  if (a != b) throw UnitMismatch(std::string(what) + ": mixed unit systems");
}

}  // namespace qev

#endif
