#include "dmsfi/units.hpp"

#include <cmath>
#include <stdexcept>

namespace dmsfi::units {

double intensity_to_field(double w_cm2) {
  if (w_cm2 < 0.0) throw std::invalid_argument("negative intensity");
  return std::sqrt(w_cm2 / kIntensityAu);
}

double field_to_intensity(double field_au) { return field_au * field_au * kIntensityAu; }

}  // namespace dmsfi::units
