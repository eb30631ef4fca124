#pragma once

#include <vector>

#include "smr/matrix.hpp"

namespace smr {

// Sampling grid of angular frequencies (rad/s), strictly increasing.
struct FrequencyGrid {
  enum class Scale { Log, Linear };

  std::vector<double> points;
  Scale scale = Scale::Log;

  static FrequencyGrid log_space(double lo, double hi, int count);
  static FrequencyGrid linear_space(double lo, double hi, int count);

  void validate() const;
};

}  // namespace smr
