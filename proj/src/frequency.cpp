#include "smr/frequency.hpp"

#include <cmath>

#include "smr/errors.hpp"

namespace smr {

FrequencyGrid FrequencyGrid::log_space(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw InvalidArgument("FrequencyGrid::log_space: need 0 < lo < hi, count >= 2");
  }
  FrequencyGrid g;
  g.scale = Scale::Log;
  g.points.resize(count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    g.points[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  }
  g.points.front() = lo;
  g.points.back() = hi;
  g.validate();
  return g;
}

FrequencyGrid FrequencyGrid::linear_space(double lo, double hi, int count) {
  if (!(lo >= 0.0) || !(hi > lo) || count < 2) {
    throw InvalidArgument("FrequencyGrid::linear_space: need 0 <= lo < hi, count >= 2");
  }
  FrequencyGrid g;
  g.scale = Scale::Linear;
  g.points.resize(count);
  for (int i = 0; i < count; ++i) {
    g.points[i] = lo + (hi - lo) * i / (count - 1);
  }
  g.validate();
  return g;
}

void FrequencyGrid::validate() const {
  double prev = -1.0;
  for (double w : points) {
    if (!(w >= 0.0) || !std::isfinite(w) || w <= prev) {
      throw InvalidArgument("FrequencyGrid: points must be finite, nonnegative, strictly increasing");
    }
    prev = w;
  }
}

}  // namespace smr
