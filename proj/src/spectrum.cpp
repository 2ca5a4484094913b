#include "magflow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magflow {

namespace {

void require_valid(int k, double field) {
  if (k < 1) throw std::invalid_argument("tensor power k must be >= 1");
  if (!(field > 0.0) || !std::isfinite(field)) throw std::invalid_argument("field B must be positive");
}

}  // namespace

int level_count(int k, double field) {
  require_valid(k, field);
  const long double kb = static_cast<long double>(k) * field;
  return static_cast<int>(std::floor(kb + 1e-9L * (1.0L + kb)));
}

SpectrumEntry level(int k, double field, int m) {
  require_valid(k, field);
  const long double kb = static_cast<long double>(k) * field;
  const long double mm = m;
  const long double lambda = (2.0L * kb * (2.0L * mm + 1.0L) - 2.0L * mm * (mm + 1.0L)) / 4.0L;
  const long double kk = static_cast<long double>(k) * k;
  return {k, m, static_cast<double>(lambda), static_cast<double>(lambda / kk)};
}

std::vector<SpectrumEntry> ladder(int k, double field) {
  const int count = level_count(k, field);
  std::vector<SpectrumEntry> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) out.push_back(level(k, field, m));
  return out;
}

SpectrumEntry select_level(int k, double field, double energy) {
  require_valid(k, field);
  if (energy < 0.0) throw std::invalid_argument("energy must be nonnegative");
  if (energy >= 0.5 * field * field) {
    throw std::domain_error("ladder does not reach above the critical energy");
  }
  const int count = level_count(k, field);
  if (count == 0) throw std::domain_error("empty ladder: kB < 1");
  // scaled ~ beta(m/k) with beta(s) = Bs - s^2/2; invert on the increasing branch.
  const double s = field - std::sqrt(field * field - 2.0 * energy);
  const int guess = static_cast<int>(std::floor(s * k - 0.5));
  SpectrumEntry best = level(k, field, 0);
  double best_err = std::abs(best.scaled - energy);
  for (int m = std::max(0, guess - 2); m <= std::min(count - 1, guess + 3); ++m) {
    const SpectrumEntry e = level(k, field, m);
    const double err = std::abs(e.scaled - energy);
    if (err < best_err || (err == best_err && m < best.m)) {
      best = e;
      best_err = err;
    }
  }
  return best;
}

CriticalGap critical_gap(int k, double field) {
  const int top = level_count(k, field);
  const double ec = 0.5 * field * field;
  const double below = top >= 1 ? std::abs(level(k, field, top - 1).scaled - ec) : ec;
  return {below, std::abs(level(k, field, top).scaled - ec)};
}

}  // namespace magflow
