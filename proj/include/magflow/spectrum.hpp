#pragma once

#include <vector>

namespace magflow {

/// One Landau level lambda_{k,m} = kB(m + 1/2) - m(m+1)/2 of the k-th tensor power.
struct SpectrumEntry {
  int k;
  int m;
  double lambda;
  /// lambda / k^2, comparable with the classical energy.
  double scaled;
};

/// N_k = floor(kB), tolerant to kB landing one ulp below an integer.
int level_count(int k, double field);

/// lambda_{k,m}, evaluated as (2kB(2m+1) - 2m(m+1))/4 in extended precision.
SpectrumEntry level(int k, double field, int m);

/// Entries m = 0 .. N_k - 1.
std::vector<SpectrumEntry> ladder(int k, double field);

/// Level whose scaled value is closest to E, ties toward smaller m.
/// Throws std::domain_error for E >= B^2/2 and std::invalid_argument for E < 0.
SpectrumEntry select_level(int k, double field, double energy);

/// |lambda / k^2 - E_c| at the two candidate top indices m = N_k - 1 and m = N_k.
struct CriticalGap {
  double below_top;
  double at_top;
};

CriticalGap critical_gap(int k, double field);

}  // namespace magflow
