#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "magflow/fuchsian.hpp"
#include "magflow/mc_oracle.hpp"
#include "magflow/spectrum.hpp"

namespace magflow {

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// JSON number, or the strings above when x is not finite.
nlohmann::json json_number(double x);

struct TrajectorySample {
  double t;
  HTangent state;
};

/// Columns t, re_z, im_z, re_v, im_v.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& rows);

/// Columns k, m, lambda, scaled.
void write_ladder_csv(std::ostream& os, const std::vector<SpectrumEntry>& rows);

/// Columns r_lo, r_hi, count, est_density, exact_ring_avg, rel_err.
void write_histogram_csv(std::ostream& os, const ComparisonReport& report);
nlohmann::json report_json(const PushforwardHistogram& hist, const ComparisonReport& report);

/// Generator matrices, relation residual and domain vertices.
nlohmann::json group_json(const FuchsianGroup& group);

/// Columns x, y, value, inside; rows ordered by y then x.
void write_observable_csv(std::ostream& os, const GridObservable& f);
/// Inverse of write_observable_csv; throws std::runtime_error on malformed input.
GridObservable read_observable_csv(std::istream& is);

}  // namespace magflow
