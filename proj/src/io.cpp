#include "magflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace magflow {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& rows) {
  os << "t,re_z,im_z,re_v,im_v\n";
  for (const TrajectorySample& r : rows) {
    os << format_number(r.t) << ',' << format_number(r.state.base.x()) << ',' << format_number(r.state.base.y())
       << ',' << format_number(r.state.v.real()) << ',' << format_number(r.state.v.imag()) << '\n';
  }
}

void write_ladder_csv(std::ostream& os, const std::vector<SpectrumEntry>& rows) {
  os << "k,m,lambda,scaled\n";
  for (const SpectrumEntry& e : rows) {
    os << e.k << ',' << e.m << ',' << format_number(e.lambda) << ',' << format_number(e.scaled) << '\n';
  }
}

void write_histogram_csv(std::ostream& os, const ComparisonReport& report) {
  os << "r_lo,r_hi,count,est_density,exact_ring_avg,rel_err\n";
  for (const RingComparison& r : report.rings) {
    os << format_number(r.r_lo) << ',' << format_number(r.r_hi) << ',' << r.count << ','
       << format_number(r.estimated) << ',' << format_number(r.exact) << ',' << format_number(r.rel_err) << '\n';
  }
}

nlohmann::json report_json(const PushforwardHistogram& hist, const ComparisonReport& report) {
  nlohmann::json j;
  j["B"] = hist.field;
  j["E"] = hist.energy;
  j["seed"] = hist.seed;
  j["samples"] = hist.samples;
  j["rings"] = hist.rings();
  j["generator"] = "philox4x32-10";
  j["period"] = hist.torus_period;
  j["radius"] = hist.edges.back();
  j["chi_square"] = json_number(report.chi_square);
  j["degrees_of_freedom"] = report.degrees_of_freedom;
  j["max_interior_rel_err"] = json_number(report.max_interior_rel_err);
  j["max_regular_rel_err"] = json_number(report.max_regular_rel_err);
  j["center_slope"] = json_number(report.center_slope);
  j["boundary_slope"] = json_number(report.boundary_slope);
  return j;
}

nlohmann::json group_json(const FuchsianGroup& group) {
  nlohmann::json j;
  j["genus"] = group.genus;
  j["inradius"] = group.inradius;
  j["circumradius"] = group.circumradius;
  j["relation"] = group.relation;
  j["relation_residual"] = group.relation_residual();
  nlohmann::json gens = nlohmann::json::array();
  for (const Moebius& g : group.generators) {
    gens.push_back({format_number(g.a()), format_number(g.b()), format_number(g.c()), format_number(g.d())});
  }
  j["generators"] = gens;
  nlohmann::json verts = nlohmann::json::array();
  for (const HPoint& v : group.vertices) {
    const Complex w = to_disk(v);
    verts.push_back({{"half_plane", {v.x(), v.y()}}, {"disk", {w.real(), w.imag()}}});
  }
  j["vertices"] = verts;
  return j;
}

void write_observable_csv(std::ostream& os, const GridObservable& f) {
  os << "x,y,value,inside\n";
  for (std::size_t iy = 0; iy < f.ny(); ++iy) {
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
      os << format_number(f.node_x(ix)) << ',' << format_number(f.node_y(iy)) << ','
         << format_number(f.value(ix, iy)) << ',' << (f.inside(ix, iy) ? 1 : 0) << '\n';
    }
  }
}

GridObservable read_observable_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("observable CSV is empty");
  struct Node {
    double x, y, value;
    bool inside;
  };
  std::vector<Node> nodes;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    Node n{};
    int inside = 0;
    if (!(row >> n.x >> n.y >> n.value >> inside)) {
      throw std::runtime_error("malformed observable CSV row: " + line);
    }
    n.inside = inside != 0;
    nodes.push_back(n);
  }
  if (nodes.empty()) throw std::runtime_error("observable CSV has no rows");
  // Row-major by y then x: nx is the length of the first run of equal y.
  std::size_t nx = 1;
  while (nx < nodes.size() && nodes[nx].y == nodes[0].y) ++nx;
  if (nodes.size() % nx != 0) throw std::runtime_error("observable CSV is not a full grid");
  const std::size_t ny = nodes.size() / nx;
  std::vector<double> values;
  std::vector<bool> inside;
  values.reserve(nodes.size());
  inside.reserve(nodes.size());
  for (const Node& n : nodes) {
    values.push_back(n.value);
    inside.push_back(n.inside);
  }
  return GridObservable{nodes.front().x, nodes[nx - 1].x, nodes.front().y, nodes.back().y,
                        nx, ny, std::move(values), std::move(inside)};
}

}  // namespace magflow
