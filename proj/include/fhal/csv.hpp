#pragma once

// Trajectory CSV emitter: header row, t first, then state components, then
// bound columns; 12 significant digits; LF line endings.  Output is
// byte-deterministic for identical inputs.

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "fhal/fdde_sim.hpp"

namespace fhal {

struct BoundColumn {
  std::string name;
  std::function<double(double)> fn;
};

namespace csv_detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

}  // namespace csv_detail

// One trajectory (labels, e.g. {"x_1","x_2","y_1"}) per call; states may be
// spliced from several trajectories on the same mesh by the caller.
inline void write_trajectory_csv(const std::string& path,
                                 const std::vector<std::string>& labels,
                                 const std::vector<double>& times,
                                 const std::vector<Vector>& states,
                                 const std::vector<BoundColumn>& bounds = {}) {
  if (times.size() != states.size())
    throw std::invalid_argument("csv: times/states size mismatch");
  std::ofstream out(path, std::ios::binary);  // LF only, no CRLF translation
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  out << "t";
  for (const auto& l : labels) out << "," << l;
  for (const auto& b : bounds) out << "," << b.name;
  out << "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (states[i].size() != labels.size())
      throw std::invalid_argument("csv: state width does not match labels");
    out << csv_detail::fmt(times[i]);
    for (double v : states[i]) out << "," << csv_detail::fmt(v);
    for (const auto& b : bounds) out << "," << csv_detail::fmt(b.fn(times[i]));
    out << "\n";
  }
  if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

}  // namespace fhal
