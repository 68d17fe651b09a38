#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaxnn/systems.hpp"

namespace relaxnn {

struct SamplingCounts {
  int interior = 2540;
  int ic = 320;
  int bc = 160;
};

// Rows of (t, x[, z...]) coordinates. Interior points are uniform over the
// rectangle, ic points sit at t = t0 exactly, bc points split evenly between
// the two spatial boundaries. In stochastic mode each point carries z ~
// U([-1,1]^z_dim).
struct PointSets {
  int coord_dim = 2;
  std::vector<double> interior;
  std::vector<double> ic;
  std::vector<double> bc;

  int n_interior() const { return static_cast<int>(interior.size()) / coord_dim; }
  int n_ic() const { return static_cast<int>(ic.size()) / coord_dim; }
  int n_bc() const { return static_cast<int>(bc.size()) / coord_dim; }
  const double* interior_row(int i) const { return interior.data() + static_cast<std::size_t>(i) * coord_dim; }
  const double* ic_row(int i) const { return ic.data() + static_cast<std::size_t>(i) * coord_dim; }
  const double* bc_row(int i) const { return bc.data() + static_cast<std::size_t>(i) * coord_dim; }
};

PointSets sample_points(const ProblemSpec& problem, const SamplingCounts& counts,
                        int z_dim, std::uint64_t seed);

// Columns: set, t, x, z0..; for inspection.
void write_points_csv(const PointSets& points, const std::string& path);

}  // namespace relaxnn
