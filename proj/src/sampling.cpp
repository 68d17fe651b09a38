#include "relaxnn/sampling.hpp"

#include <cstdio>
#include <stdexcept>

#include "relaxnn/rng.hpp"

namespace relaxnn {

namespace {
enum StreamTag : std::uint64_t { kInterior = 1, kIc = 2, kBc = 3 };
}

PointSets sample_points(const ProblemSpec& problem, const SamplingCounts& counts,
                        int z_dim, std::uint64_t seed) {
  if (counts.interior <= 0 || counts.ic <= 0 || counts.bc <= 0) {
    throw std::invalid_argument("sample_points: counts must be positive");
  }
  PointSets out;
  out.coord_dim = 2 + z_dim;

  auto push_z = [&](std::vector<double>& dst, Rng& rng) {
    for (int d = 0; d < z_dim; ++d) {
      dst.push_back(rng.uniform(-1.0, 1.0));
    }
  };

  {
    Rng rng(seed, kInterior);
    out.interior.reserve(static_cast<std::size_t>(counts.interior) * out.coord_dim);
    for (int i = 0; i < counts.interior; ++i) {
      out.interior.push_back(rng.uniform(problem.t0, problem.t1));
      out.interior.push_back(rng.uniform(problem.x_min, problem.x_max));
      push_z(out.interior, rng);
    }
  }
  {
    Rng rng(seed, kIc);
    out.ic.reserve(static_cast<std::size_t>(counts.ic) * out.coord_dim);
    for (int i = 0; i < counts.ic; ++i) {
      out.ic.push_back(problem.t0);
      out.ic.push_back(rng.uniform(problem.x_min, problem.x_max));
      push_z(out.ic, rng);
    }
  }
  {
    Rng rng(seed, kBc);
    out.bc.reserve(static_cast<std::size_t>(counts.bc) * out.coord_dim);
    const int n_left = (counts.bc + 1) / 2;
    for (int i = 0; i < counts.bc; ++i) {
      out.bc.push_back(rng.uniform(problem.t0, problem.t1));
      out.bc.push_back(i < n_left ? problem.x_min : problem.x_max);
      push_z(out.bc, rng);
    }
  }
  return out;
}

void write_points_csv(const PointSets& points, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("write_points_csv: cannot open " + path);
  }
  std::fprintf(f, "set,t,x");
  for (int d = 0; d + 2 < points.coord_dim; ++d) {
    std::fprintf(f, ",z%d", d);
  }
  std::fprintf(f, "\n");
  auto dump = [&](const char* name, const std::vector<double>& rows) {
    const int n = static_cast<int>(rows.size()) / points.coord_dim;
    for (int i = 0; i < n; ++i) {
      std::fprintf(f, "%s", name);
      for (int d = 0; d < points.coord_dim; ++d) {
        std::fprintf(f, ",%.17g", rows[static_cast<std::size_t>(i) * points.coord_dim + d]);
      }
      std::fprintf(f, "\n");
    }
  };
  dump("interior", points.interior);
  dump("ic", points.ic);
  dump("bc", points.bc);
  std::fclose(f);
}

}  // namespace relaxnn
