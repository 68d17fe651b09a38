#include "relaxnn/uq.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "relaxnn/kernel.hpp"
#include "relaxnn/rng.hpp"

namespace relaxnn {

double psi(std::span<const double> z, double epsilon) {
  if (z.size() != 5) {
    throw std::invalid_argument("psi: expects exactly 5 random variables");
  }
  const double inner = z[1] * z[2] + z[3];
  const double relu = inner > 0.0 ? inner : 0.0;
  return epsilon * (z[0] * relu + z[4]);
}

PrimitiveState stochastic_initial_state(const ProblemSpec& problem, const StochasticIC& ic,
                                        double x, std::span<const double> z) {
  if (static_cast<int>(z.size()) != ic.s) {
    throw std::invalid_argument("stochastic_initial_state: z dimension mismatch");
  }
  switch (ic.kind) {
    case StochasticIC::Kind::kAdditiveSum: {
      PrimitiveState s = initial_state(problem, x);
      if (x <= 0.0) {
        double sum = 0.0;
        for (double zi : z) {
          sum += zi;
        }
        s[0] += ic.epsilon * sum;
      }
      return s;
    }
    case StochasticIC::Kind::kInterfaceShift: {
      const double shift = psi(z, ic.epsilon);
      // left/right states of the underlying Riemann data
      return x <= shift ? initial_state(problem, problem.x_min)
                        : initial_state(problem, problem.x_max);
    }
  }
  throw std::logic_error("stochastic_initial_state: bad kind");
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: n must be >= 1");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton on P_n from Chebyshev-like initial guesses; roots come out
  // symmetric to machine precision.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      if (n == 1) {
        p1 = x;
      }
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

ZSampler uniform_cube_sampler(std::uint64_t seed) {
  return [seed](std::uint64_t index, std::span<double> z) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      z[j] = uniform_at(seed, index, j, -1.0, 1.0);
    }
  };
}

MeanVarianceField mc_mean_variance(const ParamSet& net, std::span<const double> grid_tx,
                                   const ZSampler& sampler, int n_samples) {
  if (n_samples < 2) {
    throw std::invalid_argument("mc_mean_variance: need at least 2 samples");
  }
  const int z_dim = net.config().input_dim - 2;
  if (z_dim < 1) {
    throw std::invalid_argument("mc_mean_variance: network has no z inputs");
  }
  const int n_points = static_cast<int>(grid_tx.size()) / 2;
  const int n_comp = net.config().output_dim;

  MeanVarianceField field;
  field.n_comp = n_comp;
  field.mean.assign(static_cast<std::size_t>(n_points) * n_comp, 0.0);
  field.variance.assign(static_cast<std::size_t>(n_points) * n_comp, 0.0);

#pragma omp parallel
  {
    kernel::NetWorkspace ws(net.config());
    std::vector<double> input(net.config().input_dim);
    std::vector<double> mean(n_comp), m2(n_comp), delta(n_comp);
#pragma omp for schedule(static)
    for (int p = 0; p < n_points; ++p) {
      input[0] = grid_tx[2 * p];
      input[1] = grid_tx[2 * p + 1];
      std::fill(mean.begin(), mean.end(), 0.0);
      std::fill(m2.begin(), m2.end(), 0.0);
      for (int i = 0; i < n_samples; ++i) {
        sampler(static_cast<std::uint64_t>(i), {input.data() + 2, static_cast<std::size_t>(z_dim)});
        kernel::forward(net, input, ws);
        const auto values = ws.values();
        for (int k = 0; k < n_comp; ++k) {
          const double d = values[k] - mean[k];
          mean[k] += d / (i + 1);
          m2[k] += d * (values[k] - mean[k]);
        }
      }
      for (int k = 0; k < n_comp; ++k) {
        field.mean[static_cast<std::size_t>(p) * n_comp + k] = mean[k];
        field.variance[static_cast<std::size_t>(p) * n_comp + k] = m2[k] / (n_samples - 1);
      }
    }
  }
  return field;
}

MeanVarianceField quad_mean_variance(const ParamSet& net, std::span<const double> grid_tx,
                                     const QuadratureRule& rule, int dims) {
  const int z_dim = net.config().input_dim - 2;
  if (z_dim != dims) {
    throw std::invalid_argument("quad_mean_variance: dims does not match network z inputs");
  }
  const int n = static_cast<int>(rule.nodes.size());
  const int n_points = static_cast<int>(grid_tx.size()) / 2;
  const int n_comp = net.config().output_dim;
  std::size_t n_nodes = 1;
  for (int d = 0; d < dims; ++d) {
    n_nodes *= static_cast<std::size_t>(n);
  }

  MeanVarianceField field;
  field.n_comp = n_comp;
  field.mean.assign(static_cast<std::size_t>(n_points) * n_comp, 0.0);
  field.variance.assign(static_cast<std::size_t>(n_points) * n_comp, 0.0);

#pragma omp parallel
  {
    kernel::NetWorkspace ws(net.config());
    std::vector<double> input(net.config().input_dim);
    std::vector<double> first(n_comp), second(n_comp);
    std::vector<int> index(dims);
#pragma omp for schedule(static)
    for (int p = 0; p < n_points; ++p) {
      input[0] = grid_tx[2 * p];
      input[1] = grid_tx[2 * p + 1];
      std::fill(first.begin(), first.end(), 0.0);
      std::fill(second.begin(), second.end(), 0.0);
      std::fill(index.begin(), index.end(), 0);
      for (std::size_t node = 0; node < n_nodes; ++node) {
        double w = 1.0;
        for (int d = 0; d < dims; ++d) {
          input[2 + d] = rule.nodes[index[d]];
          w *= 0.5 * rule.weights[index[d]];  // uniform measure on [-1,1]
        }
        kernel::forward(net, input, ws);
        const auto values = ws.values();
        for (int k = 0; k < n_comp; ++k) {
          first[k] += w * values[k];
          second[k] += w * values[k] * values[k];
        }
        for (int d = dims - 1; d >= 0; --d) {
          if (++index[d] < n) {
            break;
          }
          index[d] = 0;
        }
      }
      for (int k = 0; k < n_comp; ++k) {
        field.mean[static_cast<std::size_t>(p) * n_comp + k] = first[k];
        field.variance[static_cast<std::size_t>(p) * n_comp + k] =
            second[k] - first[k] * first[k];
      }
    }
  }
  return field;
}

UqReference uq_reference_mc(const ProblemSpec& problem, const StochasticIC& ic,
                            const Grid1D& grid, std::span<const double> times,
                            int n_samples, std::uint64_t seed, double cfl) {
  if (n_samples < 2) {
    throw std::invalid_argument("uq_reference_mc: need at least 2 samples");
  }
  const int n_comp = n_components(problem.kind);
  const std::size_t field_len =
      times.size() * static_cast<std::size_t>(grid.n_cells) * n_comp;

  const int block_size = 64;
  const int n_blocks = (n_samples + block_size - 1) / block_size;
  std::vector<std::vector<double>> block_mean(n_blocks), block_m2(n_blocks);
  std::vector<long> block_count(n_blocks, 0);
  const ZSampler sampler = uniform_cube_sampler(seed);

#pragma omp parallel
  {
    std::vector<double> z(ic.s);
    std::vector<double> sample_field(field_len);
#pragma omp for schedule(static)
    for (int b = 0; b < n_blocks; ++b) {
      auto& mean = block_mean[b];
      auto& m2 = block_m2[b];
      mean.assign(field_len, 0.0);
      m2.assign(field_len, 0.0);
      const int begin = b * block_size;
      const int end = std::min(n_samples, begin + block_size);
      for (int i = begin; i < end; ++i) {
        sampler(static_cast<std::uint64_t>(i), z);
        auto snapshots = solve_with_ic(
            problem, grid, cfl, times,
            [&](double x) { return stochastic_initial_state(problem, ic, x, z); });
        std::size_t pos = 0;
        for (const auto& snap : snapshots) {
          for (int cell = 0; cell < grid.n_cells; ++cell) {
            const PrimitiveState s =
                from_conserved(problem.kind, {snap.states.cell(cell), static_cast<std::size_t>(n_comp)},
                               problem.constants);
            for (int k = 0; k < n_comp; ++k, ++pos) {
              sample_field[pos] = s[k];
            }
          }
        }
        const long cnt = i - begin + 1;
        for (std::size_t j = 0; j < field_len; ++j) {
          const double d = sample_field[j] - mean[j];
          mean[j] += d / cnt;
          m2[j] += d * (sample_field[j] - mean[j]);
        }
      }
      block_count[b] = end - begin;
    }
  }

  // Chan merge in block order keeps the result independent of threading.
  std::vector<double> mean(field_len, 0.0), m2(field_len, 0.0);
  long count = 0;
  for (int b = 0; b < n_blocks; ++b) {
    const long nb = block_count[b];
    if (nb == 0) continue;
    if (count == 0) {
      mean = block_mean[b];
      m2 = block_m2[b];
      count = nb;
      continue;
    }
    const long total = count + nb;
    for (std::size_t j = 0; j < field_len; ++j) {
      const double delta = block_mean[b][j] - mean[j];
      mean[j] += delta * nb / total;
      m2[j] += block_m2[b][j] + delta * delta * count * nb / total;
    }
    count = total;
  }

  UqReference ref;
  ref.times.assign(times.begin(), times.end());
  ref.grid = grid;
  ref.n_comp = n_comp;
  ref.mean = std::move(mean);
  ref.variance.resize(field_len);
  for (std::size_t j = 0; j < field_len; ++j) {
    ref.variance[j] = m2[j] / (count - 1);
  }
  return ref;
}

void write_mean_variance_csv(std::span<const double> grid_tx, const MeanVarianceField& field,
                             const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("write_mean_variance_csv: cannot open " + path);
  }
  std::fprintf(f, "t,x");
  for (int k = 0; k < field.n_comp; ++k) {
    std::fprintf(f, ",mean%d", k);
  }
  for (int k = 0; k < field.n_comp; ++k) {
    std::fprintf(f, ",var%d", k);
  }
  std::fprintf(f, "\n");
  const int n_points = static_cast<int>(grid_tx.size()) / 2;
  for (int p = 0; p < n_points; ++p) {
    std::fprintf(f, "%.17g,%.17g", grid_tx[2 * p], grid_tx[2 * p + 1]);
    for (int k = 0; k < field.n_comp; ++k) {
      std::fprintf(f, ",%.17g", field.mean[static_cast<std::size_t>(p) * field.n_comp + k]);
    }
    for (int k = 0; k < field.n_comp; ++k) {
      std::fprintf(f, ",%.17g", field.variance[static_cast<std::size_t>(p) * field.n_comp + k]);
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

void write_uq_reference_csv(const UqReference& ref, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("write_uq_reference_csv: cannot open " + path);
  }
  std::fprintf(f, "t,x");
  for (int k = 0; k < ref.n_comp; ++k) {
    std::fprintf(f, ",mean%d", k);
  }
  for (int k = 0; k < ref.n_comp; ++k) {
    std::fprintf(f, ",var%d", k);
  }
  std::fprintf(f, "\n");
  std::size_t pos = 0;
  for (double t : ref.times) {
    for (int cell = 0; cell < ref.grid.n_cells; ++cell) {
      std::fprintf(f, "%.17g,%.17g", t, ref.grid.center(cell));
      for (int k = 0; k < ref.n_comp; ++k) {
        std::fprintf(f, ",%.17g", ref.mean[pos + k]);
      }
      for (int k = 0; k < ref.n_comp; ++k) {
        std::fprintf(f, ",%.17g", ref.variance[pos + k]);
      }
      std::fprintf(f, "\n");
      pos += ref.n_comp;
    }
  }
  std::fclose(f);
}

}  // namespace relaxnn
