#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxnn/fvref.hpp"
#include "relaxnn/mlp.hpp"
#include "relaxnn/systems.hpp"

namespace relaxnn {

// Stochastic perturbations of the piecewise initial data: either an additive
// shift of the left state (Burgers), or a random interface location psi(z)
// replacing x = 0 (shallow water / Euler).
struct StochasticIC {
  enum class Kind { kAdditiveSum, kInterfaceShift };
  Kind kind = Kind::kAdditiveSum;
  double epsilon = 0.005;
  int s = 100;
};

// psi(z) = eps (z1 relu(z2 z3 + z4) + z5); requires exactly 5 entries.
double psi(std::span<const double> z, double epsilon);

PrimitiveState stochastic_initial_state(const ProblemSpec& problem, const StochasticIC& ic,
                                        double x, std::span<const double> z);

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

QuadratureRule gauss_legendre(int n);

// Mean/variance per grid point and output component, row-major [point][comp].
struct MeanVarianceField {
  int n_comp = 1;
  std::vector<double> mean;
  std::vector<double> variance;
};

// Fills z for a given sample index; must be pure in (index) so samples can be
// evaluated in any order by any thread.
using ZSampler = std::function<void(std::uint64_t index, std::span<double> z)>;

ZSampler uniform_cube_sampler(std::uint64_t seed);

// Per grid point: N network evaluations at (t, x, z_i); sample mean and
// unbiased variance. grid_tx holds rows of (t, x); the z dimension is the
// network input dimension minus 2.
MeanVarianceField mc_mean_variance(const ParamSet& net, std::span<const double> grid_tx,
                                   const ZSampler& sampler, int n_samples);

// Tensorized Gauss-Legendre over the uniform measure on [-1,1]^dims:
// mean = integral of f, variance = integral of f^2 minus mean^2.
MeanVarianceField quad_mean_variance(const ParamSet& net, std::span<const double> grid_tx,
                                     const QuadratureRule& rule, int dims);

// Reference statistics: the FV solver run per z-sample, Welford-merged in a
// fixed block order. Fields are primitive components, [time][cell][comp].
struct UqReference {
  std::vector<double> times;
  Grid1D grid;
  int n_comp = 1;
  std::vector<double> mean;
  std::vector<double> variance;
};

UqReference uq_reference_mc(const ProblemSpec& problem, const StochasticIC& ic,
                            const Grid1D& grid, std::span<const double> times,
                            int n_samples, std::uint64_t seed, double cfl = 0.5);

// Columns: t, x, mean..., variance...
void write_mean_variance_csv(std::span<const double> grid_tx, const MeanVarianceField& field,
                             const std::string& path);
void write_uq_reference_csv(const UqReference& ref, const std::string& path);

}  // namespace relaxnn
