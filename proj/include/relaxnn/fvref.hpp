#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relaxnn/systems.hpp"

namespace relaxnn {

struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 2;

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
};

// Row-major [cell][component] conserved averages
// (Burgers: u; SWE: h, hu; Euler: rho, rho u, E).
struct CellStates {
  int n_comp = 1;
  std::vector<double> q;

  double* cell(int i) { return q.data() + static_cast<std::size_t>(i) * n_comp; }
  const double* cell(int i) const { return q.data() + static_cast<std::size_t>(i) * n_comp; }
  int n_cells() const { return static_cast<int>(q.size()) / n_comp; }
};

struct Snapshot {
  double t = 0.0;
  CellStates states;
};

// Totals and the time-integrated boundary flux; conservation holds when
// final_total - initial_total + boundary_integral vanishes
// (boundary_integral = integral of F(right edge) - F(left edge) dt).
struct SolveStats {
  std::vector<double> initial_total;
  std::vector<double> final_total;
  std::vector<double> boundary_integral;
  long n_steps = 0;
};

// Exact Godunov flux for the convex Burgers flux.
double godunov_flux_burgers(double ul, double ur);

// HLL with Davis wave-speed estimates; throws on nonpositive depth.
std::array<double, 2> hll_flux_swe(std::span<const double> ql, std::span<const double> qr,
                                   double gravity);

// HLLC with Davis-type speed bounds; throws on nonpositive density/pressure.
std::array<double, 3> hllc_flux_euler(std::span<const double> ql, std::span<const double> qr,
                                      double gamma);

// First-order Godunov update with zero-gradient boundaries; dt from the CFL
// number and the current max wave speed, clipped to hit each output time
// exactly. Throws when positivity is lost.
std::vector<Snapshot> solve(const ProblemSpec& problem, const Grid1D& grid, double cfl,
                            std::span<const double> t_outputs, SolveStats* stats = nullptr);

// Same scheme with the initial data overridden (used by the stochastic
// reference runs, where the IC depends on a z-sample).
using InitialStateFn = std::function<PrimitiveState(double x)>;
std::vector<Snapshot> solve_with_ic(const ProblemSpec& problem, const Grid1D& grid, double cfl,
                                    std::span<const double> t_outputs, const InitialStateFn& ic,
                                    SolveStats* stats = nullptr);

// Weak solution of the Burgers Riemann problem: shock when ul > ur,
// rarefaction fan otherwise.
double exact_burgers_riemann(double ul, double ur, double x, double t);

// Exact Riemann solution for the 1-D Euler equations via pressure-function
// root finding (Newton with bisection safeguard, relative tolerance 1e-12).
PrimitiveState exact_sod(const PrimitiveState& left, const PrimitiveState& right,
                         double gamma, double x, double t);

// Star-region pressure of the exact Euler Riemann solution.
double exact_euler_star_pressure(const PrimitiveState& left, const PrimitiveState& right,
                                 double gamma);

// Columns: t, x, conserved q0.., primitive components by name.
void write_snapshots_csv(const ProblemSpec& problem, const Grid1D& grid,
                         std::span<const Snapshot> snapshots, const std::string& path);

}  // namespace relaxnn
