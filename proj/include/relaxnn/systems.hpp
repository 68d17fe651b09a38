#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxnn/autodiff.hpp"
#include "relaxnn/mlp.hpp"

namespace relaxnn {

enum class SystemKind { kBurgers, kShallowWater, kEuler };

// Which conservation laws carry a relaxed flux variable. Type1 relaxes the
// whole system; type2 keeps the mass law physical; type3 (Euler only)
// relaxes just the energy law.
enum class RelaxType { kType1 = 1, kType2 = 2, kType3 = 3 };

struct SystemConstants {
  double gravity = 1.0;  // shallow water
  double gamma = 1.4;    // ideal polytropic gas
};

enum class InitialConditionKind {
  kBurgersRiemann,
  kBurgersSine,
  kSweDamBreak,
  kSweTwoShock,
  kEulerSod,
  kEulerLax,
  kConstant,
};

struct ProblemSpec {
  std::string id;
  SystemKind kind = SystemKind::kBurgers;
  double t0 = 0.0;
  double t1 = 1.0;
  double x_min = -1.0;
  double x_max = 1.0;
  InitialConditionKind ic = InitialConditionKind::kBurgersRiemann;
  std::array<double, 3> ic_constant{};  // kConstant only
  RelaxType relax = RelaxType::kType1;
  SystemConstants constants;
  std::vector<double> figure_times;  // output times used by the reported slices
};

// Burgers: (u); shallow water: (h, u); Euler: (rho, u, p).
struct PrimitiveState {
  std::array<double, 3> comp{};
  int size = 0;

  double operator[](int i) const { return comp[i]; }
  double& operator[](int i) { return comp[i]; }
};

int n_components(SystemKind kind);
int n_conservation_laws(SystemKind kind);

// True per conservation law when its flux is carried by the v-network.
// nullopt = plain PINN (nothing relaxed). Throws on variants the system
// does not admit (Burgers beyond type1, shallow-water type3).
std::vector<bool> relaxed_rows(SystemKind kind, std::optional<RelaxType> relax);
int n_relaxed(SystemKind kind, RelaxType relax);

double total_energy(double rho, double u, double p, double gamma);

// F(u): Burgers (u^2/2); SWE (hu, hu^2 + g h^2/2);
// Euler (rho u, rho u^2 + p, u(E+p)).
std::vector<double> physical_flux(SystemKind kind, const PrimitiveState& s,
                                  const SystemConstants& constants);

std::vector<double> to_conserved(SystemKind kind, const PrimitiveState& s,
                                 const SystemConstants& constants);
PrimitiveState from_conserved(SystemKind kind, std::span<const double> q,
                              const SystemConstants& constants);

// Piecewise/smooth initial data; a discontinuity at x = 0 takes the left
// state. Throws when x is outside the spatial domain.
PrimitiveState initial_state(const ProblemSpec& problem, double x);

// One node per conservation law: d/dt of the conserved quantity plus d/dx of
// either the composed physical flux (unrelaxed rows) or the v-network output
// (relaxed rows). Compositions use exact product/chain rules in tape
// primitives, e.g. d/dt(hu) = h_t u + h u_t.
std::vector<NodeId> residual_terms(Tape& tape, SystemKind kind,
                                   std::optional<RelaxType> relax,
                                   std::span<const OutputTriple> u_triples,
                                   std::span<const OutputTriple> v_triples,
                                   const SystemConstants& constants);

// v - F_row(u) for each relaxed row; the Euler energy row is
// zeta - (gamma/(gamma-1) p u + rho u^3 / 2), composed identically to
// physical_flux so exact flux values cancel exactly.
std::vector<NodeId> flux_mismatch_terms(Tape& tape, SystemKind kind, RelaxType relax,
                                        std::span<const NodeId> u_values,
                                        std::span<const NodeId> v_values,
                                        const SystemConstants& constants);

// Virtual relaxed-flux triples composed from the u-network triples via the
// exact flux algebra; feeding these as v_triples makes the relaxed residual
// rows coincide with the PINN rows.
std::vector<OutputTriple> exact_flux_triples(Tape& tape, SystemKind kind,
                                             std::span<const OutputTriple> u_triples,
                                             const SystemConstants& constants);

// Catalog of the named experiments.
ProblemSpec problem_by_id(const std::string& id);
std::vector<std::string> problem_ids();

}  // namespace relaxnn
