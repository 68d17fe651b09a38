#include "relaxnn/systems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaxnn {

int n_components(SystemKind kind) {
  switch (kind) {
    case SystemKind::kBurgers:
      return 1;
    case SystemKind::kShallowWater:
      return 2;
    case SystemKind::kEuler:
      return 3;
  }
  throw std::logic_error("n_components: bad kind");
}

int n_conservation_laws(SystemKind kind) { return n_components(kind); }

std::vector<bool> relaxed_rows(SystemKind kind, std::optional<RelaxType> relax) {
  const int n = n_conservation_laws(kind);
  if (!relax.has_value()) {
    return std::vector<bool>(n, false);
  }
  switch (kind) {
    case SystemKind::kBurgers:
      if (*relax != RelaxType::kType1) {
        throw std::invalid_argument("Burgers has a single relaxation variant");
      }
      return {true};
    case SystemKind::kShallowWater:
      if (*relax == RelaxType::kType1) return {true, true};
      if (*relax == RelaxType::kType2) return {false, true};
      throw std::invalid_argument("shallow water admits type1/type2 only");
    case SystemKind::kEuler:
      if (*relax == RelaxType::kType1) return {true, true, true};
      if (*relax == RelaxType::kType2) return {false, true, true};
      return {false, false, true};
  }
  throw std::logic_error("relaxed_rows: bad kind");
}

int n_relaxed(SystemKind kind, RelaxType relax) {
  int n = 0;
  for (bool r : relaxed_rows(kind, relax)) {
    n += r ? 1 : 0;
  }
  return n;
}

double total_energy(double rho, double u, double p, double gamma) {
  if (gamma <= 1.0) {
    throw std::invalid_argument("total_energy: gamma must exceed 1");
  }
  return (1.0 / (gamma - 1.0)) * p + 0.5 * (rho * (u * u));
}

std::vector<double> physical_flux(SystemKind kind, const PrimitiveState& s,
                                  const SystemConstants& constants) {
  // Operation order mirrors the tape composition in flux_triples below, so
  // exact flux values cancel bit-for-bit in flux_mismatch_terms.
  switch (kind) {
    case SystemKind::kBurgers: {
      const double u = s[0];
      return {0.5 * (u * u)};
    }
    case SystemKind::kShallowWater: {
      const double h = s[0], u = s[1], g = constants.gravity;
      return {h * u, h * (u * u) + (0.5 * g) * (h * h)};
    }
    case SystemKind::kEuler: {
      const double rho = s[0], u = s[1], p = s[2];
      const double e = total_energy(rho, u, p, constants.gamma);
      return {rho * u, rho * (u * u) + p, u * (e + p)};
    }
  }
  throw std::logic_error("physical_flux: bad kind");
}

std::vector<double> to_conserved(SystemKind kind, const PrimitiveState& s,
                                 const SystemConstants& constants) {
  switch (kind) {
    case SystemKind::kBurgers:
      return {s[0]};
    case SystemKind::kShallowWater:
      return {s[0], s[0] * s[1]};
    case SystemKind::kEuler:
      return {s[0], s[0] * s[1], total_energy(s[0], s[1], s[2], constants.gamma)};
  }
  throw std::logic_error("to_conserved: bad kind");
}

PrimitiveState from_conserved(SystemKind kind, std::span<const double> q,
                              const SystemConstants& constants) {
  PrimitiveState s;
  s.size = n_components(kind);
  switch (kind) {
    case SystemKind::kBurgers:
      s[0] = q[0];
      return s;
    case SystemKind::kShallowWater:
      s[0] = q[0];
      s[1] = q[1] / q[0];
      return s;
    case SystemKind::kEuler: {
      s[0] = q[0];
      s[1] = q[1] / q[0];
      s[2] = (constants.gamma - 1.0) * (q[2] - 0.5 * q[1] * q[1] / q[0]);
      return s;
    }
  }
  throw std::logic_error("from_conserved: bad kind");
}

PrimitiveState initial_state(const ProblemSpec& problem, double x) {
  if (x < problem.x_min || x > problem.x_max) {
    throw std::out_of_range("initial_state: x outside the spatial domain");
  }
  PrimitiveState s;
  s.size = n_components(problem.kind);
  const bool left = x <= 0.0;
  switch (problem.ic) {
    case InitialConditionKind::kBurgersRiemann:
      s[0] = left ? 1.0 : 0.0;
      return s;
    case InitialConditionKind::kBurgersSine:
      s[0] = -std::sin(std::numbers::pi * x);
      return s;
    case InitialConditionKind::kSweDamBreak:
      s[0] = left ? 1.0 : 0.5;
      s[1] = 0.0;
      return s;
    case InitialConditionKind::kSweTwoShock:
      s[0] = 1.0;
      s[1] = left ? 1.0 : -1.0;
      return s;
    case InitialConditionKind::kEulerSod:
      s[0] = left ? 1.0 : 0.125;
      s[1] = 0.0;
      s[2] = left ? 1.0 : 0.1;
      return s;
    case InitialConditionKind::kEulerLax:
      if (left) {
        s[0] = 0.445;
        s[1] = 0.698;
        s[2] = 3.528;
      } else {
        s[0] = 0.5;
        s[1] = 0.0;
        s[2] = 0.571;
      }
      return s;
    case InitialConditionKind::kConstant:
      for (int i = 0; i < s.size; ++i) {
        s[i] = problem.ic_constant[i];
      }
      return s;
  }
  throw std::logic_error("initial_state: bad IC kind");
}

namespace {

// Value plus optional directional-derivative channels; the building block
// for composing conserved quantities and fluxes with exact product rules.
struct Tri {
  NodeId v;
  std::optional<NodeId> dt;
  std::optional<NodeId> dx;
};

Tri tri_of(const OutputTriple& o) { return {o.value, o.d_dt, o.d_dx}; }

Tri tri_add(Tape& t, const Tri& a, const Tri& b) {
  Tri r{t.add(a.v, b.v), {}, {}};
  if (a.dt && b.dt) r.dt = t.add(*a.dt, *b.dt);
  if (a.dx && b.dx) r.dx = t.add(*a.dx, *b.dx);
  return r;
}

Tri tri_mul(Tape& t, const Tri& a, const Tri& b) {
  Tri r{t.mul(a.v, b.v), {}, {}};
  if (a.dt && b.dt) r.dt = t.add(t.mul(*a.dt, b.v), t.mul(a.v, *b.dt));
  if (a.dx && b.dx) r.dx = t.add(t.mul(*a.dx, b.v), t.mul(a.v, *b.dx));
  return r;
}

Tri tri_scale(Tape& t, double c, const Tri& a) {
  const NodeId cn = t.leaf(c);
  Tri r{t.mul(cn, a.v), {}, {}};
  if (a.dt) r.dt = t.mul(cn, *a.dt);
  if (a.dx) r.dx = t.mul(cn, *a.dx);
  return r;
}

NodeId need_dt(const Tri& a) {
  if (!a.dt) throw std::invalid_argument("residual_terms: missing d_dt channel");
  return *a.dt;
}

NodeId need_dx(const Tri& a) {
  if (!a.dx) throw std::invalid_argument("residual_terms: missing d_dx channel");
  return *a.dx;
}

std::vector<Tri> as_tris(std::span<const OutputTriple> triples) {
  std::vector<Tri> out;
  out.reserve(triples.size());
  for (const auto& o : triples) {
    out.push_back(tri_of(o));
  }
  return out;
}

void check_u_arity(SystemKind kind, std::size_t got) {
  if (static_cast<int>(got) != n_components(kind)) {
    throw std::invalid_argument("systems: u output count does not match system");
  }
}

std::vector<Tri> conserved_triples(Tape& t, SystemKind kind, std::span<const Tri> u,
                                   const SystemConstants& constants) {
  switch (kind) {
    case SystemKind::kBurgers:
      return {u[0]};
    case SystemKind::kShallowWater:
      return {u[0], tri_mul(t, u[0], u[1])};
    case SystemKind::kEuler: {
      // E = p/(gamma-1) + rho u^2 / 2, so that
      // dE/dt = p_t/(gamma-1) + (rho_t u^2 + 2 rho u u_t)/2.
      const Tri& rho = u[0];
      const Tri& vel = u[1];
      const Tri& p = u[2];
      Tri kinetic = tri_scale(t, 0.5, tri_mul(t, rho, tri_mul(t, vel, vel)));
      Tri internal = tri_scale(t, 1.0 / (constants.gamma - 1.0), p);
      Tri energy = tri_add(t, internal, kinetic);
      return {rho, tri_mul(t, rho, vel), energy};
    }
  }
  throw std::logic_error("conserved_triples: bad kind");
}

std::vector<Tri> flux_triples(Tape& t, SystemKind kind, std::span<const Tri> u,
                              const SystemConstants& constants) {
  switch (kind) {
    case SystemKind::kBurgers:
      return {tri_scale(t, 0.5, tri_mul(t, u[0], u[0]))};
    case SystemKind::kShallowWater: {
      const Tri& h = u[0];
      const Tri& vel = u[1];
      Tri momentum = tri_add(t, tri_mul(t, h, tri_mul(t, vel, vel)),
                             tri_scale(t, 0.5 * constants.gravity, tri_mul(t, h, h)));
      return {tri_mul(t, h, vel), momentum};
    }
    case SystemKind::kEuler: {
      const Tri& rho = u[0];
      const Tri& vel = u[1];
      const Tri& p = u[2];
      Tri momentum = tri_add(t, tri_mul(t, rho, tri_mul(t, vel, vel)), p);
      Tri kinetic = tri_scale(t, 0.5, tri_mul(t, rho, tri_mul(t, vel, vel)));
      Tri internal = tri_scale(t, 1.0 / (constants.gamma - 1.0), p);
      Tri energy = tri_add(t, internal, kinetic);
      return {tri_mul(t, rho, vel), momentum, tri_mul(t, vel, tri_add(t, energy, p))};
    }
  }
  throw std::logic_error("flux_triples: bad kind");
}

}  // namespace

std::vector<NodeId> residual_terms(Tape& tape, SystemKind kind,
                                   std::optional<RelaxType> relax,
                                   std::span<const OutputTriple> u_triples,
                                   std::span<const OutputTriple> v_triples,
                                   const SystemConstants& constants) {
  check_u_arity(kind, u_triples.size());
  const std::vector<bool> mask = relaxed_rows(kind, relax);
  std::size_t n_mask = 0;
  for (bool r : mask) {
    n_mask += r ? 1 : 0;
  }
  if (v_triples.size() != n_mask) {
    throw std::invalid_argument("residual_terms: v output count does not match variant");
  }

  const std::vector<Tri> u = as_tris(u_triples);
  const std::vector<Tri> conserved = conserved_triples(tape, kind, u, constants);
  std::vector<Tri> flux;
  bool any_physical = false;
  for (bool r : mask) {
    any_physical |= !r;
  }
  if (any_physical) {
    flux = flux_triples(tape, kind, u, constants);
  }

  std::vector<NodeId> rows;
  rows.reserve(mask.size());
  std::size_t v_idx = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    NodeId space = mask[i] ? need_dx(tri_of(v_triples[v_idx++])) : need_dx(flux[i]);
    rows.push_back(tape.add(need_dt(conserved[i]), space));
  }
  return rows;
}

std::vector<NodeId> flux_mismatch_terms(Tape& tape, SystemKind kind, RelaxType relax,
                                        std::span<const NodeId> u_values,
                                        std::span<const NodeId> v_values,
                                        const SystemConstants& constants) {
  check_u_arity(kind, u_values.size());
  const std::vector<bool> mask = relaxed_rows(kind, relax);
  if (static_cast<int>(v_values.size()) != n_relaxed(kind, relax)) {
    throw std::invalid_argument("flux_mismatch_terms: v count does not match variant");
  }
  std::vector<Tri> u;
  u.reserve(u_values.size());
  for (NodeId id : u_values) {
    u.push_back(Tri{id, {}, {}});
  }
  const std::vector<Tri> flux = flux_triples(tape, kind, u, constants);
  std::vector<NodeId> rows;
  std::size_t v_idx = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      rows.push_back(tape.sub(v_values[v_idx++], flux[i].v));
    }
  }
  return rows;
}

std::vector<OutputTriple> exact_flux_triples(Tape& tape, SystemKind kind,
                                             std::span<const OutputTriple> u_triples,
                                             const SystemConstants& constants) {
  check_u_arity(kind, u_triples.size());
  const std::vector<Tri> u = as_tris(u_triples);
  const std::vector<Tri> flux = flux_triples(tape, kind, u, constants);
  std::vector<OutputTriple> out;
  out.reserve(flux.size());
  for (const Tri& f : flux) {
    out.push_back(OutputTriple{f.v, f.dt, f.dx});
  }
  return out;
}

ProblemSpec problem_by_id(const std::string& id) {
  ProblemSpec p;
  p.id = id;
  if (id == "burgers-riemann") {
    p.kind = SystemKind::kBurgers;
    p.t1 = 1.0;
    p.x_min = -0.6;
    p.x_max = 0.6;
    p.ic = InitialConditionKind::kBurgersRiemann;
    p.figure_times = {0.0, 0.2, 0.4, 0.6};
  } else if (id == "burgers-sine") {
    p.kind = SystemKind::kBurgers;
    p.t1 = 1.0;
    p.x_min = -1.0;
    p.x_max = 1.0;
    p.ic = InitialConditionKind::kBurgersSine;
    p.figure_times = {0.0, 0.2, 0.4, 0.6};
  } else if (id == "swe-dam") {
    p.kind = SystemKind::kShallowWater;
    p.t1 = 1.0;
    p.x_min = -1.5;
    p.x_max = 1.5;
    p.ic = InitialConditionKind::kSweDamBreak;
    p.figure_times = {0.0, 0.2, 0.4, 0.6};
  } else if (id == "swe-2shock") {
    p.kind = SystemKind::kShallowWater;
    p.t1 = 1.0;
    p.x_min = -1.0;
    p.x_max = 1.0;
    p.ic = InitialConditionKind::kSweTwoShock;
    p.figure_times = {0.0, 0.2, 0.4, 0.6};
  } else if (id == "euler-sod") {
    p.kind = SystemKind::kEuler;
    p.t1 = 0.4;
    p.x_min = -0.8;
    p.x_max = 0.8;
    p.ic = InitialConditionKind::kEulerSod;
    p.relax = RelaxType::kType3;
    p.figure_times = {0.0, 0.08, 0.16, 0.24, 0.32, 0.40};
  } else if (id == "euler-lax") {
    p.kind = SystemKind::kEuler;
    p.t1 = 0.16;
    p.x_min = -0.5;
    p.x_max = 0.5;
    p.ic = InitialConditionKind::kEulerLax;
    p.relax = RelaxType::kType3;
    p.figure_times = {0.0, 0.032, 0.064, 0.096, 0.128, 0.16};
  } else {
    throw std::invalid_argument("unknown problem id: " + id);
  }
  return p;
}

std::vector<std::string> problem_ids() {
  return {"burgers-riemann", "burgers-sine", "swe-dam",
          "swe-2shock",      "euler-sod",    "euler-lax"};
}

}  // namespace relaxnn
