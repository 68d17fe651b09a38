#include "relaxnn/fvref.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace relaxnn {

namespace {

// Compensated accumulator; keeps the conservation ledger at roundoff level
// over many steps.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

bool same_state(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

PrimitiveState swe_primitive(std::span<const double> q) {
  PrimitiveState s;
  s.size = 2;
  s[0] = q[0];
  s[1] = q[1] / q[0];
  return s;
}

PrimitiveState euler_primitive(std::span<const double> q, double gamma) {
  PrimitiveState s;
  s.size = 3;
  s[0] = q[0];
  s[1] = q[1] / q[0];
  s[2] = (gamma - 1.0) * (q[2] - 0.5 * q[1] * q[1] / q[0]);
  return s;
}

}  // namespace

double godunov_flux_burgers(double ul, double ur) {
  if (ul > ur) {
    // shock; Rankine-Hugoniot speed
    const double s = 0.5 * (ul + ur);
    return s > 0.0 ? 0.5 * ul * ul : 0.5 * ur * ur;
  }
  if (ul > 0.0) return 0.5 * ul * ul;
  if (ur < 0.0) return 0.5 * ur * ur;
  return 0.0;  // sonic point inside the fan
}

std::array<double, 2> hll_flux_swe(std::span<const double> ql, std::span<const double> qr,
                                   double gravity) {
  if (ql[0] <= 0.0 || qr[0] <= 0.0) {
    throw std::domain_error("hll_flux_swe: nonpositive depth");
  }
  const SystemConstants constants{gravity, 1.4};
  const PrimitiveState sl = swe_primitive(ql);
  const PrimitiveState sr = swe_primitive(qr);
  const std::vector<double> fl = physical_flux(SystemKind::kShallowWater, sl, constants);
  if (same_state(ql, qr)) {
    return {fl[0], fl[1]};
  }
  const std::vector<double> fr = physical_flux(SystemKind::kShallowWater, sr, constants);
  const double cl = std::sqrt(gravity * sl[0]);
  const double cr = std::sqrt(gravity * sr[0]);
  const double s_left = std::min(sl[1] - cl, sr[1] - cr);
  const double s_right = std::max(sl[1] + cl, sr[1] + cr);
  if (s_left >= 0.0) return {fl[0], fl[1]};
  if (s_right <= 0.0) return {fr[0], fr[1]};
  std::array<double, 2> f{};
  for (int k = 0; k < 2; ++k) {
    f[k] = (s_right * fl[k] - s_left * fr[k] + s_left * s_right * (qr[k] - ql[k])) /
           (s_right - s_left);
  }
  return f;
}

std::array<double, 3> hllc_flux_euler(std::span<const double> ql, std::span<const double> qr,
                                      double gamma) {
  const SystemConstants constants{1.0, gamma};
  const PrimitiveState sl = euler_primitive(ql, gamma);
  const PrimitiveState sr = euler_primitive(qr, gamma);
  if (sl[0] <= 0.0 || sr[0] <= 0.0 || sl[2] <= 0.0 || sr[2] <= 0.0) {
    throw std::domain_error("hllc_flux_euler: nonpositive density or pressure");
  }
  const std::vector<double> fl = physical_flux(SystemKind::kEuler, sl, constants);
  if (same_state(ql, qr)) {
    return {fl[0], fl[1], fl[2]};
  }
  const std::vector<double> fr = physical_flux(SystemKind::kEuler, sr, constants);
  const double cl = std::sqrt(gamma * sl[2] / sl[0]);
  const double cr = std::sqrt(gamma * sr[2] / sr[0]);
  const double s_left = std::min(sl[1] - cl, sr[1] - cr);
  const double s_right = std::max(sl[1] + cl, sr[1] + cr);
  if (s_left >= 0.0) return {fl[0], fl[1], fl[2]};
  if (s_right <= 0.0) return {fr[0], fr[1], fr[2]};

  const double dl = sl[0] * (s_left - sl[1]);
  const double dr = sr[0] * (s_right - sr[1]);
  const double s_star = (sr[2] - sl[2] + sl[1] * dl - sr[1] * dr) / (dl - dr);

  auto star_side = [&](std::span<const double> q, const PrimitiveState& s,
                       const std::vector<double>& f, double s_k) {
    const double factor = s[0] * (s_k - s[1]) / (s_k - s_star);
    const double energy_star =
        q[2] / s[0] + (s_star - s[1]) * (s_star + s[2] / (s[0] * (s_k - s[1])));
    std::array<double, 3> u_star = {factor, factor * s_star, factor * energy_star};
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
      out[k] = f[k] + s_k * (u_star[k] - q[k]);
    }
    return out;
  };

  if (s_star >= 0.0) {
    return star_side(ql, sl, fl, s_left);
  }
  return star_side(qr, sr, fr, s_right);
}

namespace {

double max_wave_speed(const ProblemSpec& problem, const CellStates& states) {
  double speed = 0.0;
  const int n = states.n_cells();
  for (int i = 0; i < n; ++i) {
    const double* q = states.cell(i);
    switch (problem.kind) {
      case SystemKind::kBurgers:
        speed = std::max(speed, std::abs(q[0]));
        break;
      case SystemKind::kShallowWater: {
        const double h = q[0];
        if (h <= 0.0) throw std::domain_error("fvref: nonpositive depth");
        const double u = q[1] / h;
        speed = std::max(speed, std::abs(u) + std::sqrt(problem.constants.gravity * h));
        break;
      }
      case SystemKind::kEuler: {
        const PrimitiveState s = euler_primitive({q, 3}, problem.constants.gamma);
        if (s[0] <= 0.0 || s[2] <= 0.0) {
          throw std::domain_error("fvref: nonpositive density or pressure");
        }
        speed = std::max(speed, std::abs(s[1]) + std::sqrt(problem.constants.gamma * s[2] / s[0]));
        break;
      }
    }
  }
  return speed;
}

void interface_fluxes(const ProblemSpec& problem, const CellStates& states,
                      std::vector<double>& fluxes) {
  const int n = states.n_cells();
  const int m = states.n_comp;
  // flux i sits between cell i-1 and cell i; ghost cells copy the boundary
  // cell (zero-gradient)
#pragma omp parallel for schedule(static)
  for (int i = 0; i <= n; ++i) {
    const double* ql = states.cell(i == 0 ? 0 : i - 1);
    const double* qr = states.cell(i == n ? n - 1 : i);
    double* f = fluxes.data() + static_cast<std::size_t>(i) * m;
    switch (problem.kind) {
      case SystemKind::kBurgers:
        f[0] = godunov_flux_burgers(ql[0], qr[0]);
        break;
      case SystemKind::kShallowWater: {
        const auto hf = hll_flux_swe({ql, 2}, {qr, 2}, problem.constants.gravity);
        f[0] = hf[0];
        f[1] = hf[1];
        break;
      }
      case SystemKind::kEuler: {
        const auto hf = hllc_flux_euler({ql, 3}, {qr, 3}, problem.constants.gamma);
        f[0] = hf[0];
        f[1] = hf[1];
        f[2] = hf[2];
        break;
      }
    }
  }
}

}  // namespace

std::vector<Snapshot> solve(const ProblemSpec& problem, const Grid1D& grid, double cfl,
                            std::span<const double> t_outputs, SolveStats* stats) {
  return solve_with_ic(problem, grid, cfl, t_outputs,
                       [&](double x) { return initial_state(problem, x); }, stats);
}

std::vector<Snapshot> solve_with_ic(const ProblemSpec& problem, const Grid1D& grid, double cfl,
                                    std::span<const double> t_outputs, const InitialStateFn& ic,
                                    SolveStats* stats) {
  if (cfl <= 0.0 || cfl > 1.0) {
    throw std::invalid_argument("solve: cfl must lie in (0, 1]");
  }
  for (std::size_t i = 1; i < t_outputs.size(); ++i) {
    if (t_outputs[i] < t_outputs[i - 1]) {
      throw std::invalid_argument("solve: output times must ascend");
    }
  }
  if (!t_outputs.empty() &&
      (t_outputs.front() < problem.t0 || t_outputs.back() > problem.t1)) {
    throw std::invalid_argument("solve: output times outside the problem domain");
  }

  const int n = grid.n_cells;
  const int m = n_conservation_laws(problem.kind);
  const double dx = grid.dx();

  CellStates states;
  states.n_comp = m;
  states.q.resize(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    const auto q = to_conserved(problem.kind, ic(grid.center(i)), problem.constants);
    std::copy(q.begin(), q.end(), states.cell(i));
  }

  std::vector<Kahan> boundary(m);
  auto totals = [&]() {
    std::vector<double> out(m);
    for (int k = 0; k < m; ++k) {
      Kahan acc;
      for (int i = 0; i < n; ++i) {
        acc.add(states.cell(i)[k] * dx);
      }
      out[k] = acc.sum;
    }
    return out;
  };

  if (stats) {
    stats->initial_total = totals();
    stats->n_steps = 0;
  }

  std::vector<double> fluxes(static_cast<std::size_t>(n + 1) * m);
  std::vector<Snapshot> snapshots;
  double t = problem.t0;

  for (double t_out : t_outputs) {
    while (t < t_out) {
      const double speed = max_wave_speed(problem, states);
      double dt = speed > 0.0 ? cfl * dx / speed : t_out - t;
      dt = std::min(dt, t_out - t);

      interface_fluxes(problem, states, fluxes);
      const double scale = dt / dx;
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) {
        double* q = states.cell(i);
        const double* fl = fluxes.data() + static_cast<std::size_t>(i) * m;
        const double* fr = fl + m;
        for (int k = 0; k < m; ++k) {
          q[k] -= scale * (fr[k] - fl[k]);
        }
      }
      for (int k = 0; k < m; ++k) {
        boundary[k].add(dt * (fluxes[static_cast<std::size_t>(n) * m + k] - fluxes[k]));
      }
      t += dt;
      if (stats) {
        ++stats->n_steps;
      }
    }
    snapshots.push_back(Snapshot{t_out, states});
  }

  if (stats) {
    stats->final_total = totals();
    stats->boundary_integral.resize(m);
    for (int k = 0; k < m; ++k) {
      stats->boundary_integral[k] = boundary[k].sum;
    }
  }
  return snapshots;
}

double exact_burgers_riemann(double ul, double ur, double x, double t) {
  if (t <= 0.0) {
    throw std::invalid_argument("exact_burgers_riemann: t must be positive");
  }
  const double xi = x / t;
  if (ul > ur) {
    const double s = 0.5 * (ul + ur);
    return xi < s ? ul : (xi > s ? ur : ul);
  }
  if (xi <= ul) return ul;
  if (xi >= ur) return ur;
  return xi;
}

namespace {

struct PressureFn {
  double rho, u, p, c;
  double a, b;  // shock-branch constants

  explicit PressureFn(const PrimitiveState& s, double gamma)
      : rho(s[0]), u(s[1]), p(s[2]), c(std::sqrt(gamma * s[2] / s[0])),
        a(2.0 / ((gamma + 1.0) * s[0])), b((gamma - 1.0) / (gamma + 1.0) * s[2]),
        gamma_(gamma) {}

  double value(double pstar) const {
    if (pstar > p) {
      return (pstar - p) * std::sqrt(a / (pstar + b));
    }
    return 2.0 * c / (gamma_ - 1.0) *
           (std::pow(pstar / p, (gamma_ - 1.0) / (2.0 * gamma_)) - 1.0);
  }

  double slope(double pstar) const {
    if (pstar > p) {
      const double root = std::sqrt(a / (pstar + b));
      return root * (1.0 - 0.5 * (pstar - p) / (pstar + b));
    }
    return std::pow(pstar / p, -(gamma_ + 1.0) / (2.0 * gamma_)) / (rho * c);
  }

 private:
  double gamma_;
};

}  // namespace

double exact_euler_star_pressure(const PrimitiveState& left, const PrimitiveState& right,
                                 double gamma) {
  const PressureFn fl(left, gamma);
  const PressureFn fr(right, gamma);
  const double du = right[1] - left[1];
  if (2.0 * (fl.c + fr.c) / (gamma - 1.0) <= du) {
    throw std::domain_error("exact_sod: vacuum forms between the states");
  }

  auto residual = [&](double p) { return fl.value(p) + fr.value(p) + du; };

  // bracket: residual is increasing in p
  double lo = 1e-14;
  double hi = std::max(left[2], right[2]);
  while (residual(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("exact_sod: pressure bracket failed");
  }

  double p = std::max(lo, 0.5 * (left[2] + right[2]) -
                              0.125 * du * (left[0] + right[0]) * (fl.c + fr.c));
  p = std::clamp(p, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = residual(p);
    if (f > 0.0) {
      hi = p;
    } else {
      lo = p;
    }
    const double fp = fl.slope(p) + fr.slope(p);
    double next = p - f / fp;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);  // Newton left the bracket
    }
    const double change = std::abs(next - p) / std::max(next, 1e-300);
    p = next;
    if (change < 1e-12) {
      break;
    }
  }
  return p;
}

PrimitiveState exact_sod(const PrimitiveState& left, const PrimitiveState& right,
                         double gamma, double x, double t) {
  if (t <= 0.0) {
    throw std::invalid_argument("exact_sod: t must be positive");
  }
  const double pstar = exact_euler_star_pressure(left, right, gamma);
  const PressureFn fl(left, gamma);
  const PressureFn fr(right, gamma);
  const double ustar = 0.5 * (left[1] + right[1]) + 0.5 * (fr.value(pstar) - fl.value(pstar));
  const double xi = x / t;

  const double g1 = (gamma - 1.0) / (gamma + 1.0);
  const double g2 = (gamma - 1.0) / (2.0 * gamma);

  PrimitiveState s;
  s.size = 3;
  if (xi <= ustar) {
    // left of the contact
    if (pstar > left[2]) {
      const double shock_speed =
          left[1] - fl.c * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pstar / left[2] + g2);
      if (xi <= shock_speed) {
        return left;
      }
      s[0] = left[0] * ((pstar / left[2] + g1) / (g1 * pstar / left[2] + 1.0));
      s[1] = ustar;
      s[2] = pstar;
      return s;
    }
    const double cstar = fl.c * std::pow(pstar / left[2], g2);
    const double head = left[1] - fl.c;
    const double tail = ustar - cstar;
    if (xi <= head) {
      return left;
    }
    if (xi >= tail) {
      s[0] = left[0] * std::pow(pstar / left[2], 1.0 / gamma);
      s[1] = ustar;
      s[2] = pstar;
      return s;
    }
    const double c = 2.0 / (gamma + 1.0) * (fl.c + 0.5 * (gamma - 1.0) * (left[1] - xi));
    s[0] = left[0] * std::pow(c / fl.c, 2.0 / (gamma - 1.0));
    s[1] = 2.0 / (gamma + 1.0) * (fl.c + 0.5 * (gamma - 1.0) * left[1] + xi);
    s[2] = left[2] * std::pow(c / fl.c, 2.0 * gamma / (gamma - 1.0));
    return s;
  }

  // right of the contact
  if (pstar > right[2]) {
    const double shock_speed =
        right[1] + fr.c * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pstar / right[2] + g2);
    if (xi >= shock_speed) {
      return right;
    }
    s[0] = right[0] * ((pstar / right[2] + g1) / (g1 * pstar / right[2] + 1.0));
    s[1] = ustar;
    s[2] = pstar;
    return s;
  }
  const double cstar = fr.c * std::pow(pstar / right[2], g2);
  const double head = right[1] + fr.c;
  const double tail = ustar + cstar;
  if (xi >= head) {
    return right;
  }
  if (xi <= tail) {
    s[0] = right[0] * std::pow(pstar / right[2], 1.0 / gamma);
    s[1] = ustar;
    s[2] = pstar;
    return s;
  }
  const double c = 2.0 / (gamma + 1.0) * (fr.c - 0.5 * (gamma - 1.0) * (right[1] - xi));
  s[0] = right[0] * std::pow(c / fr.c, 2.0 / (gamma - 1.0));
  s[1] = 2.0 / (gamma + 1.0) * (-fr.c + 0.5 * (gamma - 1.0) * right[1] + xi);
  s[2] = right[2] * std::pow(c / fr.c, 2.0 * gamma / (gamma - 1.0));
  return s;
}

void write_snapshots_csv(const ProblemSpec& problem, const Grid1D& grid,
                         std::span<const Snapshot> snapshots, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("write_snapshots_csv: cannot open " + path);
  }
  const int m = n_conservation_laws(problem.kind);
  std::fprintf(f, "t,x");
  for (int k = 0; k < m; ++k) {
    std::fprintf(f, ",q%d", k);
  }
  const char* prim_names[3] = {nullptr, nullptr, nullptr};
  switch (problem.kind) {
    case SystemKind::kBurgers:
      prim_names[0] = "u";
      break;
    case SystemKind::kShallowWater:
      prim_names[0] = "h";
      prim_names[1] = "u";
      break;
    case SystemKind::kEuler:
      prim_names[0] = "rho";
      prim_names[1] = "u";
      prim_names[2] = "p";
      break;
  }
  for (int k = 0; k < m; ++k) {
    std::fprintf(f, ",%s", prim_names[k]);
  }
  std::fprintf(f, "\n");
  for (const Snapshot& snap : snapshots) {
    for (int i = 0; i < grid.n_cells; ++i) {
      std::fprintf(f, "%.17g,%.17g", snap.t, grid.center(i));
      const double* q = snap.states.cell(i);
      for (int k = 0; k < m; ++k) {
        std::fprintf(f, ",%.17g", q[k]);
      }
      const PrimitiveState s = from_conserved(problem.kind, {q, static_cast<std::size_t>(m)},
                                              problem.constants);
      for (int k = 0; k < m; ++k) {
        std::fprintf(f, ",%.17g", s[k]);
      }
      std::fprintf(f, "\n");
    }
  }
  std::fclose(f);
}

}  // namespace relaxnn
