// Acceptance suite: runs every gate end to end and prints one line per
// criterion. Exit status is nonzero when any criterion fails.
//
//   argv[1]  path to the relaxnn CLI binary (determinism checks)
//   argv[2]  directory holding the shipped experiment configs

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relaxnn/fvref.hpp"
#include "relaxnn/harness.hpp"
#include "relaxnn/rng.hpp"
#include "relaxnn/trainer.hpp"
#include "relaxnn/uq.hpp"

using namespace relaxnn;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& what) {
  std::printf("criterion %d: %s  %s\n", index, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) {
    ++g_failures;
  }
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// 1. Gradient exactness: every loss family against central finite
//    differences at step 1e-6, relative 1e-5, Burgers + Euler type3.
// ---------------------------------------------------------------------------
void criterion_gradient_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int checks = 0;

  struct Target {
    const char* problem;
    RelaxType relax;
  };
  const Target targets[] = {{"burgers-riemann", RelaxType::kType1},
                            {"euler-sod", RelaxType::kType3}};

  for (const Target& target : targets) {
    ProblemSpec problem = problem_by_id(target.problem);
    problem.relax = target.relax;
    const int n_rows = n_conservation_laws(problem.kind);
    const int n_flux = n_relaxed(problem.kind, target.relax);
    const MlpConfig u_config{2, {8, 8}, n_components(problem.kind)};
    const MlpConfig v_config{2, {8, 8}, n_flux};

    Rng rng(1234);
    for (int draw = 0; draw < 20; ++draw) {
      const ParamSet u_params = init_he_uniform(u_config, rng.next_u64());
      const ParamSet v_params = init_he_uniform(v_config, rng.next_u64());
      const PointSets points =
          sample_points(problem, SamplingCounts{4, 2, 2}, 0, rng.next_u64());

      // one family at a time: residual rows, flux rows, IC, BC
      const int n_families = n_rows + n_flux + 2;
      for (int family = 0; family < n_families; ++family) {
        ExperimentSetup setup;
        setup.problem = problem;
        setup.mode = Mode::kRelaxNN;
        setup.weights.residual_rows.assign(n_rows, 0.0);
        setup.weights.flux_rows.assign(n_flux, 0.0);
        setup.weights.ic = 0.0;
        setup.weights.bc = 0.0;
        if (family < n_rows) {
          setup.weights.residual_rows[family] = 1.0;
        } else if (family < n_rows + n_flux) {
          setup.weights.flux_rows[family - n_rows] = 1.0;
        } else if (family == n_rows + n_flux) {
          setup.weights.ic = 1.0;
        } else {
          setup.weights.bc = 1.0;
        }

        LossGradEvaluator evaluator(setup, u_config, v_config);
        std::vector<double> grad_u(u_params.count()), grad_v(v_params.count());
        evaluator.evaluate(points, u_params, &v_params, grad_u, grad_v);

        auto loss_at = [&](const ParamSet& uu, const ParamSet& vv) {
          std::vector<double> gu(uu.count()), gv(vv.count());
          return evaluator.evaluate(points, uu, &vv, gu, gv).total;
        };

        const double step = 1e-6;
        for (int probe = 0; probe < 4; ++probe) {
          const bool on_u = probe % 2 == 0;
          ParamSet pu = u_params;
          ParamSet pv = v_params;
          auto values = on_u ? pu.values() : pv.values();
          const std::vector<double>& grad = on_u ? grad_u : grad_v;
          const std::size_t idx = rng.next_u64() % values.size();
          const double keep = values[idx];
          values[idx] = keep + step;
          const double fp = loss_at(pu, pv);
          values[idx] = keep - step;
          const double fm = loss_at(pu, pv);
          const double fd = (fp - fm) / (2.0 * step);
          const double ad = grad[idx];
          const double scale = std::max(std::abs(fd), std::abs(ad));
          if (scale < 1e-10) {
            continue;  // family does not touch this parameter (e.g. IC vs v-net)
          }
          worst = std::max(worst, std::abs(ad - fd) / scale);
          ++checks;
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report(1, worst < 1e-5 && elapsed < 60.0,
         fmt("loss-family gradients vs central differences: max rel dev %.3e over %d probes "
             "(%.1fs)",
             worst, checks, elapsed));
}

// ---------------------------------------------------------------------------
// 2. Input-derivative exactness on 100 random cases.
// ---------------------------------------------------------------------------
void criterion_input_derivatives() {
  Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int width = 8 + static_cast<int>(rng.next_u64() % 12);
    const int depth = 1 + static_cast<int>(rng.next_u64() % 2);
    const int n_out = 1 + static_cast<int>(rng.next_u64() % 3);
    MlpConfig config{2, std::vector<int>(depth, width), n_out};
    const ParamSet params = init_he_uniform(config, rng.next_u64());
    const double x[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

    Tape tape;
    const auto triples = forward_with_input_derivatives(tape, params, x, {true, true});
    auto value_at = [&](const double* p) {
      Tape t;
      const auto nodes = forward(t, params, {p, 2});
      std::vector<double> out;
      for (const NodeId n : nodes) {
        out.push_back(t.value(n));
      }
      return out;
    };
    const double step = 1e-5;
    for (int dim = 0; dim < 2; ++dim) {
      double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
      xp[dim] += step;
      xm[dim] -= step;
      const auto vp = value_at(xp);
      const auto vm = value_at(xm);
      for (int k = 0; k < n_out; ++k) {
        const double fd = (vp[k] - vm[k]) / (2.0 * step);
        const double ad = tape.value(dim == 0 ? *triples[k].d_dt : *triples[k].d_dx);
        const double scale = std::max({std::abs(fd), std::abs(ad), 1e-9});
        worst = std::max(worst, std::abs(ad - fd) / scale);
      }
    }
  }
  report(2, worst < 1e-6,
         fmt("forward_with_input_derivatives vs central differences: max rel dev %.3e", worst));
}

// ---------------------------------------------------------------------------
// 3. Riemann oracle agreement for the FV reference solver.
// ---------------------------------------------------------------------------
void criterion_riemann_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;

  {
    const ProblemSpec problem = problem_by_id("burgers-riemann");
    const Grid1D grid{problem.x_min, problem.x_max, 2000};
    const double times[1] = {0.5};
    const auto snaps = solve(problem, grid, 0.5, times);
    double l1 = 0.0;
    int shock_cell = 0;
    double steepest = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) {
      l1 += std::abs(snaps[0].states.cell(i)[0] -
                     exact_burgers_riemann(1.0, 0.0, grid.center(i), 0.5)) *
            grid.dx();
      if (i + 1 < grid.n_cells) {
        const double drop = snaps[0].states.cell(i)[0] - snaps[0].states.cell(i + 1)[0];
        if (drop > steepest) {
          steepest = drop;
          shock_cell = i;
        }
      }
    }
    const double shock_err = std::abs(grid.center(shock_cell) - 0.25);
    pass = pass && l1 < 5e-3 && shock_err <= grid.dx();
    detail += fmt("burgers L1 %.3e (<5e-3), shock offset %.2e (<=dx %.2e); ", l1, shock_err,
                  grid.dx());
  }
  {
    const ProblemSpec problem = problem_by_id("euler-sod");
    const PrimitiveState left = initial_state(problem, -0.1);
    const PrimitiveState right = initial_state(problem, 0.1);
    const Grid1D grid{problem.x_min, problem.x_max, 1000};
    const double times[1] = {0.2};
    const auto snaps = solve(problem, grid, 0.5, times);
    double l1[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < grid.n_cells; ++i) {
      const PrimitiveState exact = exact_sod(left, right, 1.4, grid.center(i), 0.2);
      const auto q_exact = to_conserved(SystemKind::kEuler, exact, problem.constants);
      for (int k = 0; k < 3; ++k) {
        l1[k] += std::abs(snaps[0].states.cell(i)[k] - q_exact[k]) * grid.dx();
      }
    }
    pass = pass && l1[0] < 2e-2 && l1[1] < 2e-2 && l1[2] < 2e-2;
    detail += fmt("sod L1 per component (%.3e, %.3e, %.3e) (<2e-2)", l1[0], l1[1], l1[2]);
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 60.0;
  report(3, pass, detail + fmt(" (%.1fs)", elapsed));
}

// ---------------------------------------------------------------------------
// 4. Conservation on every deterministic problem.
// ---------------------------------------------------------------------------
void criterion_conservation() {
  bool pass = true;
  double worst = 0.0;
  std::string worst_id;
  for (const std::string& id : problem_ids()) {
    const ProblemSpec problem = problem_by_id(id);
    const Grid1D grid{problem.x_min, problem.x_max, 500};
    const std::vector<double> times{problem.figure_times.back()};
    SolveStats stats;
    solve(problem, grid, 0.5, times, &stats);
    for (std::size_t k = 0; k < stats.initial_total.size(); ++k) {
      const double drift =
          stats.final_total[k] - stats.initial_total[k] + stats.boundary_integral[k];
      // antisymmetric components total ~0; fall back to an O(1) mass scale
      double scale = std::abs(stats.initial_total[k]);
      if (scale < 1.0) scale = 1.0;
      const double rel = std::abs(drift) / scale;
      if (rel > worst) {
        worst = rel;
        worst_id = id;
      }
      pass = pass && rel < 1e-12;
    }
  }
  report(4, pass,
         fmt("boundary-flux-accounted conservation drift: worst %.3e on %s (<1e-12)", worst,
             worst_id.c_str()));
}

// ---------------------------------------------------------------------------
// 5. Desk-scale RelaxNN vs PINN on burgers-riemann.
// ---------------------------------------------------------------------------
void criterion_desk_training() {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec problem = problem_by_id("burgers-riemann");

  // shared reference: 2000 cells restricted onto the 400-cell eval grid
  const Grid1D ref_grid{problem.x_min, problem.x_max, 2000};
  const std::vector<double> times{0.0, 0.2, 0.4, 0.6};
  const auto snapshots = solve(problem, ref_grid, 0.5, times);
  ReferenceField fine;
  fine.n_comp = 1;
  fine.times = times;
  for (int i = 0; i < ref_grid.n_cells; ++i) {
    fine.x.push_back(ref_grid.center(i));
  }
  for (const auto& snap : snapshots) {
    for (int i = 0; i < ref_grid.n_cells; ++i) {
      fine.prim.push_back(snap.states.cell(i)[0]);
    }
  }
  const ReferenceField reference = restrict_reference(fine, 400);

  auto run = [&](Mode mode) {
    ExperimentSetup setup;
    setup.problem = problem;
    setup.mode = mode;
    setup.weights.residual_rows = {0.1};
    if (mode == Mode::kRelaxNN) {
      setup.weights.flux_rows = {2.0};
    }
    setup.weights.ic = 10.0;
    setup.weights.bc = 10.0;

    TrainOptions options;
    options.u_config = MlpConfig{2, {64, 64, 64}, 1};
    if (mode == Mode::kRelaxNN) {
      options.v_config = MlpConfig{2, {32, 32, 32}, 1};
    }
    options.counts = SamplingCounts{};  // 2540 / 320 / 160
    options.config.epochs = 30000;
    options.config.seed = 1;
    return train(setup, options);
  };

  const TrainResult relaxnn = run(Mode::kRelaxNN);
  const TrainResult pinn = run(Mode::kPinn);

  const ErrorReport relaxnn_report = evaluate(relaxnn.u_params, problem, reference);
  const ErrorReport pinn_report = evaluate(pinn.u_params, problem, reference);
  const double relaxnn_l2 = relaxnn_report.relative_l2_all;
  const double pinn_l2 = pinn_report.relative_l2_all;
  const double relaxnn_loss = relaxnn.history.records.back().total;
  const double pinn_loss = pinn.history.records.back().total;

  const bool pass = !relaxnn.aborted && !pinn.aborted && relaxnn_l2 < 5e-2 &&
                    relaxnn_l2 < pinn_l2 && relaxnn_loss < pinn_loss;
  report(5, pass,
         fmt("30k-epoch desk run: RelaxNN rel L2 %.4e (<5e-2) vs PINN %.4e; final loss "
             "%.4e vs %.4e (%.0fs)",
             relaxnn_l2, pinn_l2, relaxnn_loss, pinn_loss, seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// 6. Mode consistency: exact flux values turn RelaxNN rows into PINN rows.
// ---------------------------------------------------------------------------
void criterion_mode_consistency() {
  struct Case {
    SystemKind kind;
    RelaxType relax;
  };
  const Case cases[] = {
      {SystemKind::kBurgers, RelaxType::kType1},
      {SystemKind::kShallowWater, RelaxType::kType1},
      {SystemKind::kShallowWater, RelaxType::kType2},
      {SystemKind::kEuler, RelaxType::kType1},
      {SystemKind::kEuler, RelaxType::kType2},
      {SystemKind::kEuler, RelaxType::kType3},
  };
  const SystemConstants constants{1.0, 1.4};
  Rng rng(555);
  double worst = 0.0;
  for (const Case& tc : cases) {
    const int n = n_components(tc.kind);
    const MlpConfig config{2, {8, 8}, n};
    const ParamSet params = init_he_uniform(config, rng.next_u64());
    for (int point = 0; point < 100; ++point) {
      const double x[2] = {rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0)};
      Tape tape;
      const auto u_triples = forward_with_input_derivatives(tape, params, x, {true, true});
      const auto virtual_v = exact_flux_triples(tape, tc.kind, u_triples, constants);
      const auto mask = relaxed_rows(tc.kind, tc.relax);
      std::vector<OutputTriple> v_triples;
      for (std::size_t r = 0; r < mask.size(); ++r) {
        if (mask[r]) v_triples.push_back(virtual_v[r]);
      }
      const auto relaxed =
          residual_terms(tape, tc.kind, tc.relax, u_triples, v_triples, constants);
      const auto pinn = residual_terms(tape, tc.kind, std::nullopt, u_triples, {}, constants);
      for (std::size_t r = 0; r < relaxed.size(); ++r) {
        const double a = tape.value(relaxed[r]);
        const double b = tape.value(pinn[r]);
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        worst = std::max(worst, std::abs(a - b) / scale);
      }
    }
  }
  report(6, worst < 1e-12,
         fmt("RelaxNN residuals with exact flux vs PINN residuals: max dev %.3e (<1e-12)",
             worst));
}

// ---------------------------------------------------------------------------
// 7. Quadrature exactness.
// ---------------------------------------------------------------------------
void criterion_quadrature() {
  const QuadratureRule rule = gauss_legendre(10);
  double worst = 0.0;
  for (int degree = 0; degree <= 19; ++degree) {
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      integral += rule.weights[i] * std::pow(rule.nodes[i], degree);
    }
    const double exact = degree % 2 == 1 ? 0.0 : 2.0 / (degree + 1);
    worst = std::max(worst, std::abs(integral - exact));
  }

  // tensorized variance of f(z) = z1 under the uniform measure
  MlpConfig config{7, {}, 1};
  ParamSet params(config);
  params.values()[2] = 1.0;
  const std::vector<double> grid_tx{0.0, 0.0};
  const auto field = quad_mean_variance(params, grid_tx, rule, 5);
  const double var_err = std::abs(field.variance[0] - 1.0 / 3.0);

  report(7, worst < 1e-12 && var_err < 1e-12,
         fmt("GL(10) monomials to degree 19: max err %.3e; var(z1) err %.3e (<1e-12)", worst,
             var_err));
}

// ---------------------------------------------------------------------------
// 8. UQ statistics plumbing.
// ---------------------------------------------------------------------------
void criterion_uq_statistics() {
  bool pass = true;
  std::string detail;
  {
    // MC variance of the additive Burgers left state at N = 1e5
    const ProblemSpec problem = problem_by_id("burgers-riemann");
    const StochasticIC ic{StochasticIC::Kind::kAdditiveSum, 0.005, 100};
    const ZSampler sampler = uniform_cube_sampler(1);
    const int n = 100000;
    std::vector<double> z(100);
    std::vector<double> samples(n);
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      sampler(static_cast<std::uint64_t>(i), z);
      samples[i] = stochastic_initial_state(problem, ic, -0.3, z)[0];
      const double d = samples[i] - mean;
      mean += d / (i + 1);
      m2 += d * (samples[i] - mean);
    }
    const double variance = m2 / (n - 1);
    double m4 = 0.0;
    for (int i = 0; i < n; ++i) {
      m4 += std::pow(samples[i] - mean, 4);
    }
    m4 /= n;
    // standard error of the sample variance from the fourth moment
    const double se = std::sqrt((m4 - variance * variance * (n - 3.0) / (n - 1.0)) / n);
    const double expected = ic.epsilon * ic.epsilon * ic.s / 3.0;
    pass = pass && std::abs(variance - expected) < 3.0 * se;
    detail += fmt("IC variance %.6e vs eps^2 s/3 = %.6e (3se %.2e); ", variance, expected,
                  3.0 * se);
  }
  {
    // quadrature vs Monte Carlo on a random 5-z-input network
    const MlpConfig config{7, {10}, 1};
    const ParamSet params = init_he_uniform(config, 99);
    const std::vector<double> grid_tx{0.3, 0.1};
    const int n = 100000;
    const auto mc = mc_mean_variance(params, grid_tx, uniform_cube_sampler(3), n);
    const auto quad = quad_mean_variance(params, grid_tx, gauss_legendre(10), 5);
    const double se_mean = std::sqrt(mc.variance[0] / n);
    const double se_var = mc.variance[0] * std::sqrt(2.0 / (n - 1.0));
    const double mean_gap = std::abs(mc.mean[0] - quad.mean[0]);
    const double var_gap = std::abs(mc.variance[0] - quad.variance[0]);
    pass = pass && mean_gap < 3.0 * se_mean && var_gap < 3.0 * se_var;
    detail += fmt("quad-vs-MC mean gap %.2e (3se %.2e), var gap %.2e (3se %.2e)", mean_gap,
                  3.0 * se_mean, var_gap, 3.0 * se_var);
  }
  report(8, pass, detail);
}

// ---------------------------------------------------------------------------
// 9. Determinism of CLI subcommands, byte for byte, via the real binary.
// ---------------------------------------------------------------------------
void criterion_determinism(const std::string& cli, const fs::path& work) {
  const fs::path cfg_path = work / "desk.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[experiment]\n"
           "problem = burgers-riemann\n"
           "mode = relaxnn\n"
           "seed = 1\n"
           "[u_net]\ndepth = 2\nwidth = 16\n"
           "[v_net]\ndepth = 2\nwidth = 8\n"
           "[train]\nepochs = 40\n"
           "[sampling]\ninterior = 64\nic = 32\nbc = 16\n"
           "[reference]\ncells = 200\n"
           "[eval]\ncells = 50\ntimes = 0.2,0.4\n";
  }
  const fs::path uq_cfg_path = work / "desk_uq.cfg";
  {
    std::ofstream cfg(uq_cfg_path);
    cfg << "[experiment]\n"
           "problem = burgers-riemann\n"
           "mode = relaxnn\n"
           "seed = 1\n"
           "[u_net]\ndepth = 2\nwidth = 16\n"
           "[v_net]\ndepth = 2\nwidth = 8\n"
           "[train]\nepochs = 40\n"
           "[sampling]\ninterior = 64\nic = 32\nbc = 16\n"
           "[eval]\ncells = 50\ntimes = 0.2,0.4\n"
           "[uq]\nkind = additive-sum\nepsilon = 0.005\ns = 100\n"
           "method = mc\nsamples = 2000\n";
  }

  auto run = [&](const std::string& args, const fs::path& config, const fs::path& out) {
    const std::string cmd = cli + " " + args + " --config " + config.string() + " --out " +
                            out.string() + " >> " + (work / "cli.log").string() + " 2>&1";
    return std::system(cmd.c_str());
  };

  bool pass = true;
  std::string detail;
  const fs::path a = work / "a";
  const fs::path b = work / "b";
  const fs::path au = work / "a_uq";
  const fs::path bu = work / "b_uq";

  pass = pass && run("reference", cfg_path, a) == 0 && run("reference", cfg_path, b) == 0;
  pass = pass && slurp((a / "reference.csv").string()) == slurp((b / "reference.csv").string());
  detail += "reference ";

  pass = pass && run("train", cfg_path, a) == 0 && run("train", cfg_path, b) == 0;
  pass = pass && slurp((a / "history.jsonl").string()) == slurp((b / "history.jsonl").string());
  pass = pass &&
         slurp((a / "checkpoint_u.bin").string()) == slurp((b / "checkpoint_u.bin").string());
  pass = pass &&
         slurp((a / "checkpoint_v.bin").string()) == slurp((b / "checkpoint_v.bin").string());
  detail += "train ";

  pass = pass && run("evaluate", cfg_path, a) == 0 && run("evaluate", cfg_path, b) == 0;
  pass = pass &&
         slurp((a / "error_report.csv").string()) == slurp((b / "error_report.csv").string());
  pass = pass &&
         slurp((a / "error_field.csv").string()) == slurp((b / "error_field.csv").string());
  detail += "evaluate ";

  // the stochastic run retrains a (t,x,z) network through the CLI, then the
  // statistics CSVs must also match byte for byte
  pass = pass && run("uq --train", uq_cfg_path, au) == 0 &&
         run("uq --train", uq_cfg_path, bu) == 0;
  pass = pass &&
         slurp((au / "uq_stats.csv").string()) == slurp((bu / "uq_stats.csv").string());
  pass = pass && slurp((au / "history.jsonl").string()) ==
                     slurp((bu / "history.jsonl").string());
  detail += "uq";

  report(9, pass, "byte-identical outputs across reruns: " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "./relaxnn";
  const std::string configs_dir = argc > 2 ? argv[2] : "configs";

  // shipped configs must parse (the paper-scale extended-run mode)
  int config_count = 0;
  for (const auto& entry : fs::directory_iterator(configs_dir)) {
    if (entry.path().extension() == ".cfg") {
      load_config(entry.path().string());
      ++config_count;
    }
  }
  std::printf("loaded %d shipped configs from %s\n", config_count, configs_dir.c_str());

  const fs::path work = fs::temp_directory_path() / "relaxnn_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  criterion_gradient_exactness();
  criterion_input_derivatives();
  criterion_riemann_oracles();
  criterion_conservation();
  criterion_mode_consistency();
  criterion_quadrature();
  criterion_uq_statistics();
  criterion_determinism(cli, work);
  criterion_desk_training();

  fs::remove_all(work);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
