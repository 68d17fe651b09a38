#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "relaxnn/harness.hpp"
#include "relaxnn/kernel.hpp"
#include "relaxnn/rng.hpp"

namespace relaxnn {

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<long> seed;
  std::optional<long> epochs;
  std::string out_dir;
  std::string mode;
  int relax_type = 0;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonArgs& args, bool needs_config = true) {
  auto* opt = sub->add_option("--config", args.config_path, "experiment config file");
  if (needs_config) {
    opt->required();
  }
  sub->add_option("--seed", args.seed, "override the experiment seed");
  sub->add_option("--epochs", args.epochs, "override the epoch count");
  sub->add_option("--out", args.out_dir, "override the output directory");
  sub->add_option("--mode", args.mode, "pinn or relaxnn")
      ->check(CLI::IsMember({"pinn", "relaxnn"}));
  sub->add_option("--relax-type", args.relax_type, "relaxation variant (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  sub->add_option("--threads", args.threads, "OpenMP thread count (0 = default)");
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config_path);
  if (!args.mode.empty() || args.relax_type != 0) {
    // rebuild around the overridden mode/variant so net dims and weight rows
    // track the change, then re-apply the file on top
    std::string text;
    {
      ExperimentConfig base = cfg;
      if (!args.mode.empty()) {
        base.mode = args.mode == "pinn" ? Mode::kPinn : Mode::kRelaxNN;
      }
      if (args.relax_type != 0) {
        base.relax = static_cast<RelaxType>(args.relax_type);
      }
      ExperimentConfig fresh = default_config(base.problem_id, base.mode, base.relax);
      fresh.train.seed = cfg.train.seed;
      fresh.train.epochs = cfg.train.epochs;
      fresh.counts = cfg.counts;
      fresh.out_dir = cfg.out_dir;
      fresh.stochastic = cfg.stochastic;
      fresh.eval_cells = cfg.eval_cells;
      fresh.reference_cells = cfg.reference_cells;
      fresh.times = cfg.times;
      cfg = fresh;
    }
  }
  if (args.seed) {
    cfg.train.seed = static_cast<std::uint64_t>(*args.seed);
  }
  if (args.epochs) {
    cfg.train.epochs = *args.epochs;
  }
  if (!args.out_dir.empty()) {
    cfg.out_dir = args.out_dir;
  }
#ifdef _OPENMP
  if (args.threads > 0) {
    omp_set_num_threads(args.threads);
  }
#endif
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

int cmd_train(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = make_setup(cfg);
  TrainOptions options = make_train_options(cfg);
  options.history_path = cfg.out_dir + "/history.jsonl";
  options.checkpoint_dir = cfg.out_dir;

  const TrainResult result = train(setup, options);
  if (result.aborted) {
    std::fprintf(stderr, "train: %s\n", result.abort_reason.c_str());
    return 2;
  }
  if (!result.history.records.empty()) {
    std::printf("trained %zu epochs, final total loss %.17g\n", result.history.records.size(),
                result.history.records.back().total);
  }
  std::printf("history: %s\n", options.history_path.c_str());
  std::printf("checkpoint: %s/checkpoint_u.bin\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_reference(const ExperimentConfig& cfg) {
  const ProblemSpec problem = config_problem(cfg);
  const Grid1D grid{problem.x_min, problem.x_max, cfg.reference_cells};
  SolveStats stats;
  const auto snapshots = solve(problem, grid, cfg.cfl, cfg.times, &stats);
  const std::string path = cfg.out_dir + "/reference.csv";
  write_snapshots_csv(problem, grid, snapshots, path);
  std::printf("reference: %s (%ld steps)\n", path.c_str(), stats.n_steps);
  for (std::size_t k = 0; k < stats.initial_total.size(); ++k) {
    const double drift =
        stats.final_total[k] - stats.initial_total[k] + stats.boundary_integral[k];
    std::printf("conservation drift q%zu: %.3e\n", k, drift);
  }
  return 0;
}

int cmd_evaluate(const ExperimentConfig& cfg, std::string checkpoint, std::string reference) {
  if (checkpoint.empty()) {
    checkpoint = cfg.out_dir + "/checkpoint_u.bin";
  }
  if (reference.empty()) {
    reference = cfg.out_dir + "/reference.csv";
  }
  if (!std::filesystem::exists(reference)) {
    std::fprintf(stderr, "evaluate: missing reference snapshots at %s (run `reference` first)\n",
                 reference.c_str());
    return 1;
  }
  if (!std::filesystem::exists(checkpoint)) {
    std::fprintf(stderr, "evaluate: missing checkpoint at %s (run `train` first)\n",
                 checkpoint.c_str());
    return 1;
  }
  const ParamSet u_params = ParamSet::load(checkpoint);
  const ProblemSpec problem = config_problem(cfg);
  const ReferenceField field = restrict_reference(read_snapshots_csv(reference), cfg.eval_cells);
  const ErrorReport report = evaluate(u_params, problem, field);
  write_error_report(report, cfg.out_dir);
  write_slices(report, cfg.out_dir);
  std::printf("relative L2: %.17g\n", report.relative_l2_all);
  for (int k = 0; k < report.n_comp; ++k) {
    std::printf("relative L2 component %d: %.17g\n", k, report.relative_l2_component[k]);
  }
  return 0;
}

int cmd_uq(const ExperimentConfig& cfg, std::string checkpoint, bool run_train,
           bool make_reference) {
  if (!cfg.stochastic) {
    std::fprintf(stderr, "uq: config has no stochastic IC ([uq] kind)\n");
    return 1;
  }
  if (run_train) {
    const int rc = cmd_train(cfg);
    if (rc != 0) return rc;
  }
  const ProblemSpec problem = config_problem(cfg);

  std::vector<double> grid_tx;
  const Grid1D grid{problem.x_min, problem.x_max, cfg.eval_cells};
  for (double t : cfg.times) {
    for (int i = 0; i < grid.n_cells; ++i) {
      grid_tx.push_back(t);
      grid_tx.push_back(grid.center(i));
    }
  }

  if (checkpoint.empty()) {
    checkpoint = cfg.out_dir + "/checkpoint_u.bin";
  }
  if (std::filesystem::exists(checkpoint)) {
    const ParamSet u_params = ParamSet::load(checkpoint);
    MeanVarianceField field;
    if (cfg.uq_method == "mc") {
      field = mc_mean_variance(u_params, grid_tx, uniform_cube_sampler(cfg.train.seed),
                               cfg.uq_samples);
    } else {
      if (cfg.stochastic->s > 6) {
        std::fprintf(stderr, "uq: tensor quadrature is infeasible for s = %d; use method = mc\n",
                     cfg.stochastic->s);
        return 1;
      }
      field = quad_mean_variance(u_params, grid_tx, gauss_legendre(cfg.uq_quad_points),
                                 cfg.stochastic->s);
    }
    const std::string path = cfg.out_dir + "/uq_stats.csv";
    write_mean_variance_csv(grid_tx, field, path);
    std::printf("uq stats: %s\n", path.c_str());
  } else if (!make_reference) {
    std::fprintf(stderr, "uq: missing checkpoint at %s (train first or pass --reference)\n",
                 checkpoint.c_str());
    return 1;
  }

  if (make_reference) {
    const UqReference ref = uq_reference_mc(problem, *cfg.stochastic, grid, cfg.times,
                                            cfg.uq_reference_samples, cfg.train.seed, cfg.cfl);
    const std::string path = cfg.out_dir + "/uq_reference.csv";
    write_uq_reference_csv(ref, path);
    std::printf("uq reference: %s\n", path.c_str());
  }
  return 0;
}

// Randomized autodiff verification: tape gradients against central
// differences, derivative-augmented forwards against finite differences of
// the forward pass, and the analytic kernel against the tape.
int cmd_grad_check(std::uint64_t seed) {
  Rng rng(seed);
  double worst_tape = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    std::vector<double> point(n);
    for (double& p : point) {
      p = rng.uniform(-2.0, 2.0);
    }
    const std::uint64_t expr_seed = rng.next_u64();
    const TapeFn f = [n, expr_seed](Tape& tape, std::span<const NodeId> leaves) {
      Rng local(expr_seed);
      std::vector<NodeId> pool(leaves.begin(), leaves.end());
      for (int step = 0; step < 12; ++step) {
        const NodeId a = pool[local.next_u64() % pool.size()];
        const NodeId b = pool[local.next_u64() % pool.size()];
        switch (local.next_u64() % 5) {
          case 0: pool.push_back(tape.add(a, b)); break;
          case 1: pool.push_back(tape.sub(a, b)); break;
          case 2: pool.push_back(tape.mul(a, b)); break;
          case 3: pool.push_back(tape.tanh(a)); break;
          default: pool.push_back(tape.square(a)); break;
        }
      }
      NodeId root = pool.back();
      for (int i = 0; i < n; ++i) {
        root = tape.add(root, tape.tanh(pool[i]));
      }
      return root;
    };
    worst_tape = std::max(worst_tape, grad_check(f, point, 1e-6));
  }
  std::printf("tape backward vs central differences: max relative deviation %.3e\n", worst_tape);

  double worst_aug = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    MlpConfig config{2, {16, 16}, 1};
    const ParamSet params = init_he_uniform(config, rng.next_u64());
    const double x[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    Tape tape;
    const auto triples =
        forward_with_input_derivatives(tape, params, x, DerivChannels{true, true});
    const double step = 1e-5;
    for (int dim = 0; dim < 2; ++dim) {
      double xp[2] = {x[0], x[1]};
      double xm[2] = {x[0], x[1]};
      xp[dim] += step;
      xm[dim] -= step;
      const double fd = (kernel::forward_values(params, xp)[0] -
                         kernel::forward_values(params, xm)[0]) /
                        (2.0 * step);
      const double ad =
          tape.value(dim == 0 ? *triples[0].d_dt : *triples[0].d_dx);
      worst_aug = std::max(worst_aug, std::abs(ad - fd) / std::max(std::abs(fd), 1e-12));
    }
  }
  std::printf("input derivatives vs finite differences: max relative deviation %.3e\n",
              worst_aug);

  const bool ok = worst_tape < 1e-7 && worst_aug < 1e-6;
  std::printf("grad-check: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"RelaxNN: relaxation neural networks for 1-D hyperbolic systems"};
  app.require_subcommand(1);

  CommonArgs train_args, ref_args, eval_args, uq_args;
  std::string checkpoint, reference;
  bool uq_train = false, uq_reference = false;
  std::uint64_t check_seed = 1;

  auto* sub_train = app.add_subcommand("train", "train a RelaxNN or PINN model");
  add_common(sub_train, train_args);

  auto* sub_ref = app.add_subcommand("reference", "run the finite-volume reference solver");
  add_common(sub_ref, ref_args);

  auto* sub_eval = app.add_subcommand("evaluate", "compare a checkpoint against the reference");
  add_common(sub_eval, eval_args);
  sub_eval->add_option("--checkpoint", checkpoint, "u-network checkpoint path");
  sub_eval->add_option("--reference", reference, "reference snapshots CSV");

  auto* sub_uq = app.add_subcommand("uq", "uncertainty statistics for a stochastic experiment");
  add_common(sub_uq, uq_args);
  sub_uq->add_option("--checkpoint", checkpoint, "u-network checkpoint path");
  sub_uq->add_flag("--train", uq_train, "train before computing statistics");
  sub_uq->add_flag("--reference", uq_reference, "also compute the FV Monte Carlo reference");

  auto* sub_check = app.add_subcommand("grad-check", "verify gradients against finite differences");
  sub_check->add_option("--seed", check_seed, "randomization seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sub_train->parsed()) {
      return cmd_train(resolve_config(train_args));
    }
    if (sub_ref->parsed()) {
      return cmd_reference(resolve_config(ref_args));
    }
    if (sub_eval->parsed()) {
      return cmd_evaluate(resolve_config(eval_args), checkpoint, reference);
    }
    if (sub_uq->parsed()) {
      return cmd_uq(resolve_config(uq_args), checkpoint, uq_train, uq_reference);
    }
    if (sub_check->parsed()) {
      return cmd_grad_check(check_seed);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace relaxnn
