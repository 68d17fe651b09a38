#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxnn/fvref.hpp"
#include "relaxnn/systems.hpp"
#include "relaxnn/trainer.hpp"
#include "relaxnn/uq.hpp"

namespace relaxnn {

// One experiment as described by a config file: problem, mode, networks,
// weights, training schedule, sampling, reference/eval grids, UQ settings.
struct ExperimentConfig {
  std::string problem_id = "burgers-riemann";
  Mode mode = Mode::kRelaxNN;
  RelaxType relax = RelaxType::kType1;
  int u_depth = 4;
  int u_width = 128;
  int v_depth = 4;
  int v_width = 64;
  LossWeights weights;
  TrainConfig train;
  SamplingCounts counts;
  Engine engine = Engine::kKernel;
  bool resample_each_epoch = false;
  std::string out_dir = "out";

  int reference_cells = 2000;
  double cfl = 0.5;
  int eval_cells = 400;
  std::vector<double> times;  // defaults to the problem's figure times

  std::optional<StochasticIC> stochastic;
  std::string uq_method = "quad";  // mc | quad
  int uq_samples = 100000;
  int uq_quad_points = 10;
  int uq_reference_samples = 10000;
};

// Paper-table defaults for the six deterministic experiments.
ExperimentConfig default_config(const std::string& problem_id, Mode mode,
                                std::optional<RelaxType> relax = std::nullopt);

// Flat key-value text with [sections]; unspecified keys fall back to the
// problem's defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

ProblemSpec config_problem(const ExperimentConfig& config);
ExperimentSetup make_setup(const ExperimentConfig& config);
TrainOptions make_train_options(const ExperimentConfig& config);
MlpConfig u_net_config(const ExperimentConfig& config);
MlpConfig v_net_config(const ExperimentConfig& config);

// ||pred - ref||_2 / ||ref||_2 with every component stacked into one vector;
// throws on a zero-norm reference.
double relative_l2(std::span<const double> pred, std::span<const double> ref);

struct ErrorReport {
  double relative_l2_all = 0.0;
  std::vector<double> relative_l2_component;
  std::vector<double> times;
  std::vector<double> x;
  int n_comp = 1;
  std::vector<double> pred;       // [time][cell][comp]
  std::vector<double> reference;  // same layout
  std::vector<double> abs_error;  // same layout
};

// Reference primitive fields read back from a snapshots CSV.
struct ReferenceField {
  std::vector<double> times;
  std::vector<double> x;
  int n_comp = 1;
  std::vector<double> prim;  // [time][cell][comp]
};

ReferenceField read_snapshots_csv(const std::string& path);

// Cell-average restriction onto a coarser grid; n_fine must be a multiple of
// n_coarse.
ReferenceField restrict_reference(const ReferenceField& fine, int n_coarse);

// Network evaluated at the reference field's cell centers and times.
ErrorReport evaluate(const ParamSet& u_params, const ProblemSpec& problem,
                     const ReferenceField& reference);

void write_error_report(const ErrorReport& report, const std::string& out_dir);
void write_slices(const ErrorReport& report, const std::string& out_dir);

// Subcommands: train, reference, evaluate, uq, grad-check.
int run_cli(int argc, const char* const* argv);

}  // namespace relaxnn
