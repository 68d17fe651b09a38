#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxnn/autodiff.hpp"
#include "relaxnn/kernel.hpp"
#include "relaxnn/mlp.hpp"
#include "relaxnn/sampling.hpp"
#include "relaxnn/systems.hpp"
#include "relaxnn/uq.hpp"

namespace relaxnn {

enum class Mode { kPinn, kRelaxNN };

// Per-row weights for the residual family (one per conservation law) and the
// flux family (one per relaxed row); PINN mode reads the residual rows only.
struct LossWeights {
  std::vector<double> residual_rows;
  std::vector<double> flux_rows;
  double ic = 1.0;
  double bc = 1.0;
};

struct TrainConfig {
  long epochs = 300000;
  double lr0 = 1e-3;
  double decay_rate = 0.99;
  long decay_every = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  std::uint64_t seed = 1;
  long checkpoint_every = 0;  // 0 = final checkpoint only
  double abort_threshold = 1e8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// Unweighted per-family means plus the weighted total.
struct LossRecord {
  long epoch = 0;
  double lr = 0.0;
  double total = 0.0;
  std::vector<double> residual_rows;
  std::vector<double> flux_rows;
  double ic = 0.0;
  double bc = 0.0;
};

struct LossHistory {
  std::vector<LossRecord> records;
};

double weighted_total(const LossRecord& record, const LossWeights& weights);

// 1e-3 * 0.99^floor(epoch/1000) staircase by default.
double lr_at(long epoch, const TrainConfig& config);

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const TrainConfig& config);

struct ExperimentSetup {
  ProblemSpec problem;
  Mode mode = Mode::kRelaxNN;
  LossWeights weights;
  std::optional<StochasticIC> stochastic;
};

// Derivative channels each network needs for the experiment's residual rows.
DerivChannels u_channels(const ExperimentSetup& setup);
DerivChannels v_channels();

// Serial reference: the whole weighted loss as one tape expression rooted at
// `root`; backward(root) yields the exact parameter gradient, with leaves
// registered u-parameters first, then v.
struct TapeLoss {
  NodeId root;
  LossRecord breakdown;
  std::size_t n_u_params = 0;
  std::size_t n_v_params = 0;
};

TapeLoss total_loss(Tape& tape, const ExperimentSetup& setup, const PointSets& points,
                    const ParamSet& u_params, const ParamSet* v_params);

// Production path: per-point analytic backprop kernels run over fixed-size
// point blocks (OpenMP), with block partials reduced in index order so the
// result is bit-identical for any thread count.
class LossGradEvaluator {
 public:
  LossGradEvaluator(ExperimentSetup setup, MlpConfig u_config,
                    std::optional<MlpConfig> v_config);
  ~LossGradEvaluator();

  // grad spans must match the parameter counts; they are overwritten.
  LossRecord evaluate(const PointSets& points, const ParamSet& u_params,
                      const ParamSet* v_params, std::span<double> grad_u,
                      std::span<double> grad_v);

 private:
  struct Scratch;
  void point_interior(const double* row, double inv_interior, const ParamSet& u_params,
                      const ParamSet* v_params, Scratch& scratch, std::span<double> grad_u,
                      std::span<double> grad_v, std::span<double> breakdown) const;
  void point_boundary(const double* row, int coord_dim, const ParamSet& u_params,
                      Scratch& scratch, std::span<double> grad_u, double weight_over_n,
                      double& sq_accum) const;

  ExperimentSetup setup_;
  MlpConfig u_config_;
  std::optional<MlpConfig> v_config_;
  DerivChannels u_chan_;
  int n_rows_ = 0;
  int n_flux_ = 0;
  std::vector<std::unique_ptr<Scratch>> scratch_;
  std::vector<double> partial_grad_;
  std::vector<double> partial_break_;
};

enum class Engine { kKernel, kTape };

struct TrainOptions {
  MlpConfig u_config;
  std::optional<MlpConfig> v_config;
  SamplingCounts counts;
  TrainConfig config;
  Engine engine = Engine::kKernel;
  bool resample_each_epoch = false;
  std::string history_path;     // JSON-lines stream; empty = memory only
  std::string checkpoint_dir;   // empty = no checkpoints written
};

struct TrainResult {
  ParamSet u_params;
  std::optional<ParamSet> v_params;
  LossHistory history;
  bool aborted = false;
  std::string abort_reason;
};

TrainResult train(const ExperimentSetup& setup, const TrainOptions& options);

void write_history_jsonl(const LossHistory& history, const std::string& path);

}  // namespace relaxnn
