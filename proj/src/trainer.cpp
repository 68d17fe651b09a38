#include "relaxnn/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "relaxnn/rng.hpp"

namespace relaxnn {

namespace {

constexpr std::uint64_t kUSeedTag = 0x752d6e6574ull;  // distinct init streams
constexpr std::uint64_t kVSeedTag = 0x762d6e6574ull;
constexpr int kBlockSize = 64;

PrimitiveState boundary_target(const ExperimentSetup& setup, double x,
                               std::span<const double> z) {
  if (setup.stochastic) {
    return stochastic_initial_state(setup.problem, *setup.stochastic, x, z);
  }
  return initial_state(setup.problem, x);
}

void validate_setup(const ExperimentSetup& setup, const MlpConfig& u_config,
                    const std::optional<MlpConfig>& v_config) {
  const int n_rows = n_conservation_laws(setup.problem.kind);
  if (static_cast<int>(setup.weights.residual_rows.size()) != n_rows) {
    throw std::invalid_argument("trainer: residual weight count does not match system");
  }
  if (u_config.output_dim != n_components(setup.problem.kind)) {
    throw std::invalid_argument("trainer: u-network output dim does not match system");
  }
  const int z_dim = setup.stochastic ? setup.stochastic->s : 0;
  if (u_config.input_dim != 2 + z_dim) {
    throw std::invalid_argument("trainer: u-network input dim does not match experiment");
  }
  if (setup.mode == Mode::kRelaxNN) {
    if (!v_config.has_value()) {
      throw std::invalid_argument("trainer: RelaxNN mode needs a v-network");
    }
    const int n_flux = n_relaxed(setup.problem.kind, setup.problem.relax);
    if (static_cast<int>(setup.weights.flux_rows.size()) != n_flux) {
      throw std::invalid_argument("trainer: flux weight count does not match variant");
    }
    if (v_config->output_dim != n_flux) {
      throw std::invalid_argument("trainer: v-network output dim does not match variant");
    }
    if (v_config->input_dim != u_config.input_dim) {
      throw std::invalid_argument("trainer: network input dims differ");
    }
  } else if (v_config.has_value()) {
    throw std::invalid_argument("trainer: PINN mode takes no v-network");
  }
}

}  // namespace

double weighted_total(const LossRecord& record, const LossWeights& weights) {
  double total = 0.0;
  for (std::size_t r = 0; r < record.residual_rows.size(); ++r) {
    total += weights.residual_rows[r] * record.residual_rows[r];
  }
  for (std::size_t r = 0; r < record.flux_rows.size(); ++r) {
    total += weights.flux_rows[r] * record.flux_rows[r];
  }
  total += weights.ic * record.ic;
  total += weights.bc * record.bc;
  return total;
}

double lr_at(long epoch, const TrainConfig& config) {
  if (epoch < 0) {
    throw std::invalid_argument("lr_at: epoch must be non-negative");
  }
  const long stairs = epoch / config.decay_every;
  return config.lr0 * std::pow(config.decay_rate, static_cast<double>(stairs));
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const TrainConfig& config) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + config.eps_adam);
  }
}

DerivChannels u_channels(const ExperimentSetup& setup) {
  if (setup.mode == Mode::kPinn) {
    return {true, true};
  }
  bool any_physical = false;
  for (bool r : relaxed_rows(setup.problem.kind, setup.problem.relax)) {
    any_physical |= !r;
  }
  return {true, any_physical};
}

DerivChannels v_channels() { return {false, true}; }

TapeLoss total_loss(Tape& tape, const ExperimentSetup& setup, const PointSets& points,
                    const ParamSet& u_params, const ParamSet* v_params) {
  const bool relaxnn = setup.mode == Mode::kRelaxNN;
  if (relaxnn != (v_params != nullptr)) {
    throw std::invalid_argument("total_loss: v-parameters must be present iff RelaxNN mode");
  }
  std::optional<MlpConfig> v_config;
  if (v_params) {
    v_config = v_params->config();
  }
  validate_setup(setup, u_params.config(), v_config);

  const SystemKind kind = setup.problem.kind;
  const SystemConstants& constants = setup.problem.constants;
  const int n_rows = n_conservation_laws(kind);
  const int n_flux = relaxnn ? n_relaxed(kind, setup.problem.relax) : 0;
  const DerivChannels u_chan = u_channels(setup);

  TapeParams u_bind = bind_params(tape, u_params, /*trainable=*/true);
  std::optional<TapeParams> v_bind;
  if (relaxnn) {
    v_bind = bind_params(tape, *v_params, /*trainable=*/true);
  }

  const std::size_t dim = static_cast<std::size_t>(points.coord_dim);
  std::vector<NodeId> res_sum(n_rows), flux_sum(n_flux);
  std::vector<double> u_vals_buffer;
  for (int i = 0; i < points.n_interior(); ++i) {
    const std::span<const double> x{points.interior_row(i), dim};
    const auto u_triples = forward_with_input_derivatives(tape, u_bind, x, u_chan);
    std::vector<OutputTriple> v_triples;
    if (relaxnn) {
      v_triples = forward_with_input_derivatives(tape, *v_bind, x, v_channels());
    }
    const auto rows = residual_terms(
        tape, kind, relaxnn ? std::optional<RelaxType>(setup.problem.relax) : std::nullopt,
        u_triples, v_triples, constants);
    for (int r = 0; r < n_rows; ++r) {
      const NodeId sq = tape.square(rows[r]);
      res_sum[r] = i == 0 ? sq : tape.add(res_sum[r], sq);
    }
    if (relaxnn) {
      std::vector<NodeId> u_values, v_values;
      for (const auto& t : u_triples) u_values.push_back(t.value);
      for (const auto& t : v_triples) v_values.push_back(t.value);
      const auto mismatch = flux_mismatch_terms(tape, kind, setup.problem.relax, u_values,
                                                v_values, constants);
      for (int r = 0; r < n_flux; ++r) {
        const NodeId sq = tape.square(mismatch[r]);
        flux_sum[r] = i == 0 ? sq : tape.add(flux_sum[r], sq);
      }
    }
  }

  auto data_sum = [&](const std::vector<double>& rows, int n_points) {
    NodeId sum{};
    for (int i = 0; i < n_points; ++i) {
      const double* row = rows.data() + static_cast<std::size_t>(i) * dim;
      const auto values = forward(tape, u_bind, {row, dim});
      const PrimitiveState target =
          boundary_target(setup, row[1], {row + 2, dim - 2});
      for (int k = 0; k < n_rows; ++k) {
        const NodeId d = tape.sub(values[k], tape.leaf(target[k]));
        const NodeId sq = tape.square(d);
        sum = (i == 0 && k == 0) ? sq : tape.add(sum, sq);
      }
    }
    return sum;
  };
  const NodeId ic_sum = data_sum(points.ic, points.n_ic());
  const NodeId bc_sum = data_sum(points.bc, points.n_bc());

  TapeLoss out;
  out.breakdown.residual_rows.resize(n_rows);
  out.breakdown.flux_rows.resize(n_flux);
  NodeId root{};
  bool have_root = false;
  auto add_family = [&](NodeId sum, int n_points, double weight, double& mean_out) {
    const NodeId mean = tape.mul(tape.leaf(1.0 / n_points), sum);
    mean_out = tape.value(mean);
    const NodeId term = tape.mul(tape.leaf(weight), mean);
    root = have_root ? tape.add(root, term) : term;
    have_root = true;
  };
  for (int r = 0; r < n_rows; ++r) {
    add_family(res_sum[r], points.n_interior(), setup.weights.residual_rows[r],
               out.breakdown.residual_rows[r]);
  }
  for (int r = 0; r < n_flux; ++r) {
    add_family(flux_sum[r], points.n_interior(), setup.weights.flux_rows[r],
               out.breakdown.flux_rows[r]);
  }
  add_family(ic_sum, points.n_ic(), setup.weights.ic, out.breakdown.ic);
  add_family(bc_sum, points.n_bc(), setup.weights.bc, out.breakdown.bc);

  out.root = root;
  out.breakdown.total = tape.value(root);
  out.n_u_params = u_params.count();
  out.n_v_params = v_params ? v_params->count() : 0;
  return out;
}

struct LossGradEvaluator::Scratch {
  kernel::NetWorkspace u_ws;
  std::optional<kernel::NetWorkspace> v_ws;
  Tape tape;
  std::vector<double> leaf_adj;
  std::vector<double> u_val_adj, u_dt_adj, u_dx_adj, v_val_adj, v_dx_adj;
  std::vector<OutputTriple> u_triples, v_triples;
  std::vector<NodeId> u_values, v_values;

  Scratch(const MlpConfig& u_config, const std::optional<MlpConfig>& v_config)
      : u_ws(u_config) {
    if (v_config) {
      v_ws.emplace(*v_config);
    }
    const int nu = u_config.output_dim;
    const int nv = v_config ? v_config->output_dim : 0;
    u_val_adj.resize(nu);
    u_dt_adj.resize(nu);
    u_dx_adj.resize(nu);
    v_val_adj.resize(nv);
    v_dx_adj.resize(nv);
    u_triples.resize(nu);
    v_triples.resize(nv);
    u_values.resize(nu);
    v_values.resize(nv);
    leaf_adj.resize(static_cast<std::size_t>(nu) * 3 + static_cast<std::size_t>(nv) * 2);
  }
};

LossGradEvaluator::~LossGradEvaluator() = default;

LossGradEvaluator::LossGradEvaluator(ExperimentSetup setup, MlpConfig u_config,
                                     std::optional<MlpConfig> v_config)
    : setup_(std::move(setup)), u_config_(std::move(u_config)), v_config_(std::move(v_config)) {
  validate_setup(setup_, u_config_, v_config_);
  u_chan_ = u_channels(setup_);
  n_rows_ = n_conservation_laws(setup_.problem.kind);
  n_flux_ = setup_.mode == Mode::kRelaxNN ? n_relaxed(setup_.problem.kind, setup_.problem.relax) : 0;
  int n_threads = 1;
#ifdef _OPENMP
  n_threads = omp_get_max_threads();
#endif
  scratch_.resize(n_threads);
}

void LossGradEvaluator::point_interior(const double* row, double inv_interior,
                                       const ParamSet& u_params, const ParamSet* v_params,
                                       Scratch& scratch, std::span<double> grad_u,
                                       std::span<double> grad_v,
                                       std::span<double> breakdown) const {
  const std::size_t dim = 2 + (setup_.stochastic ? setup_.stochastic->s : 0);
  const std::span<const double> x{row, dim};
  const bool relaxnn = setup_.mode == Mode::kRelaxNN;
  const double inv_n = inv_interior;

  kernel::aug_forward(u_params, x, u_chan_, scratch.u_ws);
  if (relaxnn) {
    kernel::aug_forward(*v_params, x, v_channels(), *scratch.v_ws);
  }

  Tape& t = scratch.tape;
  t.clear();
  const int n_comp = n_rows_;
  for (int k = 0; k < n_comp; ++k) {
    auto& triple = scratch.u_triples[k];
    triple.value = t.leaf(scratch.u_ws.values()[k], true);
    triple.d_dt.reset();
    triple.d_dx.reset();
    if (u_chan_.d_dt) triple.d_dt = t.leaf(scratch.u_ws.d_dt()[k], true);
    if (u_chan_.d_dx) triple.d_dx = t.leaf(scratch.u_ws.d_dx()[k], true);
  }
  for (int j = 0; j < n_flux_; ++j) {
    auto& triple = scratch.v_triples[j];
    triple.value = t.leaf(scratch.v_ws->values()[j], true);
    triple.d_dt.reset();
    triple.d_dx = t.leaf(scratch.v_ws->d_dx()[j], true);
  }

  const auto rows = residual_terms(
      t, setup_.problem.kind,
      relaxnn ? std::optional<RelaxType>(setup_.problem.relax) : std::nullopt,
      scratch.u_triples, std::span<const OutputTriple>(scratch.v_triples.data(),
                                                       static_cast<std::size_t>(n_flux_)),
      setup_.problem.constants);

  NodeId root{};
  bool have_root = false;
  for (int r = 0; r < n_rows_; ++r) {
    const NodeId sq = t.square(rows[r]);
    breakdown[r] += t.value(sq);
    const NodeId term = t.mul(t.leaf(setup_.weights.residual_rows[r] * inv_n), sq);
    root = have_root ? t.add(root, term) : term;
    have_root = true;
  }
  if (relaxnn) {
    for (int k = 0; k < n_comp; ++k) scratch.u_values[k] = scratch.u_triples[k].value;
    for (int j = 0; j < n_flux_; ++j) scratch.v_values[j] = scratch.v_triples[j].value;
    const auto mismatch =
        flux_mismatch_terms(t, setup_.problem.kind, setup_.problem.relax, scratch.u_values,
                            scratch.v_values, setup_.problem.constants);
    for (int r = 0; r < n_flux_; ++r) {
      const NodeId sq = t.square(mismatch[r]);
      breakdown[n_rows_ + r] += t.value(sq);
      const NodeId term = t.mul(t.leaf(setup_.weights.flux_rows[r] * inv_n), sq);
      root = t.add(root, term);
    }
  }

  const std::size_t n_leaves = t.parameter_leaves().size();
  t.backward_into(root, {scratch.leaf_adj.data(), n_leaves});

  std::size_t idx = 0;
  for (int k = 0; k < n_comp; ++k) {
    scratch.u_val_adj[k] = scratch.leaf_adj[idx++];
    if (u_chan_.d_dt) scratch.u_dt_adj[k] = scratch.leaf_adj[idx++];
    if (u_chan_.d_dx) scratch.u_dx_adj[k] = scratch.leaf_adj[idx++];
  }
  for (int j = 0; j < n_flux_; ++j) {
    scratch.v_val_adj[j] = scratch.leaf_adj[idx++];
    scratch.v_dx_adj[j] = scratch.leaf_adj[idx++];
  }

  kernel::aug_backward(u_params, u_chan_, scratch.u_val_adj,
                       u_chan_.d_dt ? std::span<const double>(scratch.u_dt_adj)
                                    : std::span<const double>{},
                       u_chan_.d_dx ? std::span<const double>(scratch.u_dx_adj)
                                    : std::span<const double>{},
                       scratch.u_ws, grad_u);
  if (relaxnn) {
    kernel::aug_backward(*v_params, v_channels(), scratch.v_val_adj, {}, scratch.v_dx_adj,
                         *scratch.v_ws, grad_v);
  }
}

void LossGradEvaluator::point_boundary(const double* row, int coord_dim,
                                       const ParamSet& u_params, Scratch& scratch,
                                       std::span<double> grad_u, double weight_over_n,
                                       double& sq_accum) const {
  const std::span<const double> x{row, static_cast<std::size_t>(coord_dim)};
  kernel::forward(u_params, x, scratch.u_ws);
  const PrimitiveState target =
      boundary_target(setup_, row[1], {row + 2, static_cast<std::size_t>(coord_dim - 2)});
  const auto values = scratch.u_ws.values();
  for (int k = 0; k < n_rows_; ++k) {
    const double d = values[k] - target[k];
    sq_accum += d * d;
    scratch.u_val_adj[k] = 2.0 * d * weight_over_n;
  }
  kernel::aug_backward(u_params, DerivChannels{}, scratch.u_val_adj, {}, {}, scratch.u_ws,
                       grad_u);
}

LossRecord LossGradEvaluator::evaluate(const PointSets& points, const ParamSet& u_params,
                                       const ParamSet* v_params, std::span<double> grad_u,
                                       std::span<double> grad_v) {
  const bool relaxnn = setup_.mode == Mode::kRelaxNN;
  if (relaxnn != (v_params != nullptr)) {
    throw std::invalid_argument("evaluate: v-parameters must be present iff RelaxNN mode");
  }
  if (grad_u.size() != u_params.count() ||
      (relaxnn && grad_v.size() != v_params->count())) {
    throw std::invalid_argument("evaluate: gradient span size mismatch");
  }

  struct Block {
    int set;  // 0 interior, 1 ic, 2 bc
    int begin;
    int end;
  };
  std::vector<Block> blocks;
  auto chunk = [&](int set, int n) {
    for (int b = 0; b < n; b += kBlockSize) {
      blocks.push_back(Block{set, b, std::min(n, b + kBlockSize)});
    }
  };
  chunk(0, points.n_interior());
  chunk(1, points.n_ic());
  chunk(2, points.n_bc());

  const std::size_t grad_len = u_params.count() + (relaxnn ? v_params->count() : 0);
  const int n_slots = n_rows_ + n_flux_ + 2;
  const int n_blocks = static_cast<int>(blocks.size());
  partial_grad_.assign(static_cast<std::size_t>(n_blocks) * grad_len, 0.0);
  partial_break_.assign(static_cast<std::size_t>(n_blocks) * n_slots, 0.0);

  const double inv_interior = 1.0 / points.n_interior();
  const double ic_w_over_n = setup_.weights.ic / points.n_ic();
  const double bc_w_over_n = setup_.weights.bc / points.n_bc();

#pragma omp parallel
  {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    if (!scratch_[tid]) {
      scratch_[tid] = std::make_unique<Scratch>(u_config_, v_config_);
    }
    Scratch& scratch = *scratch_[tid];
#pragma omp for schedule(static)
    for (int b = 0; b < n_blocks; ++b) {
      const Block& block = blocks[b];
      double* gp = partial_grad_.data() + static_cast<std::size_t>(b) * grad_len;
      std::span<double> block_grad_u{gp, u_params.count()};
      std::span<double> block_grad_v{gp + u_params.count(),
                                     relaxnn ? v_params->count() : 0};
      double* bp = partial_break_.data() + static_cast<std::size_t>(b) * n_slots;
      std::span<double> block_break{bp, static_cast<std::size_t>(n_slots)};
      for (int i = block.begin; i < block.end; ++i) {
        switch (block.set) {
          case 0:
            point_interior(points.interior_row(i), inv_interior, u_params, v_params, scratch,
                           block_grad_u, block_grad_v, block_break);
            break;
          case 1:
            point_boundary(points.ic_row(i), points.coord_dim, u_params, scratch,
                           block_grad_u, ic_w_over_n, block_break[n_rows_ + n_flux_]);
            break;
          default:
            point_boundary(points.bc_row(i), points.coord_dim, u_params, scratch,
                           block_grad_u, bc_w_over_n, block_break[n_rows_ + n_flux_ + 1]);
            break;
        }
      }
    }
  }

  std::fill(grad_u.begin(), grad_u.end(), 0.0);
  std::fill(grad_v.begin(), grad_v.end(), 0.0);
  std::vector<double> sums(n_slots, 0.0);
  for (int b = 0; b < n_blocks; ++b) {
    const double* gp = partial_grad_.data() + static_cast<std::size_t>(b) * grad_len;
    for (std::size_t j = 0; j < grad_u.size(); ++j) {
      grad_u[j] += gp[j];
    }
    for (std::size_t j = 0; j < grad_v.size(); ++j) {
      grad_v[j] += gp[u_params.count() + j];
    }
    const double* bp = partial_break_.data() + static_cast<std::size_t>(b) * n_slots;
    for (int s = 0; s < n_slots; ++s) {
      sums[s] += bp[s];
    }
  }

  LossRecord record;
  record.residual_rows.resize(n_rows_);
  record.flux_rows.resize(n_flux_);
  for (int r = 0; r < n_rows_; ++r) {
    record.residual_rows[r] = sums[r] * inv_interior;
  }
  for (int r = 0; r < n_flux_; ++r) {
    record.flux_rows[r] = sums[n_rows_ + r] * inv_interior;
  }
  record.ic = sums[n_rows_ + n_flux_] / points.n_ic();
  record.bc = sums[n_rows_ + n_flux_ + 1] / points.n_bc();
  record.total = weighted_total(record, setup_.weights);
  return record;
}

namespace {

void append_record(FILE* f, const LossRecord& record) {
  std::fprintf(f, "{\"epoch\":%ld,\"lr\":%.17g,\"total\":%.17g,\"residual\":[", record.epoch,
               record.lr, record.total);
  for (std::size_t r = 0; r < record.residual_rows.size(); ++r) {
    std::fprintf(f, "%s%.17g", r ? "," : "", record.residual_rows[r]);
  }
  std::fprintf(f, "],\"flux\":[");
  for (std::size_t r = 0; r < record.flux_rows.size(); ++r) {
    std::fprintf(f, "%s%.17g", r ? "," : "", record.flux_rows[r]);
  }
  std::fprintf(f, "],\"ic\":%.17g,\"bc\":%.17g}\n", record.ic, record.bc);
}

}  // namespace

void write_history_jsonl(const LossHistory& history, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("write_history_jsonl: cannot open " + path);
  }
  for (const auto& record : history.records) {
    append_record(f, record);
  }
  std::fclose(f);
}

TrainResult train(const ExperimentSetup& setup, const TrainOptions& options) {
  validate_setup(setup, options.u_config, options.v_config);
  const bool relaxnn = setup.mode == Mode::kRelaxNN;
  const int z_dim = setup.stochastic ? setup.stochastic->s : 0;
  const std::uint64_t seed = options.config.seed;

  PointSets points = sample_points(setup.problem, options.counts, z_dim, seed);

  TrainResult result;
  result.u_params = init_he_uniform(options.u_config, mix64(seed ^ kUSeedTag));
  if (relaxnn) {
    result.v_params = init_he_uniform(*options.v_config, mix64(seed ^ kVSeedTag));
  }

  AdamState u_state(result.u_params.count());
  AdamState v_state(relaxnn ? result.v_params->count() : 0);
  std::vector<double> grad_u(result.u_params.count());
  std::vector<double> grad_v(relaxnn ? result.v_params->count() : 0);

  LossGradEvaluator evaluator(setup, options.u_config, options.v_config);

  FILE* history_file = nullptr;
  if (!options.history_path.empty()) {
    history_file = std::fopen(options.history_path.c_str(), "wb");
    if (!history_file) {
      throw std::runtime_error("train: cannot open history file " + options.history_path);
    }
  }
  auto save_checkpoints = [&](const std::string& suffix) {
    if (options.checkpoint_dir.empty()) return;
    result.u_params.save(options.checkpoint_dir + "/checkpoint_u" + suffix + ".bin");
    if (relaxnn) {
      result.v_params->save(options.checkpoint_dir + "/checkpoint_v" + suffix + ".bin");
    }
  };

  for (long epoch = 0; epoch < options.config.epochs; ++epoch) {
    if (options.resample_each_epoch && epoch > 0) {
      points = sample_points(setup.problem, options.counts, z_dim,
                             mix64(seed ^ static_cast<std::uint64_t>(epoch)));
    }
    const double lr = lr_at(epoch, options.config);

    LossRecord record;
    if (options.engine == Engine::kKernel) {
      record = evaluator.evaluate(points, result.u_params,
                                  relaxnn ? &*result.v_params : nullptr, grad_u, grad_v);
    } else {
      Tape tape;  // rebuilt each epoch
      const TapeLoss loss = total_loss(tape, setup, points, result.u_params,
                                       relaxnn ? &*result.v_params : nullptr);
      std::vector<double> flat(loss.n_u_params + loss.n_v_params);
      tape.backward_into(loss.root, flat);
      std::copy(flat.begin(), flat.begin() + loss.n_u_params, grad_u.begin());
      if (relaxnn) {
        std::copy(flat.begin() + loss.n_u_params, flat.end(), grad_v.begin());
      }
      record = loss.breakdown;
    }
    record.epoch = epoch;
    record.lr = lr;
    result.history.records.push_back(record);
    if (history_file) {
      append_record(history_file, record);
    }

    if (!std::isfinite(record.total) || record.total > options.config.abort_threshold) {
      result.aborted = true;
      result.abort_reason = "loss diverged at epoch " + std::to_string(epoch);
      break;
    }

    adam_step(result.u_params.values(), grad_u, u_state, lr, options.config);
    if (relaxnn) {
      adam_step(result.v_params->values(), grad_v, v_state, lr, options.config);
    }

    if (options.config.checkpoint_every > 0 &&
        (epoch + 1) % options.config.checkpoint_every == 0) {
      char suffix[32];
      std::snprintf(suffix, sizeof(suffix), "_ep%08ld", epoch + 1);
      save_checkpoints(suffix);
    }
  }

  save_checkpoints("");
  if (history_file) {
    std::fclose(history_file);
  }
  return result;
}

}  // namespace relaxnn
