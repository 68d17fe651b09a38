#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <vector>

#include "relaxnn/rng.hpp"
#include "relaxnn/trainer.hpp"

using namespace relaxnn;

namespace {

ProblemSpec constant_problem(double c) {
  ProblemSpec p;
  p.id = "toy-const";
  p.kind = SystemKind::kBurgers;
  p.t0 = 0.0;
  p.t1 = 1.0;
  p.x_min = -1.0;
  p.x_max = 1.0;
  p.ic = InitialConditionKind::kConstant;
  p.ic_constant = {c, 0.0, 0.0};
  p.relax = RelaxType::kType1;
  return p;
}

ExperimentSetup burgers_setup(Mode mode) {
  ExperimentSetup setup;
  setup.problem = problem_by_id("burgers-riemann");
  setup.mode = mode;
  setup.weights.residual_rows = {0.1};
  if (mode == Mode::kRelaxNN) {
    setup.weights.flux_rows = {2.0};
  }
  setup.weights.ic = 10.0;
  setup.weights.bc = 10.0;
  return setup;
}

// Independent scalar re-implementation of the derivative-augmented forward.
struct PlainAug {
  std::vector<double> value, d_dt, d_dx;
};

PlainAug plain_aug_forward(const ParamSet& params, std::span<const double> x) {
  const MlpConfig& config = params.config();
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> dt(config.input_dim, 0.0), dx(config.input_dim, 0.0);
  dt[0] = 1.0;
  dx[1] = 1.0;
  for (int l = 0; l < config.n_layers(); ++l) {
    const int n_in = config.layer_in(l), n_out = config.layer_out(l);
    std::vector<double> z(n_out), zt(n_out), zx(n_out);
    for (int i = 0; i < n_out; ++i) {
      z[i] = params.bias(l, i);
      zt[i] = zx[i] = 0.0;
      for (int j = 0; j < n_in; ++j) {
        const double w = params.weight(l, i, j);
        z[i] += w * a[j];
        zt[i] += w * dt[j];
        zx[i] += w * dx[j];
      }
    }
    if (l < config.n_layers() - 1) {
      for (int i = 0; i < n_out; ++i) {
        const double ai = std::tanh(z[i]);
        const double s = 1.0 - ai * ai;
        z[i] = ai;
        zt[i] *= s;
        zx[i] *= s;
      }
    }
    a = z;
    dt = zt;
    dx = zx;
  }
  return {a, dt, dx};
}

double max_rel_dev(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-9});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("learning rate staircase") {
  TrainConfig config;
  CHECK(lr_at(0, config) == 1e-3);
  CHECK(lr_at(999, config) == 1e-3);
  CHECK(lr_at(1000, config) == doctest::Approx(0.99e-3).epsilon(1e-15));
  CHECK(lr_at(5000, config) == doctest::Approx(9.50990049900995e-4).epsilon(1e-12));
  CHECK_THROWS_AS(lr_at(-1, config), std::invalid_argument);
}

TEST_CASE("adam first step and zero-gradient fixed point") {
  TrainConfig config;
  {
    std::vector<double> params{0.5};
    std::vector<double> grads{1.0};
    AdamState state(1);
    adam_step(params, grads, state, 1e-3, config);
    // m_hat = 1, v_hat = 1 after bias correction
    CHECK(params[0] == doctest::Approx(0.5 - 1e-3 / (1.0 + 1e-8)).epsilon(1e-15));
  }
  {
    std::vector<double> params{0.5, -0.25};
    std::vector<double> grads{0.0, 0.0};
    AdamState state(2);
    for (int i = 0; i < 10; ++i) {
      adam_step(params, grads, state, 1e-3, config);
    }
    CHECK(params[0] == 0.5);
    CHECK(params[1] == -0.25);
  }
  {
    Rng rng(3);
    std::vector<double> p1{0.1, 0.2, 0.3}, p2{0.1, 0.2, 0.3};
    AdamState s1(3), s2(3);
    std::vector<double> g(3);
    for (int step = 0; step < 100; ++step) {
      for (double& gi : g) {
        gi = rng.uniform(-1.0, 1.0);
      }
      adam_step(p1, g, s1, 1e-3, config);
      adam_step(p2, g, s2, 1e-3, config);
    }
    CHECK(p1 == p2);
  }
}

TEST_CASE("derivative channel selection per mode and variant") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  CHECK(u_channels(setup).d_dt);
  CHECK_FALSE(u_channels(setup).d_dx);  // fully relaxed: no physical flux row

  setup.mode = Mode::kPinn;
  setup.weights.flux_rows.clear();
  CHECK(u_channels(setup).d_dx);

  ExperimentSetup euler;
  euler.problem = problem_by_id("euler-sod");
  euler.problem.relax = RelaxType::kType3;
  euler.mode = Mode::kRelaxNN;
  euler.weights.residual_rows = {0.1, 0.05, 0.01};
  euler.weights.flux_rows = {5.0};
  CHECK(u_channels(euler).d_dx);  // unrelaxed mass/momentum rows need d_dx

  CHECK(v_channels().d_dx);
  CHECK_FALSE(v_channels().d_dt);
}

TEST_CASE("constant-IC toy problem is an exact zero of the loss") {
  const double c = 0.7;
  ExperimentSetup setup;
  setup.problem = constant_problem(c);
  setup.mode = Mode::kRelaxNN;
  setup.weights.residual_rows = {0.1};
  setup.weights.flux_rows = {2.0};
  setup.weights.ic = 10.0;
  setup.weights.bc = 10.0;

  const MlpConfig u_config{2, {8}, 1};
  const MlpConfig v_config{2, {4}, 1};
  ParamSet u_params(u_config);  // all zeros
  ParamSet v_params(v_config);
  u_params.values()[u_params.bias_offset(1)] = c;
  v_params.values()[v_params.bias_offset(1)] = 0.5 * (c * c);

  const PointSets points = sample_points(setup.problem, SamplingCounts{50, 20, 10}, 0, 1);

  Tape tape;
  const TapeLoss loss = total_loss(tape, setup, points, u_params, &v_params);
  CHECK(loss.breakdown.total == 0.0);

  LossGradEvaluator evaluator(setup, u_config, v_config);
  std::vector<double> grad_u(u_params.count()), grad_v(v_params.count());
  const LossRecord record = evaluator.evaluate(points, u_params, &v_params, grad_u, grad_v);
  CHECK(record.total == 0.0);
  for (double g : grad_u) {
    CHECK(g == 0.0);
  }
}

TEST_CASE("zero weights give zero loss regardless of networks") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  setup.weights.residual_rows = {0.0};
  setup.weights.flux_rows = {0.0};
  setup.weights.ic = 0.0;
  setup.weights.bc = 0.0;
  const MlpConfig u_config{2, {8}, 1};
  const MlpConfig v_config{2, {4}, 1};
  const ParamSet u_params = init_he_uniform(u_config, 5);
  const ParamSet v_params = init_he_uniform(v_config, 6);
  const PointSets points = sample_points(setup.problem, SamplingCounts{20, 10, 6}, 0, 1);
  Tape tape;
  const TapeLoss loss = total_loss(tape, setup, points, u_params, &v_params);
  CHECK(loss.breakdown.total == 0.0);
}

TEST_CASE("single-point loss equals a hand-computed weighted sum") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  const MlpConfig u_config{2, {8}, 1};
  const MlpConfig v_config{2, {4}, 1};
  const ParamSet u_params = init_he_uniform(u_config, 11);
  const ParamSet v_params = init_he_uniform(v_config, 12);
  const PointSets points = sample_points(setup.problem, SamplingCounts{1, 1, 1}, 0, 9);

  const PlainAug u_aug = plain_aug_forward(u_params, {points.interior_row(0), 2});
  const PlainAug v_aug = plain_aug_forward(v_params, {points.interior_row(0), 2});
  const double residual = u_aug.d_dt[0] + v_aug.d_dx[0];
  const double flux = v_aug.value[0] - 0.5 * u_aug.value[0] * u_aug.value[0];
  const double ic_x = points.ic_row(0)[1];
  const double ic_diff =
      plain_aug_forward(u_params, {points.ic_row(0), 2}).value[0] -
      initial_state(setup.problem, ic_x)[0];
  const double bc_x = points.bc_row(0)[1];
  const double bc_diff =
      plain_aug_forward(u_params, {points.bc_row(0), 2}).value[0] -
      initial_state(setup.problem, bc_x)[0];
  const double expected = 0.1 * residual * residual + 2.0 * flux * flux +
                          10.0 * ic_diff * ic_diff + 10.0 * bc_diff * bc_diff;

  Tape tape;
  const TapeLoss loss = total_loss(tape, setup, points, u_params, &v_params);
  CHECK(loss.breakdown.total == doctest::Approx(expected).epsilon(1e-14));

  LossGradEvaluator evaluator(setup, u_config, v_config);
  std::vector<double> grad_u(u_params.count()), grad_v(v_params.count());
  const LossRecord record = evaluator.evaluate(points, u_params, &v_params, grad_u, grad_v);
  CHECK(record.total == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("kernel and tape engines agree on loss and gradient") {
  for (const Mode mode : {Mode::kRelaxNN, Mode::kPinn}) {
    ExperimentSetup setup = burgers_setup(mode);
    const MlpConfig u_config{2, {8, 8}, 1};
    const MlpConfig v_config{2, {6}, 1};
    const bool relaxnn = mode == Mode::kRelaxNN;
    const ParamSet u_params = init_he_uniform(u_config, 21);
    const ParamSet v_params = init_he_uniform(v_config, 22);
    const PointSets points = sample_points(setup.problem, SamplingCounts{64, 16, 8}, 0, 2);

    Tape tape;
    const TapeLoss loss =
        total_loss(tape, setup, points, u_params, relaxnn ? &v_params : nullptr);
    std::vector<double> tape_flat(loss.n_u_params + loss.n_v_params);
    tape.backward_into(loss.root, tape_flat);

    LossGradEvaluator evaluator(setup, u_config,
                                relaxnn ? std::optional<MlpConfig>(v_config) : std::nullopt);
    std::vector<double> grad_u(u_params.count());
    std::vector<double> grad_v(relaxnn ? v_params.count() : 0);
    const LossRecord record =
        evaluator.evaluate(points, u_params, relaxnn ? &v_params : nullptr, grad_u, grad_v);

    CHECK(std::abs(record.total - loss.breakdown.total) /
              std::max(std::abs(loss.breakdown.total), 1e-12) <
          1e-12);
    CHECK(max_rel_dev(grad_u, {tape_flat.data(), u_params.count()}) < 1e-10);
    if (relaxnn) {
      CHECK(max_rel_dev(grad_v, {tape_flat.data() + u_params.count(), v_params.count()}) <
            1e-10);
    }
  }
}

TEST_CASE("loss gradient matches central finite differences") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  const MlpConfig u_config{2, {8, 8}, 1};
  const MlpConfig v_config{2, {8, 8}, 1};
  ParamSet u_params = init_he_uniform(u_config, 31);
  ParamSet v_params = init_he_uniform(v_config, 32);
  const PointSets points = sample_points(setup.problem, SamplingCounts{20, 8, 4}, 0, 3);

  LossGradEvaluator evaluator(setup, u_config, v_config);
  std::vector<double> grad_u(u_params.count()), grad_v(v_params.count());
  evaluator.evaluate(points, u_params, &v_params, grad_u, grad_v);

  auto loss_value = [&]() {
    std::vector<double> gu(u_params.count()), gv(v_params.count());
    return evaluator.evaluate(points, u_params, &v_params, gu, gv).total;
  };

  Rng rng(77);
  const double step = 1e-6;
  for (int probe = 0; probe < 10; ++probe) {
    const bool on_u = probe % 2 == 0;
    ParamSet& target = on_u ? u_params : v_params;
    const std::vector<double>& grad = on_u ? grad_u : grad_v;
    const std::size_t idx = rng.next_u64() % target.count();
    const double keep = target.values()[idx];
    target.values()[idx] = keep + step;
    const double fp = loss_value();
    target.values()[idx] = keep - step;
    const double fm = loss_value();
    target.values()[idx] = keep;
    const double fd = (fp - fm) / (2.0 * step);
    const double scale = std::max({std::abs(fd), std::abs(grad[idx]), 1e-8});
    CHECK(std::abs(grad[idx] - fd) / scale < 1e-5);
  }
}

TEST_CASE("loss is invariant under point permutation") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  const MlpConfig u_config{2, {8}, 1};
  const MlpConfig v_config{2, {4}, 1};
  const ParamSet u_params = init_he_uniform(u_config, 41);
  const ParamSet v_params = init_he_uniform(v_config, 42);
  PointSets points = sample_points(setup.problem, SamplingCounts{100, 20, 10}, 0, 4);

  LossGradEvaluator evaluator(setup, u_config, v_config);
  std::vector<double> gu(u_params.count()), gv(v_params.count());
  const double before = evaluator.evaluate(points, u_params, &v_params, gu, gv).total;

  // reverse the interior rows
  PointSets shuffled = points;
  const int n = points.n_interior();
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < points.coord_dim; ++d) {
      shuffled.interior[static_cast<std::size_t>(i) * points.coord_dim + d] =
          points.interior[static_cast<std::size_t>(n - 1 - i) * points.coord_dim + d];
    }
  }
  const double after = evaluator.evaluate(shuffled, u_params, &v_params, gu, gv).total;
  CHECK(before == doctest::Approx(after).epsilon(1e-12));
}

TEST_CASE("zero-epoch training returns the initial parameters and empty history") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  TrainOptions options;
  options.u_config = MlpConfig{2, {8}, 1};
  options.v_config = MlpConfig{2, {4}, 1};
  options.counts = SamplingCounts{16, 8, 4};
  options.config.epochs = 0;
  options.config.seed = 1;
  const TrainResult result = train(setup, options);
  CHECK(result.history.records.empty());
  CHECK_FALSE(result.aborted);
  const ParamSet expected = init_he_uniform(options.u_config, mix64(1 ^ 0x752d6e6574ull));
  for (std::size_t i = 0; i < expected.count(); ++i) {
    CHECK(result.u_params.values()[i] == expected.values()[i]);
  }
}

TEST_CASE("constant-IC toy trains to near-zero loss") {
  const double c = 0.5;
  ExperimentSetup setup;
  setup.problem = constant_problem(c);
  setup.mode = Mode::kRelaxNN;
  setup.weights.residual_rows = {1.0};
  setup.weights.flux_rows = {1.0};
  setup.weights.ic = 1.0;
  setup.weights.bc = 1.0;

  // affine networks represent the steady solution exactly; an annealed Adam
  // run lands on it to roundoff
  TrainOptions options;
  options.u_config = MlpConfig{2, {}, 1};
  options.v_config = MlpConfig{2, {}, 1};
  options.counts = SamplingCounts{32, 16, 8};
  options.config.epochs = 500;
  options.config.lr0 = 0.1;
  options.config.decay_rate = 0.7;
  options.config.decay_every = 50;
  options.config.seed = 1;
  const TrainResult result = train(setup, options);
  REQUIRE(result.history.records.size() == 500);
  CHECK(result.history.records.back().total < 1e-6);

  // with a hidden layer the same run still descends steadily
  options.u_config = MlpConfig{2, {4}, 1};
  options.v_config = MlpConfig{2, {4}, 1};
  const TrainResult deep = train(setup, options);
  CHECK(deep.history.records.back().total < 1e-3);
  CHECK(deep.history.records.back().total < 1e-3 * deep.history.records.front().total);
}

TEST_CASE("history records recompute to their stored totals") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  TrainOptions options;
  options.u_config = MlpConfig{2, {8}, 1};
  options.v_config = MlpConfig{2, {4}, 1};
  options.counts = SamplingCounts{32, 16, 8};
  options.config.epochs = 25;
  const TrainResult result = train(setup, options);
  REQUIRE(result.history.records.size() == 25);
  for (const LossRecord& record : result.history.records) {
    const double recomputed = weighted_total(record, setup.weights);
    CHECK(std::abs(record.total - recomputed) <=
          1e-12 * std::max(1.0, std::abs(record.total)));
  }
  // epochs strictly ordered, lr follows the staircase
  for (std::size_t i = 0; i < result.history.records.size(); ++i) {
    CHECK(result.history.records[i].epoch == static_cast<long>(i));
    CHECK(result.history.records[i].lr == 1e-3);
  }
}

TEST_CASE("training twice with the same seed is bit-identical") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  TrainOptions options;
  options.u_config = MlpConfig{2, {8}, 1};
  options.v_config = MlpConfig{2, {4}, 1};
  options.counts = SamplingCounts{32, 16, 8};
  options.config.epochs = 20;
  const TrainResult a = train(setup, options);
  const TrainResult b = train(setup, options);
  REQUIRE(a.history.records.size() == b.history.records.size());
  for (std::size_t i = 0; i < a.history.records.size(); ++i) {
    CHECK(a.history.records[i].total == b.history.records[i].total);
  }
  for (std::size_t i = 0; i < a.u_params.count(); ++i) {
    CHECK(a.u_params.values()[i] == b.u_params.values()[i]);
  }
}

TEST_CASE("setup validation") {
  ExperimentSetup setup = burgers_setup(Mode::kRelaxNN);
  const PointSets points = sample_points(setup.problem, SamplingCounts{4, 2, 2}, 0, 1);
  const ParamSet u_params(MlpConfig{2, {4}, 1});

  Tape tape;
  // RelaxNN mode without v-parameters
  CHECK_THROWS_AS(total_loss(tape, setup, points, u_params, nullptr),
                  std::invalid_argument);

  // wrong output dimensionality
  const ParamSet bad_u(MlpConfig{2, {4}, 2});
  const ParamSet v_params(MlpConfig{2, {4}, 1});
  CHECK_THROWS_AS(total_loss(tape, setup, points, bad_u, &v_params),
                  std::invalid_argument);

  // weight row count mismatch
  ExperimentSetup bad_weights = setup;
  bad_weights.weights.residual_rows = {0.1, 0.2};
  CHECK_THROWS_AS(total_loss(tape, bad_weights, points, u_params, &v_params),
                  std::invalid_argument);
}
