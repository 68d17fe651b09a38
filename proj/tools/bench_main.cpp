// Benchmark: serial tape reference vs the analytic kernel (serial and
// OpenMP) on one desk-scale Burgers epoch, including a gradient agreement
// check between the engines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "relaxnn/trainer.hpp"

using namespace relaxnn;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

double max_rel_dev(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-12});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = 5;
  if (argc > 1) {
    repeats = std::atoi(argv[1]);
  }

  ExperimentSetup setup;
  setup.problem = problem_by_id("burgers-riemann");
  setup.mode = Mode::kRelaxNN;
  setup.weights.residual_rows = {0.1};
  setup.weights.flux_rows = {2.0};
  setup.weights.ic = 10.0;
  setup.weights.bc = 10.0;

  const MlpConfig u_config{2, {64, 64, 64}, 1};
  const MlpConfig v_config{2, {32, 32, 32}, 1};
  const ParamSet u_params = init_he_uniform(u_config, 1);
  const ParamSet v_params = init_he_uniform(v_config, 2);
  const PointSets points = sample_points(setup.problem, SamplingCounts{}, 0, 1);

  std::vector<double> grad_u(u_params.count()), grad_v(v_params.count());
  std::vector<double> tape_grad_u(u_params.count()), tape_grad_v(v_params.count());

  std::printf("epoch cost, u-net [2,64,64,64,1], v-net [2,32,32,32,1], %d+%d+%d points\n",
              points.n_interior(), points.n_ic(), points.n_bc());

  // serial reference: one tape per epoch
  double tape_total = 0.0;
  {
    const double t0 = now_ms();
    for (int r = 0; r < repeats; ++r) {
      Tape tape;
      const TapeLoss loss = total_loss(tape, setup, points, u_params, &v_params);
      std::vector<double> flat(loss.n_u_params + loss.n_v_params);
      tape.backward_into(loss.root, flat);
      std::copy(flat.begin(), flat.begin() + loss.n_u_params, tape_grad_u.begin());
      std::copy(flat.begin() + loss.n_u_params, flat.end(), tape_grad_v.begin());
      tape_total = loss.breakdown.total;
    }
    std::printf("tape reference (serial):   %8.2f ms/epoch\n", (now_ms() - t0) / repeats);
  }

  LossGradEvaluator evaluator(setup, u_config, v_config);
  double kernel_total = 0.0;

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
#endif
  {
    const double t0 = now_ms();
    for (int r = 0; r < repeats; ++r) {
      kernel_total = evaluator.evaluate(points, u_params, &v_params, grad_u, grad_v).total;
    }
    std::printf("analytic kernel (1 thread): %8.2f ms/epoch\n", (now_ms() - t0) / repeats);
  }
#ifdef _OPENMP
  omp_set_num_threads(max_threads);
  std::vector<double> par_grad_u(u_params.count()), par_grad_v(v_params.count());
  {
    const double t0 = now_ms();
    double total = 0.0;
    for (int r = 0; r < repeats; ++r) {
      total = evaluator.evaluate(points, u_params, &v_params, par_grad_u, par_grad_v).total;
    }
    std::printf("analytic kernel (%d threads): %6.2f ms/epoch\n", max_threads,
                (now_ms() - t0) / repeats);
    std::printf("thread-count invariance: |total - serial| = %.3g, grad dev = %.3g\n",
                std::abs(total - kernel_total),
                std::max(max_rel_dev(par_grad_u, grad_u), max_rel_dev(par_grad_v, grad_v)));
  }
#endif

  std::printf("tape vs kernel: total dev %.3g, grad dev %.3g\n",
              std::abs(tape_total - kernel_total) / std::max(std::abs(tape_total), 1e-12),
              std::max(max_rel_dev(tape_grad_u, grad_u), max_rel_dev(tape_grad_v, grad_v)));
  return 0;
}
