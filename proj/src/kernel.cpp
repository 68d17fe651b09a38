#include "relaxnn/kernel.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace relaxnn::kernel {

namespace {

// Eight independent accumulators in a fixed order: SIMD-friendly without
// reassociation flags, and the summation order never depends on threading.
inline double dot(const double* w, const double* v, int n) {
  double acc[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  int j = 0;
  for (; j + 8 <= n; j += 8) {
    for (int k = 0; k < 8; ++k) {
      acc[k] += w[j + k] * v[j + k];
    }
  }
  double tail = 0.0;
  for (; j < n; ++j) {
    tail += w[j] * v[j];
  }
  return (((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]))) +
         tail;
}

inline void axpy(double a, const double* x, double* y, int n) {
  for (int j = 0; j < n; ++j) {
    y[j] += a * x[j];
  }
}

}  // namespace

NetWorkspace::NetWorkspace(const MlpConfig& config) : config_(config) {
  const int levels = config_.n_layers() + 1;
  a_.resize(levels);
  abar_.resize(levels);
  int max_width = config_.input_dim;
  for (int level = 0; level < levels; ++level) {
    const int width = level == 0 ? config_.input_dim : config_.layer_out(level - 1);
    max_width = std::max(max_width, width);
    a_[level].resize(width);
    abar_[level].resize(width);
    for (int c = 0; c < 2; ++c) {
      dz_[c].resize(levels);
      da_[c].resize(levels);
      dabar_[c].resize(levels);
      dz_[c][level].resize(width);
      da_[c][level].resize(width);
      dabar_[c][level].resize(width);
    }
  }
  zbar_.resize(max_width);
  dzbar_[0].resize(max_width);
  dzbar_[1].resize(max_width);
}

void aug_forward(const ParamSet& net, std::span<const double> x, DerivChannels chans,
                 NetWorkspace& ws) {
  const MlpConfig& config = net.config();
  if (config != ws.config_) {
    throw std::invalid_argument("aug_forward: workspace built for another config");
  }
  if (static_cast<int>(x.size()) != config.input_dim) {
    throw std::invalid_argument("aug_forward: input dimension mismatch");
  }
  if (chans.d_dx && config.input_dim < 2) {
    throw std::invalid_argument("aug_forward: d_dx requested on a 1-D input");
  }
  const bool on[2] = {chans.d_dt, chans.d_dx};

  std::memcpy(ws.a_[0].data(), x.data(), x.size() * sizeof(double));
  for (int c = 0; c < 2; ++c) {
    if (!on[c]) continue;
    std::fill(ws.da_[c][0].begin(), ws.da_[c][0].end(), 0.0);
    ws.da_[c][0][c] = 1.0;
  }

  const double* params = net.values().data();
  const int n_layers = config.n_layers();
  for (int l = 0; l < n_layers; ++l) {
    const int n_in = config.layer_in(l);
    const int n_out = config.layer_out(l);
    const double* W = params + net.weight_offset(l);
    const double* b = params + net.bias_offset(l);
    const double* a_prev = ws.a_[l].data();
    double* a = ws.a_[l + 1].data();
    const bool hidden = l < n_layers - 1;

    for (int i = 0; i < n_out; ++i) {
      a[i] = dot(W + static_cast<std::size_t>(i) * n_in, a_prev, n_in) + b[i];
    }
    for (int c = 0; c < 2; ++c) {
      if (!on[c]) continue;
      const double* d_prev = ws.da_[c][l].data();
      double* dz = ws.dz_[c][l + 1].data();
      for (int i = 0; i < n_out; ++i) {
        dz[i] = dot(W + static_cast<std::size_t>(i) * n_in, d_prev, n_in);
      }
    }
    if (hidden) {
      for (int i = 0; i < n_out; ++i) {
        a[i] = std::tanh(a[i]);
      }
      for (int c = 0; c < 2; ++c) {
        if (!on[c]) continue;
        const double* dz = ws.dz_[c][l + 1].data();
        double* da = ws.da_[c][l + 1].data();
        for (int i = 0; i < n_out; ++i) {
          da[i] = (1.0 - a[i] * a[i]) * dz[i];
        }
      }
    } else {
      for (int c = 0; c < 2; ++c) {
        if (!on[c]) continue;
        std::memcpy(ws.da_[c][l + 1].data(), ws.dz_[c][l + 1].data(),
                    static_cast<std::size_t>(n_out) * sizeof(double));
      }
    }
  }
}

void forward(const ParamSet& net, std::span<const double> x, NetWorkspace& ws) {
  aug_forward(net, x, DerivChannels{}, ws);
}

std::vector<double> forward_values(const ParamSet& net, std::span<const double> x) {
  NetWorkspace ws(net.config());
  forward(net, x, ws);
  return std::vector<double>(ws.values().begin(), ws.values().end());
}

void aug_backward(const ParamSet& net, DerivChannels chans,
                  std::span<const double> value_adjoint,
                  std::span<const double> dt_adjoint,
                  std::span<const double> dx_adjoint, const NetWorkspace& ws,
                  std::span<double> grad) {
  const MlpConfig& config = net.config();
  if (grad.size() != net.count()) {
    throw std::invalid_argument("aug_backward: gradient span size mismatch");
  }
  const bool on[2] = {chans.d_dt, chans.d_dx};
  const std::span<const double> chan_adj[2] = {dt_adjoint, dx_adjoint};
  if (static_cast<int>(value_adjoint.size()) != config.output_dim ||
      (on[0] && static_cast<int>(dt_adjoint.size()) != config.output_dim) ||
      (on[1] && static_cast<int>(dx_adjoint.size()) != config.output_dim)) {
    throw std::invalid_argument("aug_backward: adjoint span size mismatch");
  }
  const int n_layers = config.n_layers();
  const int n_out_total = config.output_dim;

  std::memcpy(ws.abar_[n_layers].data(), value_adjoint.data(),
              static_cast<std::size_t>(n_out_total) * sizeof(double));
  for (int c = 0; c < 2; ++c) {
    if (!on[c]) continue;
    std::memcpy(ws.dabar_[c][n_layers].data(), chan_adj[c].data(),
                static_cast<std::size_t>(n_out_total) * sizeof(double));
  }

  const double* params = net.values().data();
  for (int l = n_layers - 1; l >= 0; --l) {
    const int n_in = config.layer_in(l);
    const int n_out = config.layer_out(l);
    const double* W = params + net.weight_offset(l);
    const bool hidden = l < n_layers - 1;
    const double* abar = ws.abar_[l + 1].data();
    double* zbar = ws.zbar_.data();

    if (hidden) {
      // a = tanh(z), s = 1 - a^2, da_c = s * dz_c:
      //   dzbar_c = s * dabar_c
      //   sbar    = sum_c dz_c * dabar_c
      //   zbar    = s * (abar - 2 a sbar)
      const double* a = ws.a_[l + 1].data();
      for (int i = 0; i < n_out; ++i) {
        const double s = 1.0 - a[i] * a[i];
        double sbar = 0.0;
        for (int c = 0; c < 2; ++c) {
          if (!on[c]) continue;
          const double dab = ws.dabar_[c][l + 1][i];
          ws.dzbar_[c][i] = s * dab;
          sbar += ws.dz_[c][l + 1][i] * dab;
        }
        zbar[i] = s * (abar[i] - 2.0 * a[i] * sbar);
      }
    } else {
      std::memcpy(zbar, abar, static_cast<std::size_t>(n_out) * sizeof(double));
      for (int c = 0; c < 2; ++c) {
        if (!on[c]) continue;
        std::memcpy(ws.dzbar_[c].data(), ws.dabar_[c][l + 1].data(),
                    static_cast<std::size_t>(n_out) * sizeof(double));
      }
    }

    // active-channel views so the row sweeps below fuse into single passes
    int nc = 0;
    const double* d_prev[2] = {nullptr, nullptr};
    const double* dzb[2] = {nullptr, nullptr};
    double* dab_prev[2] = {nullptr, nullptr};
    for (int c = 0; c < 2; ++c) {
      if (!on[c]) continue;
      d_prev[nc] = ws.da_[c][l].data();
      dzb[nc] = ws.dzbar_[c].data();
      dab_prev[nc] = ws.dabar_[c][l].data();
      ++nc;
    }

    double* wbar = grad.data() + net.weight_offset(l);
    double* bbar = grad.data() + net.bias_offset(l);
    const double* a_prev = ws.a_[l].data();
    for (int i = 0; i < n_out; ++i) {
      bbar[i] += zbar[i];
      double* wrow = wbar + static_cast<std::size_t>(i) * n_in;
      const double zi = zbar[i];
      if (nc == 0) {
        axpy(zi, a_prev, wrow, n_in);
      } else if (nc == 1) {
        const double d0 = dzb[0][i];
        for (int j = 0; j < n_in; ++j) {
          wrow[j] += zi * a_prev[j] + d0 * d_prev[0][j];
        }
      } else {
        const double d0 = dzb[0][i];
        const double d1 = dzb[1][i];
        for (int j = 0; j < n_in; ++j) {
          wrow[j] += zi * a_prev[j] + d0 * d_prev[0][j] + d1 * d_prev[1][j];
        }
      }
    }

    if (l > 0) {
      double* abar_prev = ws.abar_[l].data();
      std::fill(abar_prev, abar_prev + n_in, 0.0);
      for (int c = 0; c < nc; ++c) {
        std::fill(dab_prev[c], dab_prev[c] + n_in, 0.0);
      }
      for (int i = 0; i < n_out; ++i) {
        const double* wrow = W + static_cast<std::size_t>(i) * n_in;
        const double zi = zbar[i];
        if (nc == 0) {
          axpy(zi, wrow, abar_prev, n_in);
        } else if (nc == 1) {
          const double d0 = dzb[0][i];
          for (int j = 0; j < n_in; ++j) {
            const double w = wrow[j];
            abar_prev[j] += w * zi;
            dab_prev[0][j] += w * d0;
          }
        } else {
          const double d0 = dzb[0][i];
          const double d1 = dzb[1][i];
          for (int j = 0; j < n_in; ++j) {
            const double w = wrow[j];
            abar_prev[j] += w * zi;
            dab_prev[0][j] += w * d0;
            dab_prev[1][j] += w * d1;
          }
        }
      }
    }
  }
}

}  // namespace relaxnn::kernel
