#include "relaxnn/mlp.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "relaxnn/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace relaxnn {

namespace {
void validate(const MlpConfig& config) {
  if (config.input_dim < 1 || config.output_dim < 1) {
    throw std::invalid_argument("MlpConfig: dims must be >= 1");
  }
  for (int w : config.hidden) {
    if (w < 1) {
      throw std::invalid_argument("MlpConfig: hidden widths must be >= 1");
    }
  }
}
}  // namespace

ParamSet::ParamSet(MlpConfig config) : config_(std::move(config)) {
  validate(config_);
  std::size_t total = 0;
  for (int l = 0; l < config_.n_layers(); ++l) {
    w_offset_.push_back(total);
    total += static_cast<std::size_t>(config_.layer_out(l)) * config_.layer_in(l);
    b_offset_.push_back(total);
    total += config_.layer_out(l);
  }
  data_.assign(total, 0.0);
}

ParamSet init_he_uniform(const MlpConfig& config, std::uint64_t seed) {
  ParamSet params(config);
  Rng rng(seed);
  auto data = params.values();
  for (int l = 0; l < config.n_layers(); ++l) {
    const double bound = std::sqrt(6.0 / config.layer_in(l));
    const std::size_t n = static_cast<std::size_t>(config.layer_out(l)) * config.layer_in(l);
    for (std::size_t k = 0; k < n; ++k) {
      data[params.weight_offset(l) + k] = rng.uniform(-bound, bound);
    }
    // biases stay zero
  }
  return params;
}

void ParamSet::save(const std::string& path) const {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw std::runtime_error("ParamSet::save: cannot open " + path);
  }
  auto put_u32 = [&](std::uint32_t v) { std::fwrite(&v, 4, 1, f); };
  auto put_u64 = [&](std::uint64_t v) { std::fwrite(&v, 8, 1, f); };
  std::fwrite("RNNP", 1, 4, f);
  put_u32(1);
  put_u32(static_cast<std::uint32_t>(config_.input_dim));
  put_u32(static_cast<std::uint32_t>(config_.output_dim));
  put_u32(static_cast<std::uint32_t>(config_.hidden.size()));
  for (int w : config_.hidden) {
    put_u32(static_cast<std::uint32_t>(w));
  }
  put_u64(data_.size());
  for (int l = 0; l < config_.n_layers(); ++l) {
    put_u64(w_offset_[l]);
    put_u64(b_offset_[l]);
  }
  std::fwrite(data_.data(), sizeof(double), data_.size(), f);
  if (std::fclose(f) != 0) {
    throw std::runtime_error("ParamSet::save: write failed for " + path);
  }
}

ParamSet ParamSet::load(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) {
    throw std::runtime_error("ParamSet::load: cannot open " + path);
  }
  auto fail = [&](const char* what) -> std::runtime_error {
    std::fclose(f);
    return std::runtime_error(std::string("ParamSet::load: ") + what + ": " + path);
  };
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    if (std::fread(&v, 4, 1, f) != 1) throw fail("truncated header");
    return v;
  };
  auto get_u64 = [&]() {
    std::uint64_t v = 0;
    if (std::fread(&v, 8, 1, f) != 1) throw fail("truncated header");
    return v;
  };
  char magic[4];
  if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "RNNP", 4) != 0) {
    throw fail("bad magic");
  }
  if (get_u32() != 1) throw fail("unsupported version");
  MlpConfig config;
  config.input_dim = static_cast<int>(get_u32());
  config.output_dim = static_cast<int>(get_u32());
  const std::uint32_t n_hidden = get_u32();
  for (std::uint32_t i = 0; i < n_hidden; ++i) {
    config.hidden.push_back(static_cast<int>(get_u32()));
  }
  ParamSet params(config);
  if (get_u64() != params.count()) throw fail("parameter count mismatch");
  for (int l = 0; l < config.n_layers(); ++l) {
    if (get_u64() != params.w_offset_[l] || get_u64() != params.b_offset_[l]) {
      throw fail("layer offset mismatch");
    }
  }
  if (std::fread(params.data_.data(), sizeof(double), params.count(), f) != params.count()) {
    throw fail("truncated payload");
  }
  std::fclose(f);
  return params;
}

TapeParams bind_params(Tape& tape, const ParamSet& params, bool trainable) {
  TapeParams bound;
  bound.config = params.config();
  bound.nodes.reserve(params.count());
  for (double v : params.values()) {
    bound.nodes.push_back(tape.leaf(v, trainable));
  }
  for (int l = 0; l < bound.config.n_layers(); ++l) {
    bound.w_offset.push_back(params.weight_offset(l));
    bound.b_offset.push_back(params.bias_offset(l));
  }
  return bound;
}

namespace {

// Shared builder for the plain and derivative-augmented passes; the value
// channel is constructed the same way in both, so the results match bit
// for bit.
std::vector<OutputTriple> run_forward(Tape& tape, const TapeParams& params,
                                      std::span<const double> x, DerivChannels wrt) {
  const MlpConfig& config = params.config;
  if (static_cast<int>(x.size()) != config.input_dim) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  if (wrt.d_dx && config.input_dim < 2) {
    throw std::invalid_argument("forward: d_dx requested on a 1-D input");
  }

  const int n_chan = (wrt.d_dt ? 1 : 0) + (wrt.d_dx ? 1 : 0);
  const int chan_dim[2] = {wrt.d_dt ? 0 : 1, 1};

  std::vector<NodeId> act(config.input_dim);
  for (int j = 0; j < config.input_dim; ++j) {
    act[j] = tape.leaf(x[j]);
  }
  // Derivative rows per channel; the input seed is a one-hot direction,
  // so the first layer's row is just a column of weight leaves.
  std::vector<std::vector<NodeId>> dact(n_chan);

  for (int l = 0; l < config.n_layers(); ++l) {
    const int n_in = config.layer_in(l);
    const int n_out = config.layer_out(l);
    const bool is_hidden = l < config.n_layers() - 1;

    std::vector<NodeId> z(n_out);
    for (int i = 0; i < n_out; ++i) {
      NodeId acc = tape.mul(params.weight(l, i, 0), act[0]);
      for (int j = 1; j < n_in; ++j) {
        acc = tape.add(acc, tape.mul(params.weight(l, i, j), act[j]));
      }
      z[i] = tape.add(acc, params.bias(l, i));
    }

    std::vector<std::vector<NodeId>> dz(n_chan);
    for (int c = 0; c < n_chan; ++c) {
      dz[c].resize(n_out);
      for (int i = 0; i < n_out; ++i) {
        if (l == 0) {
          dz[c][i] = params.weight(l, i, chan_dim[c]);
        } else {
          NodeId acc = tape.mul(params.weight(l, i, 0), dact[c][0]);
          for (int j = 1; j < n_in; ++j) {
            acc = tape.add(acc, tape.mul(params.weight(l, i, j), dact[c][j]));
          }
          dz[c][i] = acc;
        }
      }
    }

    if (is_hidden) {
      std::vector<NodeId> a(n_out);
      for (int i = 0; i < n_out; ++i) {
        a[i] = tape.tanh(z[i]);
      }
      if (n_chan > 0) {
        NodeId one = tape.leaf(1.0);
        std::vector<NodeId> s(n_out);
        for (int i = 0; i < n_out; ++i) {
          s[i] = tape.sub(one, tape.square(a[i]));
        }
        for (int c = 0; c < n_chan; ++c) {
          for (int i = 0; i < n_out; ++i) {
            dz[c][i] = tape.mul(s[i], dz[c][i]);
          }
        }
      }
      act = std::move(a);
    } else {
      act = std::move(z);
    }
    dact = std::move(dz);
  }

  std::vector<OutputTriple> out(config.output_dim);
  for (int i = 0; i < config.output_dim; ++i) {
    out[i].value = act[i];
    int c = 0;
    if (wrt.d_dt) {
      out[i].d_dt = dact[c++][i];
    }
    if (wrt.d_dx) {
      out[i].d_dx = dact[c][i];
    }
  }
  return out;
}

}  // namespace

std::vector<NodeId> forward(Tape& tape, const TapeParams& params,
                            std::span<const double> x) {
  auto triples = run_forward(tape, params, x, DerivChannels{});
  std::vector<NodeId> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    out.push_back(t.value);
  }
  return out;
}

std::vector<NodeId> forward(Tape& tape, const ParamSet& params,
                            std::span<const double> x) {
  return forward(tape, bind_params(tape, params, /*trainable=*/false), x);
}

std::vector<OutputTriple> forward_with_input_derivatives(Tape& tape,
                                                         const TapeParams& params,
                                                         std::span<const double> x,
                                                         DerivChannels wrt) {
  return run_forward(tape, params, x, wrt);
}

std::vector<OutputTriple> forward_with_input_derivatives(Tape& tape,
                                                         const ParamSet& params,
                                                         std::span<const double> x,
                                                         DerivChannels wrt) {
  return run_forward(tape, bind_params(tape, params, /*trainable=*/false), x, wrt);
}

}  // namespace relaxnn
