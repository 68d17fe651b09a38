#include "relaxnn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "relaxnn/kernel.hpp"

namespace relaxnn {

namespace {

const char* kRowNames[3] = {"mass", "momentum", "energy"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

using Section = std::map<std::string, std::string>;
using IniMap = std::map<std::string, Section>;

IniMap parse_ini(const std::string& text) {
  IniMap out;
  std::string section = "";
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config: malformed section header: " + line);
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key = value: " + line);
    }
    out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

const std::string* find_key(const IniMap& ini, const std::string& section,
                            const std::string& key) {
  const auto s = ini.find(section);
  if (s == ini.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

double to_double(const std::string& v, const std::string& what) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw std::invalid_argument("config: bad number for " + what + ": " + v);
  }
  return x;
}

void get_double(const IniMap& ini, const std::string& s, const std::string& k, double& out) {
  if (const std::string* v = find_key(ini, s, k)) out = to_double(*v, s + "." + k);
}

void get_long(const IniMap& ini, const std::string& s, const std::string& k, long& out) {
  if (const std::string* v = find_key(ini, s, k)) out = std::stol(*v);
}

void get_int(const IniMap& ini, const std::string& s, const std::string& k, int& out) {
  if (const std::string* v = find_key(ini, s, k)) out = std::stoi(*v);
}

void get_bool(const IniMap& ini, const std::string& s, const std::string& k, bool& out) {
  if (const std::string* v = find_key(ini, s, k)) {
    if (*v == "true" || *v == "1") {
      out = true;
    } else if (*v == "false" || *v == "0") {
      out = false;
    } else {
      throw std::invalid_argument("config: bad flag for " + s + "." + k + ": " + *v);
    }
  }
}

void get_string(const IniMap& ini, const std::string& s, const std::string& k,
                std::string& out) {
  if (const std::string* v = find_key(ini, s, k)) out = *v;
}

std::vector<double> parse_list(const std::string& v, const std::string& what) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(to_double(trim(item), what));
  }
  return out;
}

}  // namespace

ExperimentConfig default_config(const std::string& problem_id, Mode mode,
                                std::optional<RelaxType> relax) {
  const ProblemSpec problem = problem_by_id(problem_id);
  ExperimentConfig cfg;
  cfg.problem_id = problem_id;
  cfg.mode = mode;
  cfg.relax = relax.value_or(problem.relax);
  cfg.times = problem.figure_times;
  cfg.train.epochs = problem.kind == SystemKind::kBurgers ? 300000 : 600000;

  switch (problem.kind) {
    case SystemKind::kBurgers:
      cfg.u_depth = 4;
      cfg.u_width = 128;
      cfg.v_depth = 4;
      cfg.v_width = 64;
      if (problem_id == "burgers-sine") {
        cfg.weights.residual_rows = {0.5};
        cfg.weights.flux_rows = {2.0};
        cfg.weights.ic = 5.0;
        cfg.weights.bc = 5.0;
      } else {
        cfg.weights.residual_rows = {0.1};
        cfg.weights.flux_rows = {2.0};
        cfg.weights.ic = 10.0;
        cfg.weights.bc = 10.0;
      }
      break;
    case SystemKind::kShallowWater: {
      cfg.u_depth = 5;
      cfg.u_width = 128;
      if (cfg.relax == RelaxType::kType1) {
        cfg.v_depth = 5;
        cfg.v_width = 128;
      } else {
        cfg.v_depth = 5;
        cfg.v_width = 64;
      }
      const double r = problem_id == "swe-dam" ? 0.01 : 0.1;
      cfg.weights.residual_rows = {r, r};
      cfg.weights.flux_rows.assign(n_relaxed(problem.kind, cfg.relax), 1.0);
      cfg.weights.ic = 1.0;
      cfg.weights.bc = 1.0;
      break;
    }
    case SystemKind::kEuler: {
      cfg.u_depth = 6;
      cfg.u_width = 384;
      switch (cfg.relax) {
        case RelaxType::kType1:
          cfg.v_depth = 6;
          cfg.v_width = 384;
          break;
        case RelaxType::kType2:
          cfg.v_depth = 6;
          cfg.v_width = 256;
          break;
        case RelaxType::kType3:
          cfg.v_depth = 6;
          cfg.v_width = 128;
          break;
      }
      if (problem_id == "euler-lax") {
        cfg.weights.residual_rows = {1.0, 0.5, 0.1};
        if (cfg.relax == RelaxType::kType1) {
          cfg.weights.flux_rows = {100.0, 100.0, 10.0};
        } else if (cfg.relax == RelaxType::kType2) {
          cfg.weights.flux_rows = {100.0, 10.0};
        } else {
          cfg.weights.flux_rows = {10.0};
        }
        cfg.weights.ic = 100.0;
        cfg.weights.bc = 100.0;
      } else {
        cfg.weights.residual_rows = {0.1, 0.05, 0.01};
        cfg.weights.flux_rows.assign(n_relaxed(problem.kind, cfg.relax), 5.0);
        cfg.weights.ic = 5.0;
        cfg.weights.bc = 5.0;
      }
      break;
    }
  }
  if (mode == Mode::kPinn) {
    cfg.weights.flux_rows.clear();
  }
  cfg.out_dir = "out/" + problem_id;
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  const IniMap ini = parse_ini(text);

  std::string problem_id = "burgers-riemann";
  get_string(ini, "experiment", "problem", problem_id);
  std::string mode_str = "relaxnn";
  get_string(ini, "experiment", "mode", mode_str);
  Mode mode;
  if (mode_str == "relaxnn") {
    mode = Mode::kRelaxNN;
  } else if (mode_str == "pinn") {
    mode = Mode::kPinn;
  } else {
    throw std::invalid_argument("config: bad mode: " + mode_str);
  }
  std::optional<RelaxType> relax;
  if (const std::string* v = find_key(ini, "experiment", "relax_type")) {
    const int k = std::stoi(*v);
    if (k < 1 || k > 3) {
      throw std::invalid_argument("config: relax_type must be 1, 2 or 3");
    }
    relax = static_cast<RelaxType>(k);
  }

  ExperimentConfig cfg = default_config(problem_id, mode, relax);
  // weight defaults track the relax variant, so row counts are already right

  long seed = static_cast<long>(cfg.train.seed);
  get_long(ini, "experiment", "seed", seed);
  cfg.train.seed = static_cast<std::uint64_t>(seed);
  get_string(ini, "experiment", "out_dir", cfg.out_dir);
  std::string engine = "kernel";
  get_string(ini, "experiment", "engine", engine);
  if (engine == "kernel") {
    cfg.engine = Engine::kKernel;
  } else if (engine == "tape") {
    cfg.engine = Engine::kTape;
  } else {
    throw std::invalid_argument("config: bad engine: " + engine);
  }

  get_int(ini, "u_net", "depth", cfg.u_depth);
  get_int(ini, "u_net", "width", cfg.u_width);
  get_int(ini, "v_net", "depth", cfg.v_depth);
  get_int(ini, "v_net", "width", cfg.v_width);

  const ProblemSpec problem = problem_by_id(problem_id);
  const int n_rows = n_conservation_laws(problem.kind);
  double family = 0.0;
  if (const std::string* v = find_key(ini, "weights", "residual")) {
    family = to_double(*v, "weights.residual");
    cfg.weights.residual_rows.assign(n_rows, family);
  }
  for (int r = 0; r < n_rows; ++r) {
    get_double(ini, "weights", std::string("residual_") + kRowNames[r],
               cfg.weights.residual_rows[r]);
  }
  if (mode == Mode::kRelaxNN) {
    const auto mask = relaxed_rows(problem.kind, cfg.relax);
    if (const std::string* v = find_key(ini, "weights", "flux")) {
      family = to_double(*v, "weights.flux");
      cfg.weights.flux_rows.assign(n_relaxed(problem.kind, cfg.relax), family);
    }
    int j = 0;
    for (int r = 0; r < n_rows; ++r) {
      if (!mask[r]) continue;
      get_double(ini, "weights", std::string("flux_") + kRowNames[r], cfg.weights.flux_rows[j]);
      ++j;
    }
  }
  get_double(ini, "weights", "ic", cfg.weights.ic);
  get_double(ini, "weights", "bc", cfg.weights.bc);

  get_long(ini, "train", "epochs", cfg.train.epochs);
  get_double(ini, "train", "lr", cfg.train.lr0);
  get_double(ini, "train", "decay_rate", cfg.train.decay_rate);
  get_long(ini, "train", "decay_every", cfg.train.decay_every);
  get_double(ini, "train", "beta1", cfg.train.beta1);
  get_double(ini, "train", "beta2", cfg.train.beta2);
  get_double(ini, "train", "eps_adam", cfg.train.eps_adam);
  get_long(ini, "train", "checkpoint_every", cfg.train.checkpoint_every);

  get_int(ini, "sampling", "interior", cfg.counts.interior);
  get_int(ini, "sampling", "ic", cfg.counts.ic);
  get_int(ini, "sampling", "bc", cfg.counts.bc);
  get_bool(ini, "sampling", "resample_each_epoch", cfg.resample_each_epoch);

  get_int(ini, "reference", "cells", cfg.reference_cells);
  get_double(ini, "reference", "cfl", cfg.cfl);
  get_int(ini, "eval", "cells", cfg.eval_cells);
  if (const std::string* v = find_key(ini, "eval", "times")) {
    cfg.times = parse_list(*v, "eval.times");
  }

  std::string uq_kind = "none";
  get_string(ini, "uq", "kind", uq_kind);
  if (uq_kind == "additive-sum" || uq_kind == "interface-shift") {
    StochasticIC ic;
    ic.kind = uq_kind == "additive-sum" ? StochasticIC::Kind::kAdditiveSum
                                        : StochasticIC::Kind::kInterfaceShift;
    ic.s = ic.kind == StochasticIC::Kind::kAdditiveSum ? 100 : 5;
    get_double(ini, "uq", "epsilon", ic.epsilon);
    get_int(ini, "uq", "s", ic.s);
    cfg.stochastic = ic;
  } else if (uq_kind != "none") {
    throw std::invalid_argument("config: bad uq kind: " + uq_kind);
  }
  get_string(ini, "uq", "method", cfg.uq_method);
  if (cfg.uq_method != "mc" && cfg.uq_method != "quad") {
    throw std::invalid_argument("config: bad uq method: " + cfg.uq_method);
  }
  get_int(ini, "uq", "samples", cfg.uq_samples);
  get_int(ini, "uq", "quad_points", cfg.uq_quad_points);
  get_int(ini, "uq", "reference_samples", cfg.uq_reference_samples);

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  const ProblemSpec problem = problem_by_id(cfg.problem_id);
  const int n_rows = n_conservation_laws(problem.kind);
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string out;
  out += "[experiment]\n";
  out += "problem = " + cfg.problem_id + "\n";
  out += std::string("mode = ") + (cfg.mode == Mode::kRelaxNN ? "relaxnn" : "pinn") + "\n";
  out += "relax_type = " + std::to_string(static_cast<int>(cfg.relax)) + "\n";
  out += "seed = " + std::to_string(cfg.train.seed) + "\n";
  out += "out_dir = " + cfg.out_dir + "\n";
  out += std::string("engine = ") + (cfg.engine == Engine::kKernel ? "kernel" : "tape") + "\n";
  out += "\n[u_net]\n";
  out += "depth = " + std::to_string(cfg.u_depth) + "\n";
  out += "width = " + std::to_string(cfg.u_width) + "\n";
  out += "\n[v_net]\n";
  out += "depth = " + std::to_string(cfg.v_depth) + "\n";
  out += "width = " + std::to_string(cfg.v_width) + "\n";
  out += "\n[weights]\n";
  for (int r = 0; r < n_rows; ++r) {
    out += std::string("residual_") + kRowNames[r] + " = " +
           num(cfg.weights.residual_rows[r]) + "\n";
  }
  if (cfg.mode == Mode::kRelaxNN) {
    const auto mask = relaxed_rows(problem.kind, cfg.relax);
    int j = 0;
    for (int r = 0; r < n_rows; ++r) {
      if (!mask[r]) continue;
      out += std::string("flux_") + kRowNames[r] + " = " + num(cfg.weights.flux_rows[j]) + "\n";
      ++j;
    }
  }
  out += "ic = " + num(cfg.weights.ic) + "\n";
  out += "bc = " + num(cfg.weights.bc) + "\n";
  out += "\n[train]\n";
  out += "epochs = " + std::to_string(cfg.train.epochs) + "\n";
  out += "lr = " + num(cfg.train.lr0) + "\n";
  out += "decay_rate = " + num(cfg.train.decay_rate) + "\n";
  out += "decay_every = " + std::to_string(cfg.train.decay_every) + "\n";
  out += "beta1 = " + num(cfg.train.beta1) + "\n";
  out += "beta2 = " + num(cfg.train.beta2) + "\n";
  out += "eps_adam = " + num(cfg.train.eps_adam) + "\n";
  out += "checkpoint_every = " + std::to_string(cfg.train.checkpoint_every) + "\n";
  out += "\n[sampling]\n";
  out += "interior = " + std::to_string(cfg.counts.interior) + "\n";
  out += "ic = " + std::to_string(cfg.counts.ic) + "\n";
  out += "bc = " + std::to_string(cfg.counts.bc) + "\n";
  out += std::string("resample_each_epoch = ") + (cfg.resample_each_epoch ? "true" : "false") +
         "\n";
  out += "\n[reference]\n";
  out += "cells = " + std::to_string(cfg.reference_cells) + "\n";
  out += "cfl = " + num(cfg.cfl) + "\n";
  out += "\n[eval]\n";
  out += "cells = " + std::to_string(cfg.eval_cells) + "\n";
  out += "times = ";
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    out += (i ? "," : "") + num(cfg.times[i]);
  }
  out += "\n";
  out += "\n[uq]\n";
  if (cfg.stochastic) {
    out += std::string("kind = ") +
           (cfg.stochastic->kind == StochasticIC::Kind::kAdditiveSum ? "additive-sum"
                                                                     : "interface-shift") +
           "\n";
    out += "epsilon = " + num(cfg.stochastic->epsilon) + "\n";
    out += "s = " + std::to_string(cfg.stochastic->s) + "\n";
  } else {
    out += "kind = none\n";
  }
  out += "method = " + cfg.uq_method + "\n";
  out += "samples = " + std::to_string(cfg.uq_samples) + "\n";
  out += "quad_points = " + std::to_string(cfg.uq_quad_points) + "\n";
  out += "reference_samples = " + std::to_string(cfg.uq_reference_samples) + "\n";
  return out;
}

ProblemSpec config_problem(const ExperimentConfig& cfg) {
  ProblemSpec problem = problem_by_id(cfg.problem_id);
  problem.relax = cfg.relax;
  return problem;
}

ExperimentSetup make_setup(const ExperimentConfig& cfg) {
  ExperimentSetup setup;
  setup.problem = config_problem(cfg);
  setup.mode = cfg.mode;
  setup.weights = cfg.weights;
  setup.stochastic = cfg.stochastic;
  return setup;
}

MlpConfig u_net_config(const ExperimentConfig& cfg) {
  const ProblemSpec problem = problem_by_id(cfg.problem_id);
  MlpConfig net;
  net.input_dim = 2 + (cfg.stochastic ? cfg.stochastic->s : 0);
  net.hidden.assign(cfg.u_depth, cfg.u_width);
  net.output_dim = n_components(problem.kind);
  return net;
}

MlpConfig v_net_config(const ExperimentConfig& cfg) {
  const ProblemSpec problem = problem_by_id(cfg.problem_id);
  MlpConfig net;
  net.input_dim = 2 + (cfg.stochastic ? cfg.stochastic->s : 0);
  net.hidden.assign(cfg.v_depth, cfg.v_width);
  net.output_dim = n_relaxed(problem.kind, cfg.relax);
  return net;
}

TrainOptions make_train_options(const ExperimentConfig& cfg) {
  TrainOptions options;
  options.u_config = u_net_config(cfg);
  if (cfg.mode == Mode::kRelaxNN) {
    options.v_config = v_net_config(cfg);
  }
  options.counts = cfg.counts;
  options.config = cfg.train;
  options.engine = cfg.engine;
  options.resample_each_epoch = cfg.resample_each_epoch;
  return options;
}

double relative_l2(std::span<const double> pred, std::span<const double> ref) {
  if (pred.size() != ref.size()) {
    throw std::invalid_argument("relative_l2: field sizes differ");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  if (den == 0.0) {
    throw std::domain_error("relative_l2: zero-norm reference");
  }
  return std::sqrt(num) / std::sqrt(den);
}

ReferenceField read_snapshots_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("missing reference: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_snapshots_csv: empty file " + path);
  }
  int n_cols = 1;
  for (char c : line) {
    n_cols += c == ',' ? 1 : 0;
  }
  if (n_cols < 4 || (n_cols - 2) % 2 != 0) {
    throw std::runtime_error("read_snapshots_csv: unexpected column count in " + path);
  }
  const int m = (n_cols - 2) / 2;

  ReferenceField field;
  field.n_comp = m;
  std::vector<double> row(n_cols);
  bool first_block = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const char* p = line.c_str();
    for (int c = 0; c < n_cols; ++c) {
      char* end = nullptr;
      row[c] = std::strtod(p, &end);
      if (end == p) {
        throw std::runtime_error("read_snapshots_csv: bad row in " + path);
      }
      p = *end == ',' ? end + 1 : end;
    }
    if (field.times.empty() || row[0] != field.times.back()) {
      field.times.push_back(row[0]);
      first_block = field.times.size() == 1;
    }
    if (first_block) {
      field.x.push_back(row[1]);
    }
    for (int k = 0; k < m; ++k) {
      field.prim.push_back(row[2 + m + k]);
    }
  }
  if (field.prim.size() != field.times.size() * field.x.size() * static_cast<std::size_t>(m)) {
    throw std::runtime_error("read_snapshots_csv: snapshots are not rectangular in " + path);
  }
  return field;
}

ReferenceField restrict_reference(const ReferenceField& fine, int n_coarse) {
  const int n_fine = static_cast<int>(fine.x.size());
  if (n_fine == n_coarse) {
    return fine;
  }
  if (n_coarse <= 0 || n_fine % n_coarse != 0) {
    throw std::invalid_argument("restrict_reference: cell counts are not nested");
  }
  const int ratio = n_fine / n_coarse;
  ReferenceField out;
  out.times = fine.times;
  out.n_comp = fine.n_comp;
  out.x.resize(n_coarse);
  for (int i = 0; i < n_coarse; ++i) {
    double acc = 0.0;
    for (int j = 0; j < ratio; ++j) {
      acc += fine.x[i * ratio + j];
    }
    out.x[i] = acc / ratio;
  }
  out.prim.resize(fine.times.size() * static_cast<std::size_t>(n_coarse) * fine.n_comp);
  for (std::size_t t = 0; t < fine.times.size(); ++t) {
    for (int i = 0; i < n_coarse; ++i) {
      for (int k = 0; k < fine.n_comp; ++k) {
        double acc = 0.0;
        for (int j = 0; j < ratio; ++j) {
          acc += fine.prim[(t * n_fine + static_cast<std::size_t>(i) * ratio + j) * fine.n_comp + k];
        }
        out.prim[(t * n_coarse + i) * static_cast<std::size_t>(fine.n_comp) + k] = acc / ratio;
      }
    }
  }
  return out;
}

ErrorReport evaluate(const ParamSet& u_params, const ProblemSpec& problem,
                     const ReferenceField& reference) {
  if (u_params.config().input_dim != 2) {
    throw std::invalid_argument("evaluate: expected a deterministic (t,x) network");
  }
  const int n_comp = n_components(problem.kind);
  if (reference.n_comp != n_comp || u_params.config().output_dim != n_comp) {
    throw std::invalid_argument("evaluate: component count mismatch");
  }

  ErrorReport report;
  report.times = reference.times;
  report.x = reference.x;
  report.n_comp = n_comp;
  report.reference = reference.prim;
  report.pred.resize(reference.prim.size());
  report.abs_error.resize(reference.prim.size());

  kernel::NetWorkspace ws(u_params.config());
  std::size_t pos = 0;
  for (double t : reference.times) {
    for (double x : reference.x) {
      const double input[2] = {t, x};
      kernel::forward(u_params, input, ws);
      const auto values = ws.values();
      for (int k = 0; k < n_comp; ++k, ++pos) {
        report.pred[pos] = values[k];
        report.abs_error[pos] = std::abs(values[k] - reference.prim[pos]);
      }
    }
  }

  report.relative_l2_all = relative_l2(report.pred, report.reference);
  report.relative_l2_component.resize(n_comp);
  std::vector<double> pk, rk;
  for (int k = 0; k < n_comp; ++k) {
    pk.clear();
    rk.clear();
    for (std::size_t i = k; i < report.pred.size(); i += n_comp) {
      pk.push_back(report.pred[i]);
      rk.push_back(report.reference[i]);
    }
    report.relative_l2_component[k] = relative_l2(pk, rk);
  }
  return report;
}

void write_error_report(const ErrorReport& report, const std::string& out_dir) {
  {
    const std::string path = out_dir + "/error_report.csv";
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "relative_l2");
    for (int k = 0; k < report.n_comp; ++k) {
      std::fprintf(f, ",relative_l2_c%d", k);
    }
    std::fprintf(f, "\n%.17g", report.relative_l2_all);
    for (int k = 0; k < report.n_comp; ++k) {
      std::fprintf(f, ",%.17g", report.relative_l2_component[k]);
    }
    std::fprintf(f, "\n");
    std::fclose(f);
  }
  {
    const std::string path = out_dir + "/error_field.csv";
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "t,x");
    for (int k = 0; k < report.n_comp; ++k) {
      std::fprintf(f, ",abs_error_c%d", k);
    }
    std::fprintf(f, "\n");
    std::size_t pos = 0;
    for (double t : report.times) {
      for (double x : report.x) {
        std::fprintf(f, "%.17g,%.17g", t, x);
        for (int k = 0; k < report.n_comp; ++k, ++pos) {
          std::fprintf(f, ",%.17g", report.abs_error[pos]);
        }
        std::fprintf(f, "\n");
      }
    }
    std::fclose(f);
  }
}

void write_slices(const ErrorReport& report, const std::string& out_dir) {
  const std::size_t n_x = report.x.size();
  for (std::size_t ti = 0; ti < report.times.size(); ++ti) {
    char name[64];
    std::snprintf(name, sizeof(name), "/slice_t%g.csv", report.times[ti]);
    const std::string path = out_dir + name;
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "x");
    for (int k = 0; k < report.n_comp; ++k) {
      std::fprintf(f, ",pred_c%d", k);
    }
    for (int k = 0; k < report.n_comp; ++k) {
      std::fprintf(f, ",ref_c%d", k);
    }
    std::fprintf(f, "\n");
    for (std::size_t i = 0; i < n_x; ++i) {
      std::fprintf(f, "%.17g", report.x[i]);
      const std::size_t base = (ti * n_x + i) * report.n_comp;
      for (int k = 0; k < report.n_comp; ++k) {
        std::fprintf(f, ",%.17g", report.pred[base + k]);
      }
      for (int k = 0; k < report.n_comp; ++k) {
        std::fprintf(f, ",%.17g", report.reference[base + k]);
      }
      std::fprintf(f, "\n");
    }
    std::fclose(f);
  }
}

}  // namespace relaxnn
