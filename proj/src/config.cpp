#include "llbcs/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace llbcs {

using nlohmann::json;

namespace {

// Collects field-path messages; parsing continues so the user sees every
// problem at once.
struct ErrorSink {
  std::vector<std::string> messages;

  void add(const std::string& path, const std::string& what) {
    messages.push_back(path + ": " + what);
  }
  void raise_if_any() const {
    if (messages.empty()) return;
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& m : messages) os << "\n  " << m;
    throw ConfigError(os.str());
  }
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, ErrorSink& errors) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) errors.add(path + "." + key, "unknown field");
}

template <typename T>
void read_field(const json& obj, const std::string& path, const char* key,
                T& out, ErrorSink& errors) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    errors.add(path + "." + key, "wrong type");
  }
}

void parse_signal(const json& j, SignalConfig& s, ErrorSink& errors) {
  check_keys(j, "signal",
             {"f_start_hz", "f_end_hz", "duration_s", "sample_rate_hz"},
             errors);
  read_field(j, "signal", "f_start_hz", s.f_start_hz, errors);
  read_field(j, "signal", "f_end_hz", s.f_end_hz, errors);
  read_field(j, "signal", "duration_s", s.duration_s, errors);
  read_field(j, "signal", "sample_rate_hz", s.sample_rate_hz, errors);
}

void parse_grid(const json& j, GridConfig& g, ErrorSink& errors) {
  check_keys(j, "grid", {"grid_rate_hz", "tau_max_s"}, errors);
  read_field(j, "grid", "grid_rate_hz", g.grid_rate_hz, errors);
  read_field(j, "grid", "tau_max_s", g.tau_max_s, errors);
}

void parse_channel(const json& j, ChannelConfig& c, ErrorSink& errors) {
  check_keys(j, "channel", {"k", "pinned_indices"}, errors);
  read_field(j, "channel", "k", c.k, errors);
  read_field(j, "channel", "pinned_indices", c.pinned_indices, errors);
}

void parse_noise(const json& j, NoiseSection& n, ErrorSink& errors) {
  check_keys(j, "noise", {"gmm", "sgnr_db", "sinr_db", "sinr_list_db"},
             errors);
  if (j.contains("gmm")) {
    const json& g = j.at("gmm");
    check_keys(g, "noise.gmm", {"weights", "variances"}, errors);
    read_field(g, "noise.gmm", "weights", n.gmm.weights, errors);
    read_field(g, "noise.gmm", "variances", n.gmm.variances, errors);
  }
  read_field(j, "noise", "sgnr_db", n.sgnr_db, errors);
  read_field(j, "noise", "sinr_db", n.sinr_db, errors);
  read_field(j, "noise", "sinr_list_db", n.sinr_list_db, errors);
}

void parse_solver(const json& j, SolverSection& s, ErrorSink& errors) {
  check_keys(j, "solver", {"ll_bcs", "l_bcs", "bcs", "l1"}, errors);
  if (j.contains("ll_bcs")) {
    const json& o = j.at("ll_bcs");
    check_keys(o, "solver.ll_bcs",
               {"eps_min", "max_iter", "lambda_init", "beta_init",
                "gamma_floor", "tau_init"},
               errors);
    read_field(o, "solver.ll_bcs", "eps_min", s.ll_bcs.eps_min, errors);
    read_field(o, "solver.ll_bcs", "max_iter", s.ll_bcs.max_iter, errors);
    read_field(o, "solver.ll_bcs", "lambda_init", s.ll_bcs.lambda_init,
               errors);
    read_field(o, "solver.ll_bcs", "beta_init", s.ll_bcs.beta_init, errors);
    read_field(o, "solver.ll_bcs", "gamma_floor", s.ll_bcs.gamma_floor,
               errors);
    read_field(o, "solver.ll_bcs", "tau_init", s.ll_bcs.tau_init, errors);
  }
  for (auto [key, cfg] : {std::pair<const char*, IterConfig*>{"l_bcs", &s.l_bcs},
                          {"bcs", &s.bcs}}) {
    if (!j.contains(key)) continue;
    const json& o = j.at(key);
    const std::string path = std::string("solver.") + key;
    check_keys(o, path, {"eps_min", "max_iter"}, errors);
    read_field(o, path, "eps_min", cfg->eps_min, errors);
    read_field(o, path, "max_iter", cfg->max_iter, errors);
  }
  if (j.contains("l1")) {
    const json& o = j.at("l1");
    check_keys(o, "solver.l1",
               {"penalty", "penalty_scale", "eps_min", "max_iter"}, errors);
    read_field(o, "solver.l1", "penalty", s.l1.penalty, errors);
    read_field(o, "solver.l1", "penalty_scale", s.l1.penalty_scale, errors);
    read_field(o, "solver.l1", "eps_min", s.l1.eps_min, errors);
    read_field(o, "solver.l1", "max_iter", s.l1.max_iter, errors);
  }
}

void parse_run(const json& j, RunConfig& r, ErrorSink& errors) {
  check_keys(j, "run",
             {"methods", "trials", "base_seed", "output_dir", "workers",
              "trace"},
             errors);
  if (j.contains("methods")) {
    std::vector<std::string> names;
    read_field(j, "run", "methods", names, errors);
    if (j.at("methods").is_array()) {
      r.methods.clear();
      for (const auto& name : names) {
        try {
          r.methods.push_back(parse_method(name));
        } catch (const std::invalid_argument& e) {
          errors.add("run.methods", e.what());
        }
      }
    }
  }
  read_field(j, "run", "trials", r.trials, errors);
  read_field(j, "run", "base_seed", r.base_seed, errors);
  read_field(j, "run", "output_dir", r.output_dir, errors);
  read_field(j, "run", "workers", r.workers, errors);
  read_field(j, "run", "trace", r.trace, errors);
}

}  // namespace

void ExperimentConfig::validate() const {
  ErrorSink errors;

  if (!(signal.sample_rate_hz > 0.0))
    errors.add("signal.sample_rate_hz", "must be > 0");
  if (!(signal.duration_s > 0.0))
    errors.add("signal.duration_s", "must be > 0");
  const double nyquist = signal.sample_rate_hz / 2.0;
  if (!(signal.f_start_hz > 0.0) || !(signal.f_start_hz < nyquist))
    errors.add("signal.f_start_hz", "must lie in (0, sample_rate/2)");
  if (!(signal.f_end_hz > 0.0) || !(signal.f_end_hz < nyquist))
    errors.add("signal.f_end_hz", "must lie in (0, sample_rate/2)");

  if (!(grid.grid_rate_hz > 0.0))
    errors.add("grid.grid_rate_hz", "must be > 0");
  if (!(grid.tau_max_s > 0.0)) errors.add("grid.tau_max_s", "must be > 0");
  int n_bins = 0;
  if (grid.grid_rate_hz > 0.0 && grid.tau_max_s > 0.0 &&
      signal.sample_rate_hz > 0.0) {
    const double ratio = signal.sample_rate_hz / grid.grid_rate_hz;
    const long shift = std::lround(ratio);
    if (shift < 1 || std::abs(ratio - static_cast<double>(shift)) > 1e-9 * ratio)
      errors.add("grid.grid_rate_hz",
                 "sample_rate_hz / grid_rate_hz must be a positive integer");
    n_bins = static_cast<int>(std::lround(grid.tau_max_s * grid.grid_rate_hz));
    if (n_bins < 1) errors.add("grid.tau_max_s", "grid shorter than one bin");
  }

  if (channel.k < 1)
    errors.add("channel.k", "must be >= 1");
  else if (n_bins > 0 && channel.k > n_bins)
    errors.add("channel.k", "exceeds the number of grid bins");
  if (!channel.pinned_indices.empty()) {
    if (static_cast<int>(channel.pinned_indices.size()) != channel.k)
      errors.add("channel.pinned_indices", "length must equal channel.k");
    for (std::size_t i = 0; i < channel.pinned_indices.size(); ++i) {
      const int idx = channel.pinned_indices[i];
      if (idx < 0 || (n_bins > 0 && idx >= n_bins))
        errors.add("channel.pinned_indices", "index out of grid range");
      else if (i > 0 && idx <= channel.pinned_indices[i - 1])
        errors.add("channel.pinned_indices", "must be strictly increasing");
    }
  }

  try {
    noise.gmm.validate();
  } catch (const std::invalid_argument& e) {
    errors.add("noise.gmm", e.what());
  }
  if (!std::isfinite(noise.sgnr_db)) errors.add("noise.sgnr_db", "not finite");
  if (!std::isfinite(noise.sinr_db)) errors.add("noise.sinr_db", "not finite");
  if (noise.sinr_list_db.empty())
    errors.add("noise.sinr_list_db", "must not be empty");
  for (double v : noise.sinr_list_db)
    if (!std::isfinite(v)) errors.add("noise.sinr_list_db", "not finite");

  const auto& ll = solver.ll_bcs;
  if (!(ll.eps_min > 0.0)) errors.add("solver.ll_bcs.eps_min", "must be > 0");
  if (ll.max_iter < 1) errors.add("solver.ll_bcs.max_iter", "must be >= 1");
  if (!(ll.lambda_init > 0.0))
    errors.add("solver.ll_bcs.lambda_init", "must be > 0");
  if (!(ll.beta_init > 0.0))
    errors.add("solver.ll_bcs.beta_init", "must be > 0");
  if (!(ll.gamma_floor > 0.0))
    errors.add("solver.ll_bcs.gamma_floor", "must be > 0");
  if (!(ll.tau_init > 0.0)) errors.add("solver.ll_bcs.tau_init", "must be > 0");
  for (auto [name, it] : {std::pair<const char*, const IterConfig*>{
                              "l_bcs", &solver.l_bcs},
                          {"bcs", &solver.bcs}}) {
    const std::string path = std::string("solver.") + name;
    if (!(it->eps_min > 0.0)) errors.add(path + ".eps_min", "must be > 0");
    if (it->max_iter < 1) errors.add(path + ".max_iter", "must be >= 1");
  }
  if (solver.l1.penalty < 0.0)
    errors.add("solver.l1.penalty", "must be >= 0 (0 = automatic)");
  if (!(solver.l1.penalty_scale > 0.0))
    errors.add("solver.l1.penalty_scale", "must be > 0");
  if (!(solver.l1.eps_min > 0.0)) errors.add("solver.l1.eps_min", "must be > 0");
  if (solver.l1.max_iter < 1) errors.add("solver.l1.max_iter", "must be >= 1");

  if (run.methods.empty()) errors.add("run.methods", "must not be empty");
  if (run.trials < 1) errors.add("run.trials", "must be >= 1");
  if (run.workers < 0) errors.add("run.workers", "must be >= 0");
  if (run.output_dir.empty()) errors.add("run.output_dir", "must not be empty");

  errors.raise_if_any();
}

DerivedSizes derived_sizes(const ExperimentConfig& cfg) {
  DerivedSizes d;
  d.waveform_len =
      std::lround(cfg.signal.duration_s * cfg.signal.sample_rate_hz) + 1;
  d.shift = static_cast<int>(
      std::lround(cfg.signal.sample_rate_hz / cfg.grid.grid_rate_hz));
  d.n_bins =
      static_cast<int>(std::lround(cfg.grid.tau_max_s * cfg.grid.grid_rate_hz));
  d.m_rows = std::lround((cfg.signal.duration_s + cfg.grid.tau_max_s) *
                         cfg.signal.sample_rate_hz);
  return d;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  ErrorSink errors;
  check_keys(j, "config", {"signal", "grid", "channel", "noise", "solver",
                           "run"},
             errors);
  ExperimentConfig cfg;
  if (j.contains("signal")) parse_signal(j.at("signal"), cfg.signal, errors);
  if (j.contains("grid")) parse_grid(j.at("grid"), cfg.grid, errors);
  if (j.contains("channel")) parse_channel(j.at("channel"), cfg.channel, errors);
  if (j.contains("noise")) parse_noise(j.at("noise"), cfg.noise, errors);
  if (j.contains("solver")) parse_solver(j.at("solver"), cfg.solver, errors);
  if (j.contains("run")) parse_run(j.at("run"), cfg.run, errors);
  errors.raise_if_any();

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["signal"] = {{"f_start_hz", cfg.signal.f_start_hz},
                 {"f_end_hz", cfg.signal.f_end_hz},
                 {"duration_s", cfg.signal.duration_s},
                 {"sample_rate_hz", cfg.signal.sample_rate_hz}};
  j["grid"] = {{"grid_rate_hz", cfg.grid.grid_rate_hz},
               {"tau_max_s", cfg.grid.tau_max_s}};
  j["channel"] = {{"k", cfg.channel.k}};
  if (!cfg.channel.pinned_indices.empty())
    j["channel"]["pinned_indices"] = cfg.channel.pinned_indices;
  j["noise"] = {{"gmm",
                 {{"weights", cfg.noise.gmm.weights},
                  {"variances", cfg.noise.gmm.variances}}},
                {"sgnr_db", cfg.noise.sgnr_db},
                {"sinr_db", cfg.noise.sinr_db},
                {"sinr_list_db", cfg.noise.sinr_list_db}};
  j["solver"] = {
      {"ll_bcs",
       {{"eps_min", cfg.solver.ll_bcs.eps_min},
        {"max_iter", cfg.solver.ll_bcs.max_iter},
        {"lambda_init", cfg.solver.ll_bcs.lambda_init},
        {"beta_init", cfg.solver.ll_bcs.beta_init},
        {"gamma_floor", cfg.solver.ll_bcs.gamma_floor},
        {"tau_init", cfg.solver.ll_bcs.tau_init}}},
      {"l_bcs",
       {{"eps_min", cfg.solver.l_bcs.eps_min},
        {"max_iter", cfg.solver.l_bcs.max_iter}}},
      {"bcs",
       {{"eps_min", cfg.solver.bcs.eps_min},
        {"max_iter", cfg.solver.bcs.max_iter}}},
      {"l1",
       {{"penalty", cfg.solver.l1.penalty},
        {"penalty_scale", cfg.solver.l1.penalty_scale},
        {"eps_min", cfg.solver.l1.eps_min},
        {"max_iter", cfg.solver.l1.max_iter}}}};
  std::vector<std::string> method_names;
  for (Method m : cfg.run.methods) method_names.push_back(method_name(m));
  j["run"] = {{"methods", method_names},   {"trials", cfg.run.trials},
              {"base_seed", cfg.run.base_seed}, {"output_dir", cfg.run.output_dir},
              {"workers", cfg.run.workers}, {"trace", cfg.run.trace}};
  return j.dump(2) + "\n";
}

}  // namespace llbcs
