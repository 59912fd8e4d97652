#include "regret/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "regret/objectives.hpp"

namespace regret {

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::rosenbrock2d: return "rosenbrock2d";
    case Experiment::quadratic_hd: return "quadratic_hd";
    case Experiment::quadratic_closed_form_study: return "quadratic_closed_form_study";
    case Experiment::time_consistency: return "time_consistency";
    case Experiment::rate_bounds: return "rate_bounds";
  }
  return "unknown";
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

MetaConfig ExperimentConfig::meta_config() const {
  MetaConfig m;
  m.inner_steps = inner_steps;
  m.inner_lr = inner_lr;
  m.gamma = gamma;
  m.theta0 = theta0;
  m.T = T;
  m.theta_grad_mode = theta_grad_mode;
  return m;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& field, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) {
    throw ConfigError(field, "expected a number, got '" + s + "'");
  }
  return v;
}

long long parse_integer(const std::string& field, const std::string& s) {
  long long v = 0;
  const char* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) {
    throw ConfigError(field, "expected an integer, got '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& field, const std::string& s) {
  const long long v = parse_integer(field, s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "integer out of range");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& field, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + s + "'");
}

Vector parse_vector(const std::string& field, const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty()) throw ConfigError(field, "empty vector");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_double(field, parts[i]);
  }
  return v;
}

Matrix parse_matrix(const std::string& field, const std::string& s) {
  const auto rows = split(s, ';');
  if (rows.empty()) throw ConfigError(field, "empty matrix");
  std::vector<Vector> parsed;
  for (const auto& r : rows) parsed.push_back(parse_vector(field, r));
  const auto cols = parsed.front().size();
  Matrix M(static_cast<Eigen::Index>(parsed.size()), cols);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != cols) throw ConfigError(field, "rows have different lengths");
    M.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return M;
}

Experiment parse_experiment(const std::string& s) {
  for (auto e : {Experiment::rosenbrock2d, Experiment::quadratic_hd,
                 Experiment::quadratic_closed_form_study, Experiment::time_consistency,
                 Experiment::rate_bounds}) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError("experiment", "unknown experiment '" + s +
                                      "' (expected rosenbrock2d, quadratic_hd, "
                                      "quadratic_closed_form_study, time_consistency or "
                                      "rate_bounds)");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "experiment", "seed", "gamma", "T", "dim", "theta0", "alpha", "beta", "inner_steps",
      "inner_lr", "theta_grad_mode", "output_dir", "x0", "A", "C", "b", "horizons", "k",
      "nesterov_momentum", "write_trajectories"};
  return keys;
}

bool is_quadratic_study(Experiment e) {
  return e == Experiment::quadratic_closed_form_study || e == Experiment::time_consistency ||
         e == Experiment::rate_bounds;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw ConfigError(key, "unknown key");
    }
    if (!kv.emplace(key, value).second) throw ConfigError(key, "given more than once");
  }

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  ExperimentConfig cfg;
  const auto experiment = get("experiment");
  if (!experiment) throw ConfigError("experiment", "required field missing");
  cfg.experiment = parse_experiment(*experiment);
  const auto output_dir = get("output_dir");
  if (!output_dir || output_dir->empty()) throw ConfigError("output_dir", "required field missing");
  cfg.output_dir = *output_dir;

  switch (cfg.experiment) {
    case Experiment::rosenbrock2d:
      cfg.gamma = 1e-2;
      cfg.T = 2000;
      cfg.dim = 2;
      break;
    case Experiment::quadratic_hd:
      cfg.gamma = 5e-5;
      cfg.T = 500;
      cfg.dim = 4096;
      // The frozen loss scales with ‖∇f‖², about 1e11 at x0 = 0 for this
      // generator, so the inner step has to shrink by the same factor.
      cfg.inner_lr = 1e-13;
      cfg.write_trajectories = false;
      break;
    case Experiment::quadratic_closed_form_study:
      cfg.gamma = 1.0;
      cfg.T = 100;
      break;
    case Experiment::time_consistency:
      cfg.gamma = 1.0;
      cfg.T = 80;
      break;
    case Experiment::rate_bounds:
      cfg.gamma = 1.0;
      cfg.T = 200;
      break;
  }

  if (auto v = get("seed")) {
    const long long s = parse_integer("seed", *v);
    if (s < 0) throw ConfigError("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("gamma")) cfg.gamma = parse_double("gamma", *v);
  if (auto v = get("T")) cfg.T = parse_int("T", *v);
  if (auto v = get("inner_steps")) cfg.inner_steps = parse_int("inner_steps", *v);
  if (auto v = get("inner_lr")) cfg.inner_lr = parse_double("inner_lr", *v);
  if (auto v = get("theta0")) {
    if (get("alpha") || get("beta")) throw ConfigError("theta0", "conflicts with alpha/beta");
    const Vector t = parse_vector("theta0", *v);
    if (t.size() != 2) throw ConfigError("theta0", "expected two values alpha,beta");
    cfg.theta0 = {t[0], t[1]};
  }
  if (auto v = get("alpha")) cfg.theta0.alpha = parse_double("alpha", *v);
  if (auto v = get("beta")) cfg.theta0.beta = parse_double("beta", *v);
  if (auto v = get("theta_grad_mode")) {
    if (*v == "analytic") cfg.theta_grad_mode = ThetaGradMode::analytic;
    else if (*v == "finite_difference") cfg.theta_grad_mode = ThetaGradMode::finite_difference;
    else throw ConfigError("theta_grad_mode", "expected analytic or finite_difference");
  }
  if (auto v = get("horizons")) {
    cfg.horizons.clear();
    for (const auto& h : split(*v, ',')) cfg.horizons.push_back(parse_int("horizons", h));
  }
  if (auto v = get("k")) cfg.k = parse_int("k", *v);
  if (auto v = get("nesterov_momentum")) {
    cfg.nesterov_momentum = parse_double("nesterov_momentum", *v);
  }
  if (auto v = get("write_trajectories")) {
    cfg.write_trajectories = parse_bool("write_trajectories", *v);
  }

  if (is_quadratic_study(cfg.experiment)) {
    if (auto v = get("A")) cfg.A = parse_matrix("A", *v);
    if (auto v = get("dim")) {
      cfg.dim = parse_int("dim", *v);
      if (cfg.dim < 1) throw ConfigError("dim", "must be >= 1");
    } else if (cfg.A.size() > 0) {
      cfg.dim = static_cast<int>(cfg.A.rows());
    }
    if (cfg.A.size() == 0) cfg.A = Matrix::Identity(cfg.dim, cfg.dim);
    if (auto v = get("C")) {
      cfg.C = parse_matrix("C", *v);
    } else {
      if (!(cfg.gamma > 0.0)) throw ConfigError("gamma", "must be > 0");
      cfg.C = Matrix::Identity(cfg.dim, cfg.dim) / cfg.gamma;
    }
    cfg.b = get("b") ? parse_vector("b", *get("b")) : Vector::Zero(cfg.dim);
    cfg.x0 = get("x0") ? parse_vector("x0", *get("x0")) : Vector::Ones(cfg.dim);
  } else {
    for (const char* key : {"A", "C", "b"}) {
      if (get(key)) {
        throw ConfigError(key, "only used by the quadratic study experiments");
      }
    }
    if (auto v = get("dim")) cfg.dim = parse_int("dim", *v);
    if (cfg.experiment == Experiment::rosenbrock2d && cfg.dim != 2) {
      throw ConfigError("dim", "rosenbrock2d is two-dimensional");
    }
    if (cfg.dim < 1) throw ConfigError("dim", "must be >= 1");
    cfg.x0 = get("x0") ? parse_vector("x0", *get("x0")) : Vector::Zero(cfg.dim);
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw ConfigError("gamma", "must be > 0");
  if (cfg.T < 1) throw ConfigError("T", "must be >= 1");
  if (cfg.dim < 1) throw ConfigError("dim", "must be >= 1");
  if (!(cfg.theta0.alpha > 0.0)) throw ConfigError("alpha", "must be > 0");
  if (!(cfg.theta0.beta > 0.0)) throw ConfigError("beta", "must be > 0");
  if (cfg.inner_steps < 1) throw ConfigError("inner_steps", "must be >= 1");
  if (!(cfg.inner_lr > 0.0)) throw ConfigError("inner_lr", "must be > 0");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir", "required field missing");
  if (cfg.x0.size() != cfg.dim) {
    throw ConfigError("x0", "expected " + std::to_string(cfg.dim) + " entries");
  }
  if (!cfg.x0.allFinite()) throw ConfigError("x0", "entries must be finite");
  if (cfg.nesterov_momentum &&
      !(*cfg.nesterov_momentum >= 0.0 && *cfg.nesterov_momentum < 1.0)) {
    throw ConfigError("nesterov_momentum", "must lie in [0, 1)");
  }
  if (cfg.horizons.empty()) throw ConfigError("horizons", "must list at least one horizon");
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
    if (cfg.horizons[i] < 1) throw ConfigError("horizons", "entries must be >= 1");
    if (i > 0 && cfg.horizons[i] <= cfg.horizons[i - 1]) {
      throw ConfigError("horizons", "must be strictly increasing");
    }
  }
  if (cfg.k < 0 || cfg.k > cfg.horizons.front()) {
    throw ConfigError("k", "must lie in [0, smallest horizon]");
  }
  if (is_quadratic_study(cfg.experiment)) {
    auto check_square = [&](const Matrix& M, const char* name) {
      if (M.rows() != cfg.dim || M.cols() != cfg.dim) {
        throw ConfigError(name, "expected a " + std::to_string(cfg.dim) + "x" +
                                    std::to_string(cfg.dim) + " matrix");
      }
      try {
        require_spd(M, name, 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()));
      } catch (const std::invalid_argument&) {
        throw ConfigError(name, "must be symmetric positive definite");
      }
    };
    check_square(cfg.A, "A");
    check_square(cfg.C, "C");
    if (cfg.b.size() != cfg.dim) {
      throw ConfigError("b", "expected " + std::to_string(cfg.dim) + " entries");
    }
  }
}

std::string config_keys_help() {
  return R"(Config file: one `key = value` per line, '#' starts a comment.
Vectors are comma separated (1,0.5); matrix rows are separated by ';' (2,1;1,2).

  experiment          required: rosenbrock2d | quadratic_hd | quadratic_closed_form_study
                      | time_consistency | rate_bounds
  output_dir          required: directory for CSV and SVG output (created if missing)
  seed                RNG seed for quadratic_hd (default 0)
  gamma               step size; φ(z) = ‖z‖²/(2γ) (defaults: rosenbrock2d 1e-2,
                      quadratic_hd 5e-5, others 1)
  T                   horizon (defaults: rosenbrock2d 2000, quadratic_hd 500,
                      quadratic_closed_form_study 100, rate_bounds 200)
  dim                 dimension (quadratic_hd default 4096; quadratic studies default
                      to the size of A, else 1)
  theta0              initial alpha,beta of the meta-optimizer (default 1,0.5)
  alpha, beta         alternative to theta0
  inner_steps         inner gradient steps on the frozen loss per iteration (default 10)
  inner_lr            inner learning rate (default 1e-4, quadratic_hd 1e-13)
  theta_grad_mode     analytic | finite_difference (default analytic)
  x0                  starting point (default 0 for rosenbrock2d and quadratic_hd,
                      all ones for the quadratic studies)
  A, C, b             quadratic studies only: f = ½(x−b)ᵀA(x−b), φ(z) = ½zᵀCz
                      (defaults A = I, C = I/gamma, b = 0)
  horizons            time_consistency horizons, strictly increasing (default 10,20,40,80)
  k                   time_consistency prefix length compared (default 5)
  nesterov_momentum   constant momentum for the Nesterov baseline; unset uses t/(t+3)
  write_trajectories  write per-algorithm trajectory CSVs (default true, false for
                      quadratic_hd)
)";
}

}  // namespace regret
