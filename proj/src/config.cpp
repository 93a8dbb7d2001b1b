#include "fio/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace fio {

using nlohmann::json;

namespace {

// Tracks the dotted path for error messages and rejects keys nobody read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError("unknown key " + join(key));
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(j_.at(key), join(key));
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    out = convert<T>(j_.at(key), join(key));
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), join(key));
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "config" : path_; }

 private:
  template <class T>
  static T convert(const json& v, const std::string& name) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(name + " must be a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(name + " must be an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
          throw ConfigError(name + " must be non-negative");
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(name + " must be a number");
      return v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(name + " must be a string");
      return v.get<std::string>();
    } else {
      if (!v.is_array()) throw ConfigError(name + " must be an array");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(convert<typename T::value_type>(v[i], name + "[" + std::to_string(i) + "]"));
      return out;
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_bump(Section s, BumpConfig& b) {
  s.get("plateau", b.plateau);
  s.get("support", b.support);
  if (!(b.plateau > 0.0 && b.plateau < b.support))
    throw ConfigError(s.where() + ": need 0 < plateau < support");
}

void read_lacunary(Section s, LacunaryConfig& l) {
  s.get("r", l.r);
  s.get("J", l.J);
  if (!(l.r > 0.0)) throw ConfigError(s.join("r") + " must be positive");
  if (l.J < 2) throw ConfigError(s.join("J") + " must be at least 2");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

LabConfig parse_config(const json& j) {
  LabConfig c;
  Section root(j, "");
  int version = kConfigSchemaVersion;
  root.get("schema_version", version);
  require(version == kConfigSchemaVersion, "unsupported schema_version " + std::to_string(version));
  root.get("experiment", c.experiment);
  if (root.has("grid")) {
    Section g = root.sub("grid");
    g.get("n", c.n);
    if (g.has("N")) {
      int N = 0;
      g.get("N", N);
      c.grids = {N};
    }
    g.get("refine", c.grids);
  }
  require(c.n == 2 || c.n == 3, "grid.n must be 2 or 3");
  require(!c.grids.empty(), "grid.refine must not be empty");
  for (int N : c.grids) require(N >= 8 && (N & (N - 1)) == 0, "grid sizes must be powers of two >= 8");
  if (root.has("bump")) read_bump(root.sub("bump"), c.bump);
  if (root.has("smoothing_bump")) read_bump(root.sub("smoothing_bump"), c.smoothing_bump);
  if (root.has("quadrature")) {
    Section q = root.sub("quadrature");
    q.get("sphere_nodes", c.sphere_nodes);
    q.get("sigma_nodes_per_octave", c.sigma_nodes_per_octave);
  }
  require(c.sphere_nodes >= 4, "quadrature.sphere_nodes must be at least 4");
  require(c.sigma_nodes_per_octave >= 4, "quadrature.sigma_nodes_per_octave must be at least 4");
  root.get("seed", c.seed);
  // Default band limit: 16, or N/4 on the coarsest grid if that is smaller.
  c.ensemble.kmax = std::min(c.ensemble.kmax, *std::min_element(c.grids.begin(), c.grids.end()) / 4);
  if (root.has("ensemble")) {
    Section e = root.sub("ensemble");
    e.get("count", c.ensemble.count);
    e.get("kmax", c.ensemble.kmax);
    e.get("decay", c.ensemble.decay);
  }
  require(c.ensemble.count >= 1, "ensemble.count must be positive");
  require(c.ensemble.kmax >= 1, "ensemble.kmax must be positive");
  for (int N : c.grids) require(c.ensemble.kmax <= N / 4, "ensemble.kmax must not exceed N/4");

  if (root.has("sandwich")) {
    Section s = root.sub("sandwich");
    auto& d = c.sandwich;
    s.get("rho", d.rho);
    s.get("max_shell", d.max_shell);
    s.get("samples", d.samples);
    s.get("pinned_upper", d.pinned_upper);
    s.get("upper_tolerance", d.upper_tolerance);
    require(d.samples >= 1, "sandwich.samples must be positive");
    require(d.max_shell >= 0, "sandwich.max_shell must be non-negative");
  }
  if (root.has("three_lines")) {
    Section s = root.sub("three_lines");
    auto& d = c.three_lines;
    s.get("p", d.p);
    s.get("r", d.r);
    s.get("dprime", d.dprime);
    s.get("eps", d.eps);
    s.get("symbol", d.symbol);
    s.get("symbol_delta", d.symbol_delta);
    s.get("constant", d.constant);
    if (s.has("lacunary")) read_lacunary(s.sub("lacunary"), d.lacunary);
    s.get("t_samples", d.t_samples);
    s.get("restarts", d.restarts);
    s.get("iterations", d.iterations);
    s.get("tolerance", d.tolerance);
    require(d.symbol == "flat-of-b" || d.symbol == "constant" || d.symbol == "degenerate",
            "three_lines.symbol must be flat-of-b, constant or degenerate");
    require(d.restarts >= 1 && d.iterations >= 1, "three_lines.restarts and iterations must be positive");
    require(!d.t_samples.empty(), "three_lines.t_samples must not be empty");
  }
  if (root.has("bound_sweep")) {
    Section s = root.sub("bound_sweep");
    auto& d = c.bound_sweep;
    s.get("p", d.p);
    s.get("r", d.r);
    s.get("eps", d.eps);
    s.get("symbols", d.symbols);
    if (s.has("lacunary")) read_lacunary(s.sub("lacunary"), d.lacunary);
    s.get("growth_limit", d.growth_limit);
    for (const auto& k : d.symbols)
      require(k == "flat-of-b" || k == "identity" || k == "multiplier",
              "bound_sweep.symbols entries must be flat-of-b, identity or multiplier");
  }
  if (root.has("pipeline")) {
    Section s = root.sub("pipeline");
    auto& d = c.pipeline;
    s.get("p", d.p);
    s.get("r", d.r);
    s.get("eps", d.eps);
    s.get("symbol", d.symbol);
    if (s.has("lacunary")) read_lacunary(s.sub("lacunary"), d.lacunary);
    require(d.symbol == "multiplication" || d.symbol == "multiplier",
            "pipeline.symbol must be multiplication or multiplier");
  }
  if (root.has("embedding")) {
    Section s = root.sub("embedding");
    s.get("p", c.embedding.p);
    s.get("stability", c.embedding.stability);
  }
  return c;
}

LabConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

namespace {

json bump_json(const BumpConfig& b) { return {{"plateau", b.plateau}, {"support", b.support}}; }
json lac_json(const LacunaryConfig& l) { return {{"r", l.r}, {"J", l.J}}; }
json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const LabConfig& c) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["experiment"] = c.experiment;
  j["grid"] = {{"n", c.n}, {"refine", c.grids}};
  j["bump"] = bump_json(c.bump);
  j["smoothing_bump"] = bump_json(c.smoothing_bump);
  j["quadrature"] = {{"sphere_nodes", c.sphere_nodes}, {"sigma_nodes_per_octave", c.sigma_nodes_per_octave}};
  j["seed"] = c.seed;
  j["ensemble"] = {{"count", c.ensemble.count}, {"kmax", c.ensemble.kmax}, {"decay", c.ensemble.decay}};
  const auto& s = c.sandwich;
  j["sandwich"] = {{"rho", s.rho},
                   {"max_shell", s.max_shell},
                   {"samples", s.samples},
                   {"pinned_upper", opt(s.pinned_upper)},
                   {"upper_tolerance", s.upper_tolerance}};
  const auto& t = c.three_lines;
  j["three_lines"] = {{"p", t.p},
                      {"r", t.r},
                      {"dprime", t.dprime},
                      {"eps", opt(t.eps)},
                      {"symbol", t.symbol},
                      {"symbol_delta", t.symbol_delta},
                      {"constant", t.constant},
                      {"lacunary", lac_json(t.lacunary)},
                      {"t_samples", t.t_samples},
                      {"restarts", t.restarts},
                      {"iterations", t.iterations},
                      {"tolerance", t.tolerance}};
  const auto& b = c.bound_sweep;
  j["bound_sweep"] = {{"p", b.p},
                      {"r", b.r},
                      {"eps", opt(b.eps)},
                      {"symbols", b.symbols},
                      {"lacunary", lac_json(b.lacunary)},
                      {"growth_limit", b.growth_limit}};
  const auto& p = c.pipeline;
  j["pipeline"] = {{"p", p.p}, {"r", p.r}, {"eps", opt(p.eps)}, {"symbol", p.symbol}, {"lacunary", lac_json(p.lacunary)}};
  j["embedding"] = {{"p", c.embedding.p}, {"stability", c.embedding.stability}};
  return j;
}

}  // namespace fio
