#pragma once

// Run configuration: JSON ingestion with defaults for every field.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qrt/error.hpp"
#include "qrt/evolve.hpp"
#include "qrt/profiles.hpp"
#include "qrt/slabgrid.hpp"
#include "qrt/spectra.hpp"

namespace qrt {

struct GridConfig {
  std::size_t n = 128;
  Scheme scheme = Scheme::chebyshev_lobatto;
};

struct ValidateConfig {
  std::size_t samples = 201;  // rows of profile.csv
  int derivatives = 4;        // derivative columns in profile.csv
};

struct ThresholdConfig {
  ThresholdMode mode = ThresholdMode::strict;
};

struct DispersionConfig {
  double kappa_min = 0.05;
  double kappa_max = 20.0;
  std::size_t kappa_count = 64;
  std::size_t modes = 4;
};

struct SimulateConfig {
  double kappa = 1.0;
  double T = 1.0;
  std::optional<double> dt;  // default 1e-3 h^2 / mu
  std::size_t sample_every = 1;
  Seed seed{SeedKind::random};
};

struct VerifyConfig {
  double kappa = 1.7;
  std::size_t random_fields = 5;
  std::uint64_t rng_seed = 7;
  std::size_t plane_n1 = 128;
  std::size_t plane_n3 = 129;
  double amplitude_fraction = 0.05;
  double identity_tol = 1e-10;
  double decomposition_tol = 1e-8;
  double witness_tol = 1e-6;
  double quotient_tol = 1e-10;
  double scale_tol = 1e-10;
  double neutral_band = 1e-6;
};

struct ExponentsConfig {
  std::vector<double> thetas{0.01, 0.05, 0.06};
  bool exact = false;
};

struct RunConfig {
  ProfileSpec profile;
  PhysicalParams params;
  // When set, eps = eps_over_eps_c * eps_c of the configured profile and grid.
  std::optional<double> eps_over_eps_c;
  GridConfig grid;
  ValidateConfig validate;
  ThresholdConfig threshold;
  DispersionConfig dispersion;
  SimulateConfig simulate;
  VerifyConfig verify;
  ExponentsConfig exponents;

  double default_dt() const { return 1e-3 * profile.h * profile.h / params.mu; }
};

namespace detail {

using cjson = nlohmann::ordered_json;

// Copies known keys out of obj into the targets and rejects unknown ones.
class Reader {
 public:
  Reader(const cjson& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  template <typename T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return;
    T v{};
    get(key, v);
    out = v;
  }

  const cjson* child(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + where_ + "." + it.key());
  }

 private:
  const cjson& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

inline std::string threshold_mode_name(ThresholdMode m) { return m == ThresholdMode::strict ? "strict" : "permissive"; }

inline ThresholdMode threshold_mode_from_string(const std::string& s) {
  if (s == "strict") return ThresholdMode::strict;
  if (s == "permissive") return ThresholdMode::permissive;
  throw ConfigError("unknown threshold mode '" + s + "'");
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::ordered_json& j) {
  using detail::Reader;
  RunConfig c;
  Reader root(j, "config");
  if (const auto* p = root.child("profile")) {
    Reader r(*p, "profile");
    std::string kind(to_string(c.profile.kind));
    r.get("kind", kind);
    c.profile.kind = profile_kind_from_string(kind);
    r.get("rho0", c.profile.rho0);
    r.get("slope_or_rate", c.profile.slope_or_rate);
    r.get("layer_center", c.profile.layer_center);
    r.get("layer_width", c.profile.layer_width);
    r.get("tau", c.profile.tau);
    r.get("x3_0", c.profile.x3_0);
    r.get("degenerate_halfwidth", c.profile.degenerate_halfwidth);
    r.get("h", c.profile.h);
    r.get("mollifier_width", c.profile.mollifier_width);
    r.get("zero_sixth_derivative", c.profile.zero_sixth_derivative);
    r.get("flag_samples", c.profile.flag_samples);
    r.get("table", c.profile.table);
    r.finish();
  }
  if (const auto* p = root.child("params")) {
    Reader r(*p, "params");
    r.get("g", c.params.g);
    r.get("mu", c.params.mu);
    r.get("eps", c.params.eps);
    r.get_optional("eps_over_eps_c", c.eps_over_eps_c);
    r.finish();
  }
  if (const auto* p = root.child("grid")) {
    Reader r(*p, "grid");
    r.get("n", c.grid.n);
    std::string scheme(to_string(c.grid.scheme));
    r.get("scheme", scheme);
    c.grid.scheme = scheme_from_string(scheme);
    r.finish();
  }
  if (const auto* p = root.child("validate")) {
    Reader r(*p, "validate");
    r.get("samples", c.validate.samples);
    r.get("derivatives", c.validate.derivatives);
    r.finish();
  }
  if (const auto* p = root.child("threshold")) {
    Reader r(*p, "threshold");
    std::string mode = detail::threshold_mode_name(c.threshold.mode);
    r.get("mode", mode);
    c.threshold.mode = detail::threshold_mode_from_string(mode);
    r.finish();
  }
  if (const auto* p = root.child("dispersion")) {
    Reader r(*p, "dispersion");
    r.get("kappa_min", c.dispersion.kappa_min);
    r.get("kappa_max", c.dispersion.kappa_max);
    r.get("kappa_count", c.dispersion.kappa_count);
    r.get("modes", c.dispersion.modes);
    r.finish();
  }
  if (const auto* p = root.child("simulate")) {
    Reader r(*p, "simulate");
    r.get("kappa", c.simulate.kappa);
    r.get("T", c.simulate.T);
    r.get_optional("dt", c.simulate.dt);
    r.get("sample_every", c.simulate.sample_every);
    if (const auto* s = r.child("seed")) {
      Reader rs(*s, "simulate.seed");
      std::string kind(to_string(c.simulate.seed.kind));
      rs.get("kind", kind);
      c.simulate.seed.kind = seed_kind_from_string(kind);
      rs.get("rng_seed", c.simulate.seed.rng_seed);
      rs.get("mode_index", c.simulate.seed.mode_index);
      rs.get("amplitude", c.simulate.seed.amplitude);
      rs.finish();
    }
    r.finish();
  }
  if (const auto* p = root.child("verify")) {
    Reader r(*p, "verify");
    auto& v = c.verify;
    r.get("kappa", v.kappa);
    r.get("random_fields", v.random_fields);
    r.get("rng_seed", v.rng_seed);
    r.get("plane_n1", v.plane_n1);
    r.get("plane_n3", v.plane_n3);
    r.get("amplitude_fraction", v.amplitude_fraction);
    r.get("identity_tol", v.identity_tol);
    r.get("decomposition_tol", v.decomposition_tol);
    r.get("witness_tol", v.witness_tol);
    r.get("quotient_tol", v.quotient_tol);
    r.get("scale_tol", v.scale_tol);
    r.get("neutral_band", v.neutral_band);
    r.finish();
  }
  if (const auto* p = root.child("exponents")) {
    Reader r(*p, "exponents");
    r.get("thetas", c.exponents.thetas);
    r.get("exact", c.exponents.exact);
    r.finish();
  }
  root.finish();

  c.params.check();
  if (c.eps_over_eps_c && !(*c.eps_over_eps_c >= 0.0)) throw ConfigError("params.eps_over_eps_c must be nonnegative");
  if (c.grid.n < SlabGrid::min_nodes) throw ConfigError("grid.n must be at least 8");
  if (c.simulate.dt && !(*c.simulate.dt > 0.0)) throw ConfigError("simulate.dt must be positive");
  if (c.validate.derivatives < 0 || c.validate.derivatives > max_derivative)
    throw ConfigError("validate.derivatives must lie in [0, 8]");
  if (c.validate.samples < 2) throw ConfigError("validate.samples must be at least 2");
  return c;
}

inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
  using J = nlohmann::ordered_json;
  J j;
  j["profile"] = {{"kind", std::string(to_string(c.profile.kind))},
                  {"rho0", c.profile.rho0},
                  {"slope_or_rate", c.profile.slope_or_rate},
                  {"layer_center", c.profile.layer_center},
                  {"layer_width", c.profile.layer_width},
                  {"tau", c.profile.tau},
                  {"x3_0", c.profile.x3_0},
                  {"degenerate_halfwidth", c.profile.degenerate_halfwidth},
                  {"h", c.profile.h},
                  {"mollifier_width", c.profile.mollifier_width},
                  {"zero_sixth_derivative", c.profile.zero_sixth_derivative},
                  {"flag_samples", c.profile.flag_samples},
                  {"table", c.profile.table}};
  j["params"] = {{"g", c.params.g}, {"mu", c.params.mu}, {"eps", c.params.eps}};
  j["params"]["eps_over_eps_c"] = c.eps_over_eps_c ? J(*c.eps_over_eps_c) : J(nullptr);
  j["grid"] = {{"n", c.grid.n}, {"scheme", std::string(to_string(c.grid.scheme))}};
  j["validate"] = {{"samples", c.validate.samples}, {"derivatives", c.validate.derivatives}};
  j["threshold"] = {{"mode", detail::threshold_mode_name(c.threshold.mode)}};
  j["dispersion"] = {{"kappa_min", c.dispersion.kappa_min},
                     {"kappa_max", c.dispersion.kappa_max},
                     {"kappa_count", c.dispersion.kappa_count},
                     {"modes", c.dispersion.modes}};
  j["simulate"] = {{"kappa", c.simulate.kappa},
                   {"T", c.simulate.T},
                   {"dt", c.simulate.dt ? J(*c.simulate.dt) : J(nullptr)},
                   {"sample_every", c.simulate.sample_every},
                   {"seed",
                    {{"kind", std::string(to_string(c.simulate.seed.kind))},
                     {"rng_seed", c.simulate.seed.rng_seed},
                     {"mode_index", c.simulate.seed.mode_index},
                     {"amplitude", c.simulate.seed.amplitude}}}};
  const auto& v = c.verify;
  j["verify"] = {{"kappa", v.kappa},
                 {"random_fields", v.random_fields},
                 {"rng_seed", v.rng_seed},
                 {"plane_n1", v.plane_n1},
                 {"plane_n3", v.plane_n3},
                 {"amplitude_fraction", v.amplitude_fraction},
                 {"identity_tol", v.identity_tol},
                 {"decomposition_tol", v.decomposition_tol},
                 {"witness_tol", v.witness_tol},
                 {"quotient_tol", v.quotient_tol},
                 {"scale_tol", v.scale_tol},
                 {"neutral_band", v.neutral_band}};
  j["exponents"] = {{"thetas", c.exponents.thetas}, {"exact", c.exponents.exact}};
  return j;
}

// Reads a JSON config file. Other formats are rejected by extension.
inline RunConfig load_config(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext != ".json")
    throw ConfigError("unsupported config format '" + ext + "' (" + path.string() + "); use a .json file");
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path.string());
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace qrt
