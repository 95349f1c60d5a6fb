#pragma once

// CSV and JSON emission with round-trip floating-point formatting.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qrt/error.hpp"
#include "qrt/evolve.hpp"
#include "qrt/exponents.hpp"
#include "qrt/profiles.hpp"
#include "qrt/spectra.hpp"

namespace qrt::io {

using json = nlohmann::ordered_json;

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw ShapeError("csv row width does not match the header");
    rows_.push_back(row);
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
      os << '\n';
    }
    return os.str();
  }

  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
  if (!f) throw ConfigError("write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// Non-finite values become null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json to_json(const ValidationReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"witness_x3", number(c.witness_x3)},
                     {"witness_value", number(c.witness_value)}});
  return {{"all_passed", r.all_passed()}, {"conditions", conds}};
}

inline json to_json(const ThresholdResult& t, const EpsilonBounds& b) {
  json j{{"eps_c", t.eps_c}, {"a3", t.a3}, {"n", t.n}, {"scheme", std::string(to_string(t.scheme))},
         {"bound_general", number(b.general)}};
  j["bound_linear"] = b.linear ? json(*b.linear) : json(nullptr);
  return j;
}

inline CsvTable phi_csv(const SlabGrid& g, const Eigen::VectorXd& phi) {
  CsvTable t({"x3", "phi"});
  for (Eigen::Index i = 0; i < phi.size(); ++i) t.add_row({g.nodes()(i), phi(i)});
  return t;
}

inline CsvTable dispersion_csv(const DispersionResult& d) {
  std::size_t width = 0;
  for (const auto& l : d.leading) width = std::max(width, l.size());
  std::vector<std::string> header{"kappa"};
  for (std::size_t j = 1; j <= width; ++j) {
    header.push_back("re_sigma_" + std::to_string(j));
    header.push_back("im_sigma_" + std::to_string(j));
  }
  CsvTable t(header);
  for (std::size_t i = 0; i < d.kappas.size(); ++i) {
    std::vector<double> row{d.kappas[i]};
    for (std::size_t j = 0; j < width; ++j) {
      const bool have = j < d.leading[i].size();
      row.push_back(have ? d.leading[i][j].real() : std::nan(""));
      row.push_back(have ? d.leading[i][j].imag() : std::nan(""));
    }
    t.add_row(row);
  }
  return t;
}

inline json to_json(const DispersionResult& d) {
  double best = -std::numeric_limits<double>::infinity(), at = 0.0;
  for (std::size_t i = 0; i < d.kappas.size(); ++i)
    if (d.max_growth[i] > best) {
      best = d.max_growth[i];
      at = d.kappas[i];
    }
  json j{{"n", d.n},
         {"g", d.params.g},
         {"mu", d.params.mu},
         {"eps", d.params.eps},
         {"max_growth", number(best)},
         {"max_growth_kappa", at}};
  j["kappa_c"] = d.kappa_c ? json(*d.kappa_c) : json(nullptr);
  return j;
}

inline CsvTable trajectory_csv(const Trajectory& tr) {
  CsvTable t({"t", "E", "kinetic", "dissipation", "residual", "amplitude"});
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& s = tr.samples[i];
    // Residual of the interval ending at this sample; none for the first one.
    const double res = i == 0 ? std::nan("") : tr.balance_residual[i - 1];
    t.add_row({s.t, s.energy.E, s.energy.kinetic, s.energy.dissipation, res, s.amplitude});
  }
  return t;
}

inline json to_json(const ExponentReport& r) {
  json checks = json::object();
  for (auto c : all_exponent_checks) checks[std::string(to_string(c))] = r.check(c);
  return {{"theta", r.theta},
          {"s", r.s},
          {"a", r.a},
          {"theta_max", r.theta_max},
          {"quadratic", r.quadratic},
          {"ab1_direct", r.ab1_direct},
          {"ab1_quadratic", r.ab1_quadratic},
          {"admissible", theta_admissible(r.theta, r.exact)},
          {"exact", r.exact},
          {"checks", checks}};
}

}  // namespace qrt::io
