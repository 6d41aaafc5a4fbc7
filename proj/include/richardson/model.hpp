#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace richardson {

enum class Kind { rational, trigonometric };

inline std::string to_string(Kind k) { return k == Kind::rational ? "rational" : "trigonometric"; }

inline Kind kind_from_string(const std::string& s) {
  if (s == "rational") return Kind::rational;
  if (s == "trigonometric") return Kind::trigonometric;
  throw config_error("unknown model kind '" + s + "'");
}

// Discrete-level pairing model.  Level alpha holds up to degeneracies[alpha]
// pairs (2s_alpha); degeneracy 1 is the hard-core boson case.
struct PairingModel {
  std::vector<double> levels;
  std::vector<int> degeneracies;
  int pairs = 0;
  double coupling = 1.0;
  Kind kind = Kind::rational;

  std::size_t size() const { return levels.size(); }
  int capacity() const { return std::accumulate(degeneracies.begin(), degeneracies.end(), 0); }
  bool spin_half() const {
    return std::all_of(degeneracies.begin(), degeneracies.end(), [](int d) { return d == 1; });
  }
  bool operator==(const PairingModel&) const = default;
};

// Convenience constructor for the spin-1/2 case.
inline PairingModel make_model(std::vector<double> levels, int pairs, double g,
                               Kind kind = Kind::rational) {
  PairingModel m;
  m.degeneracies.assign(levels.size(), 1);
  m.levels = std::move(levels);
  m.pairs = pairs;
  m.coupling = g;
  m.kind = kind;
  return m;
}

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string str() const {
    std::string s;
    for (const auto& p : problems) s += (s.empty() ? "" : "; ") + p;
    return s.empty() ? "pass" : s;
  }
};

inline ValidationReport validate(const PairingModel& m) {
  ValidationReport r;
  auto fail = [&](std::string msg) { r.problems.push_back(std::move(msg)); };
  if (m.levels.empty()) fail("no levels");
  if (m.degeneracies.size() != m.levels.size()) fail("degeneracies length differs from levels");
  for (double x : m.levels)
    if (!std::isfinite(x)) {
      fail("non-finite level");
      break;
    }
  for (int d : m.degeneracies)
    if (d < 1) {
      fail("degeneracy must be positive");
      break;
    }
  double scale = 1.0;
  for (double x : m.levels) scale = std::max(scale, std::abs(x));
  for (std::size_t a = 1; a < m.levels.size(); ++a) {
    double gap = m.levels[a] - m.levels[a - 1];
    if (gap == 0.0) {
      fail("duplicate level " + std::to_string(m.levels[a]) + " (express it as a degeneracy)");
    } else if (gap < 0.0) {
      fail("levels not strictly increasing");
    } else if (gap < 1e-12 * scale) {
      fail("near-duplicate levels at " + std::to_string(m.levels[a]) + " (merge into a degeneracy)");
    }
  }
  if (m.pairs < 0) fail("negative pair count");
  if (m.degeneracies.size() == m.levels.size() && m.pairs > m.capacity()) fail("too many pairs");
  if (!(m.coupling > 0.0) || !std::isfinite(m.coupling)) fail("coupling must be positive");
  if (m.kind == Kind::trigonometric && !m.levels.empty()) {
    auto [lo, hi] = std::minmax_element(m.levels.begin(), m.levels.end());
    if (*hi - *lo >= std::numbers::pi) fail("trigonometric levels must fit in one open strip of width pi");
  }
  return r;
}

inline void require_valid(const PairingModel& m) {
  auto r = validate(m);
  if (!r.ok()) throw config_error("invalid model: " + r.str());
}

struct LevelSet {
  std::vector<double> levels;
  std::vector<int> degeneracies;
};

// Collapse repeated energies into degeneracy counts.
inline LevelSet merge_degenerate(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  LevelSet out;
  for (double x : values) {
    if (!out.levels.empty() && out.levels.back() == x) {
      ++out.degeneracies.back();
    } else {
      out.levels.push_back(x);
      out.degeneracies.push_back(1);
    }
  }
  return out;
}

inline nlohmann::json to_json(const PairingModel& m) {
  return {{"levels", m.levels},
          {"degeneracies", m.degeneracies},
          {"pairs", m.pairs},
          {"coupling", m.coupling},
          {"kind", to_string(m.kind)}};
}

// Parses the config document.  Levels are sorted together with their
// degeneracies; the result is not validated.
inline PairingModel model_from_json(const nlohmann::json& j) {
  PairingModel m;
  try {
    m.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("degeneracies"))
      m.degeneracies = j.at("degeneracies").get<std::vector<int>>();
    else
      m.degeneracies.assign(m.levels.size(), 1);
    m.pairs = j.at("pairs").get<int>();
    m.coupling = j.at("coupling").get<double>();
    m.kind = kind_from_string(j.value("kind", std::string("rational")));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad config: ") + e.what());
  }
  if (m.degeneracies.size() == m.levels.size()) {
    std::vector<std::size_t> idx(m.levels.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return m.levels[a] < m.levels[b]; });
    PairingModel s = m;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      s.levels[k] = m.levels[idx[k]];
      s.degeneracies[k] = m.degeneracies[idx[k]];
    }
    m = std::move(s);
  }
  return m;
}

inline std::string to_config_text(const PairingModel& m) { return to_json(m).dump(2); }

inline PairingModel model_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace richardson
