// Command-line front end for the pairing-model library.
//
//   richardson_cli solve     --config model.json [--label 1,0,1] [--out roots.csv]
//   richardson_cli correlate --config model.json [--out corr.csv] [--summary s.json]
//   richardson_cli verify    --config model.json [--oracle] [--sixvertex] [--kz] [--continuum]
//   richardson_cli sweep     --config model.json --grid 0.1:1.0:10 [--out sweep.csv]
//   richardson_cli continuum --g 0.6 [--sizes 8,16,32,64] [--filling 0.5]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <richardson/richardson.hpp>

namespace {

using namespace richardson;
using nlohmann::json;

constexpr int kOk = 0, kConfig = 1, kNumerical = 2, kVerify = 3;

struct Options {
  std::string config;
  std::string out;
  std::string summary;
  std::string label;
  std::string grid;
  std::string sizes = "8,16,32,64";
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::optional<double> g;
  double filling = 0.5;
  bool oracle = false, sixvertex = false, kz = false, continuum = false;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string short_num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

// Output sink: the --out file, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw config_error("cannot open output file " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_json(const std::string& path, const json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw config_error("cannot open summary file " + path);
  f << j.dump(2) << "\n";
}

PairingModel load_model(const Options& o) {
  if (o.config.empty()) throw config_error("--config is required");
  std::ifstream f(o.config);
  if (!f) throw config_error("cannot read config " + o.config);
  std::stringstream ss;
  ss << f.rdbuf();
  PairingModel m = model_from_text(ss.str());
  auto rep = validate(m);
  if (!rep.ok()) throw config_error("invalid model:\n" + rep.str());
  return m;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("bad number in list: " + item);
    }
  }
  return v;
}

// "a:b:n" (n points, inclusive) or a comma list; must be strictly increasing.
std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> g;
  if (s.find(':') != std::string::npos) {
    std::string t = s;
    for (auto& c : t)
      if (c == ':') c = ',';
    auto p = parse_list(t);
    if (p.size() != 3 || p[2] < 2 || p[2] != std::floor(p[2])) throw config_error("grid must be a:b:n with n >= 2");
    int n = int(p[2]);
    for (int k = 0; k < n; ++k) g.push_back(p[0] + (p[1] - p[0]) * k / (n - 1));
  } else {
    g = parse_list(s);
  }
  if (g.empty()) throw config_error("empty grid");
  for (std::size_t k = 1; k < g.size(); ++k)
    if (!(g[k] > g[k - 1])) throw config_error("grid must be strictly increasing");
  for (double x : g)
    if (!(x > 0)) throw config_error("grid couplings must be positive");
  return g;
}

StateLabel parse_label(const PairingModel& m, const std::string& s) {
  if (s.empty()) return ground_label(m);
  StateLabel l;
  for (double x : parse_list(s)) l.occupation.push_back(int(x));
  check_label(m, l);
  return l;
}

ContinuationSchedule schedule(const PairingModel& m, const Options& o) {
  auto sc = default_schedule(m);
  if (o.tol) {
    if (!(*o.tol > 0)) throw config_error("--tol must be positive");
    sc.newton_tol = *o.tol;
  }
  return sc;
}

json roots_json(const std::vector<cplx>& t) {
  json a = json::array();
  for (auto z : t) a.push_back({z.real(), z.imag()});
  return a;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const Options& o) {
  PairingModel m = load_model(o);
  auto label = parse_label(m, o.label);
  RootSet rs;
  try {
    rs = continue_in_g(m, label, schedule(m, o));
  } catch (const convergence_error& e) {
    std::cerr << "solver failed: " << e.what() << "\n";
    std::cerr << json{{"last_iterate", roots_json(e.last_iterate)}}.dump() << "\n";
    return kNumerical;
  }
  if (!rs.converged) {
    std::cerr << "solver failed: residual " << num(rs.residual) << "\n";
    std::cerr << json{{"last_iterate", roots_json(rs.roots)}}.dump() << "\n";
    return kNumerical;
  }
  auto sp = spectrum(m, rs);
  Sink sink(o.out);
  auto& os = sink.os();
  os << "quantity,index,real,imag\n";
  for (std::size_t i = 0; i < rs.roots.size(); ++i)
    os << "root," << i + 1 << "," << num(rs.roots[i].real()) << "," << num(rs.roots[i].imag()) << "\n";
  os << "energy,," << num(sp.energy) << "," << num(sp.energy_imag) << "\n";
  for (std::size_t i = 0; i < sp.gaudin_eigenvalues.size(); ++i)
    os << "gaudin," << i + 1 << "," << num(sp.gaudin_eigenvalues[i]) << ",0\n";
  if (!o.out.empty()) {
    json s{{"converged", rs.converged},
           {"energy", sp.energy},
           {"residual", rs.residual},
           {"conjugation_closed", rs.conjugation_closed},
           {"deformed", rs.deformed},
           {"continuation_steps", rs.continuation_steps},
           {"newton_iterations", rs.newton_iterations}};
    std::cout << s.dump(2) << "\n";
  }
  return kOk;
}

// ------------------------------------------------------------ correlate

int cmd_correlate(const Options& o) {
  PairingModel m = load_model(o);
  auto rs = continue_in_g(m, parse_label(m, o.label), schedule(m, o));
  if (!rs.converged) throw numerical_error("root set did not converge");
  auto r = correlator_report(m, rs.roots);
  Sink sink(o.out);
  auto& os = sink.os();
  const std::size_t n = m.size();
  os << "correlator,i,j,value\n";
  for (std::size_t i = 0; i < n; ++i) os << "occupation," << i + 1 << "," << i + 1 << "," << num(r.occupations[i]) << "\n";
  auto block = [&](const char* name, const rmat& x) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) os << name << "," << i + 1 << "," << j + 1 << "," << num(x(i, j)) << "\n";
  };
  block("pair_transfer", r.pair_transfer);
  block("density_density", r.density_density);
  block("spin_spin", r.spin_spin);
  os << "pairing,,," << num(r.pairing) << "\n";
  json s{{"energy", energy(rs)},
         {"pairing", r.pairing},
         {"weighted_occupation", r.weighted_occupation},
         {"conservation_residual", r.conservation_residual},
         {"energy_identity_residual", r.energy_identity_residual},
         {"composition_residual", r.composition_residual},
         {"spin_path_discrepancy", r.spin_path_discrepancy},
         {"imag_leakage", r.imag_leakage}};
  if (!o.summary.empty() || !o.out.empty()) write_json(o.summary, s);
  return kOk;
}

// --------------------------------------------------------------- verify

class Log {
 public:
  explicit Log(std::ostream& os) : os_(os) {}
  void check(const std::string& name, double value, double tol) {
    bool ok = value <= tol;
    os_ << (ok ? "PASS " : "FAIL ") << name << " residual=" << num(value) << " tol=" << short_num(tol) << "\n";
    all_ = all_ && ok;
  }
  void flag(const std::string& name, bool ok, const std::string& detail) {
    os_ << (ok ? "PASS " : "FAIL ") << name << " " << detail << "\n";
    all_ = all_ && ok;
  }
  void skip(const std::string& name, const std::string& why) { os_ << "SKIP " << name << " " << why << "\n"; }
  bool all() const { return all_; }

 private:
  std::ostream& os_;
  bool all_ = true;
};

std::vector<cplx> random_point(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = cplx(1.5 * u(rng), 0.3 + 0.5 * std::abs(u(rng)) + 0.2 * double(i));
  return t;
}

void verify_oracle(const PairingModel& m, const Options& o, std::mt19937_64& rng, Log& log) {
  Sector sec(m);
  auto labels = all_labels(m);
  std::vector<RootSet> sets;
  for (auto& l : labels) sets.push_back(continue_in_g(m, l, schedule(m, o)));
  auto ed = ed_spectrum(sec.hamiltonian());
  std::vector<double> got;
  for (auto& s : sets)
    got.push_back(m.kind == Kind::rational ? energy(s)
                                           : generalized_energy(m.levels, gaudin_eigenvalues(m, s.roots), m.coupling));
  std::sort(got.begin(), got.end());
  double spectrum_err = got.size() == ed.size() ? 0.0 : 1.0;
  for (std::size_t k = 0; k < std::min(got.size(), ed.size()); ++k)
    spectrum_err = std::max(spectrum_err, std::abs(got[k] - ed[k]) / std::max(1.0, std::abs(ed[k])));
  log.check("oracle.spectrum", spectrum_err, 1e-8);

  std::vector<cmat> hs;
  for (std::size_t i = 0; i < m.size(); ++i) hs.push_back(sec.gaudin(i));
  double sim = 0.0;
  for (auto& s : sets) {
    cvec v = sigma_plus_state(m, s.roots);
    v /= v.norm();
    auto e = gaudin_eigenvalues_complex(m, s.roots);
    for (std::size_t i = 0; i < m.size(); ++i) sim = std::max(sim, (hs[i] * v - e[i] * v).norm() / (1 + std::abs(e[i])));
  }
  log.check("oracle.gaudin_eigenvalues", sim, 1e-8);

  cmat h = sec.hamiltonian();
  double com = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    com = std::max(com, (h * hs[i] - hs[i] * h).norm() / std::max(1.0, h.norm() * hs[i].norm()));
    for (std::size_t j = i + 1; j < hs.size(); ++j)
      com = std::max(com, (hs[i] * hs[j] - hs[j] * hs[i]).norm() / std::max(1.0, hs[i].norm() * hs[j].norm()));
  }
  log.check("oracle.commutators", com, 1e-12);

  if (!m.spin_half()) return log.skip("oracle.correlators", "unit degeneracies required");
  double off = 0.0;
  if (m.pairs > 0) {
    auto t = random_point(rng, m.pairs);
    for (std::size_t i = 0; i < m.size(); ++i) off = std::max(off, hi_action_offshell(m, t, i).residual);
  }
  log.check("oracle.offshell_identity", off, 1e-9);
  if (m.kind != Kind::rational) return log.skip("oracle.correlators", "rational kind only");

  double nrm = 0.0, corr = 0.0, cons = 0.0, eid = 0.0, comp = 0.0, paths = 0.0;
  for (auto& s : sets) {
    cvec v = sigma_plus_state(m, s.roots);
    double direct = v.squaredNorm();
    nrm = std::max(nrm, std::abs(norm_matrix(m, s.roots).det_value() - direct) / direct);
    Correlators c(m, s.roots);
    auto r = c.report();
    for (std::size_t i = 0; i < m.size(); ++i) {
      corr = std::max(corr, std::abs(r.occupations[i] - expectation(v, sec.number(i)).real()));
      for (std::size_t j = 0; j < m.size(); ++j) {
        corr = std::max(corr, std::abs(r.pair_transfer(i, j) - expectation(v, sec.hop(i, j)).real()));
        corr = std::max(corr, std::abs(r.density_density(i, j) - expectation(v, sec.density_density(i, j)).real()));
        if (i != j) corr = std::max(corr, std::abs(r.spin_spin(i, j) - expectation(v, sec.sigma_sigma(i, j)).real()));
      }
    }
    corr = std::max(corr, std::abs(r.pairing - expectation(v, sec.pair_operator()).real()));
    cons = std::max(cons, r.conservation_residual);
    eid = std::max(eid, r.energy_identity_residual);
    comp = std::max(comp, r.composition_residual);
    paths = std::max(paths, r.spin_path_discrepancy);
  }
  log.check("oracle.norm", nrm, 1e-9);
  log.check("oracle.correlators", corr, 1e-8);
  log.check("identity.conservation", cons, 1e-10);
  log.check("identity.energy", eid, 1e-9);
  log.check("identity.composition", comp, 1e-8);
  log.check("identity.spin_paths", paths, 1e-10);
}

void verify_sixvertex(const PairingModel& m, std::mt19937_64& rng, Log& log) {
  if (m.size() > 10) return log.skip("sixvertex", "more than 10 sites");
  sixvertex::SixVertexParams p;
  for (double x : m.levels) p.xi.push_back(x);
  p.eta = 0.3;
  p.g = m.coupling;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cplx t(1.5 * u(rng), 0.5 + 0.5 * std::abs(u(rng)));
  auto r = sixvertex::verify_fbasis(p, t);
  log.check("sixvertex.fbasis", r.max_residual(), 1e-10);
  log.check("sixvertex.fbasis_scalar", r.max_scalar_deviation(), 1e-8);
  double yb = 0.0;
  for (int k = 0; k < 10; ++k)
    yb = std::max(yb, sixvertex::yang_baxter_residual({u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, 0.3));
  log.check("sixvertex.yang_baxter", yb, 1e-12);
  cplx t2(1.5 * u(rng), 0.5 + 0.5 * std::abs(u(rng)));
  log.check("sixvertex.transfer_commute", sixvertex::transfer_commutator(p, t, t2), 1e-11);
  log.check("sixvertex.quantum_determinant", sixvertex::quantum_determinant_residual(p, t), 1e-10);
  auto q = p;
  q.eta = 1e-2;
  auto b = sixvertex::b_formula_limit(q, t);
  log.flag("sixvertex.b_limit", b.pass(), "ratio=" + num(b.ratio));
  auto z = sixvertex::transfer_expansion(q, t);
  log.flag("sixvertex.transfer_expansion", z.pass(), "ratio=" + num(z.ratio));
}

void verify_kz(const PairingModel& m, const Options& o, std::mt19937_64& rng, Log& log) {
  if (m.kind != Kind::rational || !m.spin_half() || m.pairs == 0)
    return log.skip("kz", "rational unit-degeneracy model with M > 0 required");
  auto t = random_point(rng, m.pairs);
  auto r = kz_residual(t, m);
  log.check("kz.dt", r.dt_residual, 1e-6);
  log.check("kz.dxi", r.dxi_residual, 1e-6);
  log.check("kz.mixed", std::max(r.mixed_residual, r.mixed_analytic), 1e-6);
  auto rs = continue_in_g(m, ground_label(m), schedule(m, o));
  log.check("kz.stationarity", chi_stationarity(rs.roots, m), 1e-5);
}

void verify_continuum(double g, const std::vector<int>& sizes, Log& log) {
  auto s = gap_solve(g, 0.5);
  log.check("continuum.gap", std::abs(s.gap - 1.0 / std::sinh(1.0 / g)), 1e-10);
  log.check("continuum.energy_closed_form", std::abs(s.energy - continuum::energy_closed(s.gap, s.mu, g)), 1e-10);
  auto tab = continuum_compare(g, sizes);
  std::string devs;
  for (auto& r : tab.rows) devs += (devs.empty() ? "" : ",") + num(r.deviation);
  log.flag("continuum.monotone", tab.monotone, "deviations=" + devs);
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> v;
  for (double x : parse_list(s)) {
    if (x != std::floor(x) || x <= 0) throw config_error("sizes must be positive integers");
    v.push_back(int(x));
  }
  return v;
}

int cmd_verify(const Options& o) {
  bool any = o.oracle || o.sixvertex || o.kz || o.continuum;
  bool want_model = !any || o.oracle || o.sixvertex || o.kz;
  std::optional<PairingModel> m;
  if (want_model || !o.config.empty()) m = load_model(o);
  std::mt19937_64 rng(o.seed);
  Sink sink(o.out);
  Log log(sink.os());
  if (!any || o.oracle) verify_oracle(*m, o, rng, log);
  if (!any || o.sixvertex) verify_sixvertex(*m, rng, log);
  if (!any || o.kz) verify_kz(*m, o, rng, log);
  if (!any || o.continuum) {
    double g = o.g ? *o.g : (m ? m->coupling : 1.0);
    verify_continuum(g, any ? parse_sizes(o.sizes) : std::vector<int>{8, 16, 32}, log);
  }
  sink.os() << (log.all() ? "ALL PASS" : "SOME CHECKS FAILED") << "\n";
  return log.all() ? kOk : kVerify;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Options& o) {
  PairingModel m = load_model(o);
  if (o.grid.empty()) throw config_error("--grid is required");
  auto grid = parse_grid(o.grid);
  auto label = parse_label(m, o.label);
  Sink sink(o.out);
  auto& os = sink.os();
  os << "g,status,energy,pairing,min_root_distance,newton_iterations\n";
  std::optional<RootSet> prev;
  int ok = 0;
  for (double g : grid) {
    m.coupling = g;
    try {
      auto sc = schedule(m, o);
      RootSet rs = prev ? continue_from(m, *prev, label, sc) : continue_in_g(m, label, sc);
      if (!rs.converged) throw numerical_error("not converged");
      double pairing = NAN;
      if (m.kind == Kind::rational && m.spin_half()) pairing = pairing_amplitude(m, rs.roots);
      double dmin = INFINITY;
      for (std::size_t i = 0; i < rs.roots.size(); ++i)
        for (std::size_t k = 0; k < i; ++k) dmin = std::min(dmin, std::abs(rs.roots[i] - rs.roots[k]));
      os << num(g) << ",ok," << num(energy(rs)) << "," << num(pairing) << "," << num(dmin) << ","
         << rs.newton_iterations << "\n";
      prev = rs;
      ++ok;
    } catch (const numerical_error& e) {
      os << num(g) << ",failed,,,,\n";
      prev.reset();
    }
  }
  return ok >= 0.9 * double(grid.size()) ? kOk : kNumerical;
}

// ------------------------------------------------------------ continuum

int cmd_continuum(const Options& o) {
  double g = o.g ? *o.g : (o.config.empty() ? 1.0 : load_model(o).coupling);
  auto s = gap_solve(g, o.filling);
  json summary{{"g", g},
               {"filling", o.filling},
               {"gap", s.gap},
               {"mu", s.mu},
               {"energy_density", s.energy},
               {"normal_state", s.normal_state}};
  if (o.filling == 0.5) {
    auto tab = continuum_compare(g, parse_sizes(o.sizes));
    Sink sink(o.out);
    auto& os = sink.os();
    os << "n,energy_per_level,continuum_energy,deviation\n";
    for (auto& r : tab.rows)
      os << r.n << "," << num(r.energy_per_level) << "," << num(tab.continuum.energy) << "," << num(r.deviation) << "\n";
    summary["monotone"] = tab.monotone;
    summary["ratio_consistent"] = tab.ratio_ok;
  }
  if (!o.summary.empty() || !o.out.empty() || o.filling != 0.5) write_json(o.summary, summary);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and verification suite for the reduced BCS pairing model"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", o.config, "model JSON file");
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--seed", o.seed, "seed for random verification draws");
    c->add_option("--tol", o.tol, "Newton tolerance (relative)");
  };
  auto* solve = app.add_subcommand("solve", "solve the Richardson equations for one state");
  add_common(solve);
  solve->add_option("--label", o.label, "pairs per level at g -> 0, comma separated (default ground state)");
  auto* corr = app.add_subcommand("correlate", "determinant correlators for one state");
  add_common(corr);
  corr->add_option("--label", o.label, "pairs per level at g -> 0");
  corr->add_option("--summary", o.summary, "JSON summary file (default stdout)");
  auto* ver = app.add_subcommand("verify", "run oracle, six-vertex, KZ and continuum checks");
  add_common(ver);
  ver->add_flag("--oracle", o.oracle, "exact diagonalization checks");
  ver->add_flag("--sixvertex", o.sixvertex, "finite-eta six-vertex checks");
  ver->add_flag("--kz", o.kz, "chi function and KZ compatibility");
  ver->add_flag("--continuum", o.continuum, "gap equation and finite-size comparison");
  ver->add_option("--g", o.g, "coupling for the continuum checks");
  ver->add_option("--sizes", o.sizes, "system sizes for the continuum comparison");
  auto* sweep = app.add_subcommand("sweep", "warm-started coupling sweep");
  add_common(sweep);
  sweep->add_option("--grid", o.grid, "a:b:n or comma list of couplings");
  sweep->add_option("--label", o.label, "pairs per level at g -> 0");
  auto* cont = app.add_subcommand("continuum", "continuum gap equation and finite-size comparison");
  add_common(cont);
  cont->add_option("--g", o.g, "continuum coupling");
  cont->add_option("--filling", o.filling, "pair filling fraction");
  cont->add_option("--sizes", o.sizes, "even system sizes");
  cont->add_option("--summary", o.summary, "JSON summary file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    if (*solve) return cmd_solve(o);
    if (*corr) return cmd_correlate(o);
    if (*ver) return cmd_verify(o);
    if (*sweep) return cmd_sweep(o);
    if (*cont) return cmd_continuum(o);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const cap_exceeded& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kConfig;
}
