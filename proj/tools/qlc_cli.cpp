// qlc: command-line driver for phase sweeps, steady-state reports, time
// evolution, classical SDE ensembles, Wigner flux fields and the acceptance suite.
//
// Every subcommand reads an optional JSON config (--config), applies flag
// overrides on top, echoes the resolved config into each output file and
// writes into one directory per run (--out).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qlc/acceptance.hpp"
#include "qlc/analytic.hpp"
#include "qlc/errors.hpp"
#include "qlc/fock.hpp"
#include "qlc/lindblad.hpp"
#include "qlc/parallel.hpp"
#include "qlc/sde.hpp"
#include "qlc/stats.hpp"
#include "qlc/wigner_flux.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Typed access to a JSON config with errors that name the offending field.
class Fields {
 public:
  explicit Fields(const json& root) : root_(root) {}

  double number(const std::string& path, double fallback) const {
    const json* v = find(path);
    if (!v) return fallback;
    if (!v->is_number()) fail(path, "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }
  double rate(const std::string& path, double fallback) const {
    const double x = number(path, fallback);
    if (x < 0.0) fail(path, "rates must be nonnegative");
    return x;
  }
  double ratio(const std::string& path, double fallback) const {
    const double x = rate(path, fallback);
    if (x >= 1.0) fail(path, "K must be below 1");
    return x;
  }
  double weight(const std::string& path, double fallback) const {
    const double x = number(path, fallback);
    if (x < 0.0 || x > 1.0) fail(path, "must lie in [0, 1]");
    return x;
  }
  long integer(const std::string& path, long fallback, long min) const {
    const json* v = find(path);
    long x = fallback;
    if (v) {
      if (!v->is_number_integer()) fail(path, "expected an integer");
      x = v->get<long>();
    }
    if (x < min) fail(path, "must be at least " + std::to_string(min));
    return x;
  }
  std::string text(const std::string& path, const std::string& fallback, const std::vector<std::string>& allowed) const {
    const json* v = find(path);
    if (!v) return fallback;
    if (!v->is_string()) fail(path, "expected a string");
    const auto s = v->get<std::string>();
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(path, "expected one of: " + list);
    }
    return s;
  }

 private:
  const json* find(const std::string& path) const {
    const json* node = &root_;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
      if (!node->is_object()) fail(path, "parent is not an object");
      auto it = node->find(part);
      if (it == node->end()) return nullptr;
      node = &*it;
    }
    return node;
  }
  [[noreturn]] static void fail(const std::string& path, const std::string& why) {
    throw ConfigError("config field '" + path + "': " + why);
  }

  const json& root_;
};

// Sets root[path] = value, creating intermediate objects.
void set_path(json& root, const std::string& path, json value) {
  json* node = &root;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object()) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = std::move(value);
}

// Flag text is read as a JSON literal when it parses as one, else kept as a string.
json flag_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

struct Override {
  std::string flag;
  std::string path;
  std::string help;
};

struct CommandSetup {
  std::string config_file;
  std::string out_dir;
  std::map<std::string, std::string> values;  // path -> flag text
};

void add_overrides(CLI::App* cmd, CommandSetup& setup, const std::vector<Override>& table) {
  cmd->add_option("--config", setup.config_file, "JSON config file; flags override its fields");
  cmd->add_option("--out", setup.out_dir, "output directory for this run")->required();
  for (const auto& o : table) {
    cmd->add_option_function<std::string>(
        "--" + o.flag, [&setup, path = o.path](const std::string& v) { setup.values[path] = v; },
        o.help + " [" + o.path + "]");
  }
}

json resolve_config(const CommandSetup& setup) {
  json cfg = json::object();
  if (!setup.config_file.empty()) {
    std::ifstream in(setup.config_file);
    if (!in) throw ConfigError("cannot open config file " + setup.config_file);
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file " + setup.config_file + ": " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  }
  for (const auto& [path, text] : setup.values) set_path(cfg, path, flag_value(text));
  return cfg;
}

// Output stream with 17 significant digits and the classic locale.
class OutFile {
 public:
  OutFile(const fs::path& dir, const std::string& name) : path_(dir / name), os_(path_) {
    if (!os_) throw std::runtime_error("cannot write " + path_.string());
    os_.imbue(std::locale::classic());
    os_ << std::setprecision(17);
  }
  std::ofstream& os() { return os_; }

 private:
  fs::path path_;
  std::ofstream os_;
};

void write_csv_header(std::ostream& os, const std::string& command, const json& cfg) {
  os << "# qlc " << command << " config=" << cfg.dump() << '\n';
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
  OutFile f(dir, name);
  f.os() << j.dump(2) << '\n';
}

fs::path prepare_out(const std::string& dir, const std::string& command, const json& cfg) {
  const fs::path out(dir);
  fs::create_directories(out);
  json echo = cfg;
  echo["command"] = command;
  write_json(out, "config.json", echo);
  return out;
}

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const std::vector<Override> kModelFlags = {
    {"kind", "model.kind", "noise-induced or conventional"},
    {"omega0", "model.omega0", "oscillator frequency"},
    {"kappa-down", "model.kappa_down", "two-photon loss rate"},
    {"K", "model.K", "two-photon gain/loss ratio (noise-induced)"},
    {"kappa-up", "model.kappa_up", "one-photon gain rate (conventional)"},
    {"dim", "model.dim", "Fock truncation; default from the model"},
};

struct ModelChoice {
  qlc::ModelParams params;
  int dim;
};

ModelChoice read_model(const Fields& f) {
  const std::string kind = f.text("model.kind", "noise-induced", {"noise-induced", "conventional"});
  const double omega0 = f.number("model.omega0", 1.0);
  const double kd = f.rate("model.kappa_down", 1.0);
  qlc::ModelParams p = kind == "noise-induced" ? qlc::ModelParams::noise_induced(omega0, kd, f.ratio("model.K", 0.5))
                                               : qlc::ModelParams::conventional(omega0, kd, f.rate("model.kappa_up", 0.3));
  p.validate();
  const int dim = static_cast<int>(f.integer("model.dim", qlc::truncation_dim(p), 2));
  return {p, dim};
}

// ---------------------------------------------------------------- phase-diagram

int cmd_phase_diagram(const json& cfg, const std::string& out_dir) {
  const Fields f(cfg);
  const double k0 = f.number("K_min", 0.01), k1 = f.number("K_max", 0.99);
  const double w0 = f.weight("wp_min", 0.0), w1 = f.weight("wp_max", 1.0);
  const long nk = f.integer("K_count", 50, 1), nw = f.integer("wp_count", 50, 1);
  if (!(k0 > 0.0 && k1 < 1.0 && k0 <= k1)) throw ConfigError("config fields 'K_min', 'K_max': need 0 < K_min <= K_max < 1");
  if (w0 > w1) throw ConfigError("config fields 'wp_min', 'wp_max': need wp_min <= wp_max");
  const fs::path out = prepare_out(out_dir, "phase-diagram", cfg);

  auto axis = [](double a, double b, long n, long i) { return n == 1 ? a : a + (b - a) * double(i) / double(n - 1); };
  std::vector<qlc::PhasePoint> rows(static_cast<std::size_t>(nk * nw));
  qlc::parallel_for(rows.size(), [&](std::size_t idx) {
    const long i = static_cast<long>(idx) / nw, j = static_cast<long>(idx) % nw;
    rows[idx] = qlc::phase_classify(axis(k0, k1, nk, i), axis(w0, w1, nw, j));
  });

  OutFile csv(out, "phase_diagram.csv");
  write_csv_header(csv.os(), "phase-diagram", cfg);
  csv.os() << "K,wp_plus,r_star,w0,q_ss,s_q,phase\n";
  std::map<std::string, long> counts{{"I", 0}, {"II", 0}, {"III", 0}};
  for (const auto& r : rows) {
    csv.os() << r.K << ',' << r.wp_plus << ',' << r.r_star << ',' << r.w0 << ',';
    if (r.q_ss) {
      csv.os() << *r.q_ss << ',' << qlc::sigmoid(*r.q_ss);
    } else {
      csv.os() << "nan,nan";
    }
    csv.os() << ',' << qlc::to_string(r.phase) << '\n';
    ++counts[qlc::to_string(r.phase)];
  }
  write_json(out, "summary.json", {{"config", cfg}, {"rows", rows.size()}, {"phase_counts", counts}});
  std::cout << "wrote " << rows.size() << " rows to " << (out / "phase_diagram.csv").string() << '\n';
  return 0;
}

// ----------------------------------------------------------------------- steady

json check_entry(const std::string& status, double value, double threshold, const std::string& detail = "") {
  json j{{"status", status}, {"value", nan_to_null(value)}, {"threshold", threshold}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

std::string pass_if(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_steady(const json& cfg, const std::string& out_dir) {
  const Fields f(cfg);
  const ModelChoice m = read_model(f);
  const double wp = f.weight("wp_plus", 0.55);
  const fs::path out = prepare_out(out_dir, "steady", cfg);
  const bool noise_induced = m.params.kind == qlc::ModelKind::NoiseInduced;
  const double K = m.params.K();

  const qlc::Superoperator L = qlc::liouvillian(m.params, m.dim);
  const qlc::SteadyStates ss = qlc::steady_state_numeric(L);
  const qlc::DensityMatrix rho_num = noise_induced ? ss.combine(wp) : ss.states.front();

  json checks = json::object();
  json report{{"config", cfg}, {"dim", m.dim}, {"kernel_dim", ss.kernel_dim},
              {"populations_only", ss.populations_only}, {"stationarity_residual", ss.relative_residual}};

  std::optional<qlc::DensityMatrix> rho_an;
  if (noise_induced) {
    rho_an = qlc::rho_ss_analytic(K, wp, m.dim);
    const double td = qlc::trace_distance(rho_num, *rho_an);
    checks["steady_state"] = check_entry(pass_if(td < 1e-8), td, 1e-8);
  } else {
    checks["steady_state"] = check_entry("SKIPPED", NAN, 1e-8, "no closed form for the conventional model");
  }

  const qlc::CirculationResult circ = qlc::circulation(rho_num, m.params);
  report["circulation"] = {{"numeric", circ.phi}, {"formula", nan_to_null(circ.phi_formula)},
                           {"quadrature", circ.phi_quadrature}, {"edge_unreliable", circ.edge_unreliable}};
  if (noise_induced) {
    const double gap = std::abs(circ.phi - circ.phi_formula) / circ.phi_formula;
    checks["circulation"] = check_entry(pass_if(gap < 1e-8), gap, 1e-8);
  } else {
    checks["circulation"] = check_entry("SKIPPED", NAN, 1e-8, "closed form holds for the noise-induced model only");
  }

  const double q_state = qlc::mandel_q_from_state(rho_num);
  report["mandel_q"] = {{"moments", nan_to_null(q_state)}};
  if (noise_induced) {
    if (const auto q = qlc::mandel_q(K, wp)) {
      report["mandel_q"]["formula"] = *q;
      const double gap = std::abs(*q - q_state);
      // Truncation at this dimension limits how well the moments match.
      checks["mandel_q"] = check_entry(pass_if(gap < 1e-8), gap, 1e-8);
    } else {
      checks["mandel_q"] = check_entry("SKIPPED", NAN, 1e-8, "<n> = 0, Q undefined");
    }
  }

  const double db = qlc::detailed_balance_residual(m.params, rho_num);
  if (noise_induced) {
    checks["detailed_balance"] = check_entry(pass_if(db < 1e-10), db, 1e-10);
  } else {
    checks["detailed_balance"] =
        check_entry(db > 1e-3 ? "FAIL-expected" : "FAIL", db, 1e-3, "conventional gain breaks quantum detailed balance");
  }

  if (!noise_induced) {
    checks["conserved_reconstruction"] = check_entry("SKIPPED", NAN, 1e-6, "unique steady state, nothing to reconstruct");
  } else if (K == 0.0) {
    checks["conserved_reconstruction"] =
        check_entry("SKIPPED", NAN, 1e-6, "K = 0: the odd sector has no normalizable geometric ladder to project on");
  } else {
    const qlc::DensityMatrix rho0 = qlc::coherent_state(m.dim, {1.0, 0.0});
    const double t = 50.0 / m.params.kappa_down;
    const double gap = qlc::trace_distance(qlc::conserved_reconstruction(rho0, K), qlc::evolve(rho0, L, t));
    checks["conserved_reconstruction"] = check_entry(pass_if(gap < 1e-6), gap, 1e-6, "coherent alpha = 1 evolved to kappa_down t = 50");
  }
  report["checks"] = checks;
  write_json(out, "report.json", report);

  bool ok = true;
  for (const auto& [name, c] : checks.items()) {
    const auto status = c["status"].get<std::string>();
    std::cout << status << ' ' << name << '\n';
    ok = ok && status != "FAIL";
  }
  return ok ? 0 : 1;
}

// ----------------------------------------------------------------------- evolve

int cmd_evolve(const json& cfg, const std::string& out_dir) {
  const Fields f(cfg);
  const ModelChoice m = read_model(f);
  const std::string init = f.text("initial.type", "coherent", {"coherent", "vacuum", "fock"});
  const double t_max = f.rate("t_max", 10.0);
  const long steps = f.integer("steps", 100, 1);
  qlc::DensityMatrix rho0;
  if (init == "coherent") {
    rho0 = qlc::coherent_state(m.dim, {f.number("initial.alpha_re", 1.0), f.number("initial.alpha_im", 0.0)});
  } else {
    const long n = init == "vacuum" ? 0 : f.integer("initial.n", 1, 0);
    if (n >= m.dim) throw ConfigError("config field 'initial.n': must be below model.dim");
    rho0 = qlc::fock_projector(m.dim, static_cast<int>(n));
  }
  const fs::path out = prepare_out(out_dir, "evolve", cfg);
  const qlc::Superoperator L = qlc::liouvillian(m.params, m.dim);
  const qlc::FockOperator parity = qlc::parity_op(m.dim), number = qlc::number_op(m.dim);

  std::vector<qlc::DensityMatrix> states(static_cast<std::size_t>(steps + 1));
  qlc::parallel_for(states.size(), [&](std::size_t k) { states[k] = qlc::evolve(rho0, L, t_max * double(k) / double(steps)); });

  OutFile csv(out, "evolution.csv");
  write_csv_header(csv.os(), "evolve", cfg);
  csv.os() << "t,trace,parity,mean_n,edge_occupation\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    csv.os() << t_max * double(k) / double(steps) << ',' << states[k].trace().real() << ','
             << qlc::expectation(states[k], parity) << ',' << qlc::expectation(states[k], number) << ','
             << qlc::edge_occupation(states[k]) << '\n';
  }
  json summary{{"config", cfg}, {"dim", m.dim}, {"rows", states.size()},
               {"parity_initial", qlc::expectation(rho0, parity)},
               {"parity_final", qlc::expectation(states.back(), parity)}};
  if (m.params.kind == qlc::ModelKind::NoiseInduced && m.params.K() > 0.0) {
    summary["trace_distance_final_to_reconstruction"] =
        qlc::trace_distance(states.back(), qlc::conserved_reconstruction(rho0, m.params.K()));
  }
  write_json(out, "summary.json", summary);
  std::cout << "wrote " << states.size() << " rows to " << (out / "evolution.csv").string() << '\n';
  return 0;
}

// -------------------------------------------------------------------------- sde

int cmd_sde(const json& cfg, const std::string& out_dir) {
  const Fields f(cfg);
  qlc::SdeConfig c;
  c.kappa = f.rate("kappa", 1.0);
  c.delta = f.rate("delta", 1.0);
  c.omega0 = f.number("omega0", 10.0);
  c.dt = f.rate("dt", 2e-3);
  c.burn_in = f.integer("burn_in", 4000, 0);
  c.n_paths = f.integer("n_paths", 20000, 1);
  c.n_steps = f.integer("n_steps", 10000, 1);
  c.sample_every = f.integer("sample_every", 2000, 1);
  c.seed = static_cast<std::uint64_t>(f.integer("seed", 1, 0));
  c.coordinates = f.text("coordinates", "polar", {"polar", "cartesian"}) == "polar" ? qlc::Coordinates::Polar
                                                                                     : qlc::Coordinates::Cartesian;
  const long dump_cap = f.integer("dump_samples", 0, 0);
  c.validate();
  const fs::path out = prepare_out(out_dir, "sde", cfg);

  const qlc::SdeEnsembleResult res = qlc::simulate_ensemble(c);
  const double k = c.kappa, d = c.delta;
  const auto ks_r = qlc::ks_one_sample(res.r, [k, d](double r) { return qlc::rayleigh_cdf(r, k, d); });
  const auto ks_phi = qlc::ks_one_sample(res.phi, [](double p) { return p / (2.0 * std::numbers::pi); });
  const auto circ = qlc::circulation_classical(c, res);
  auto ks_json = [](const qlc::KsResult& r) {
    return json{{"statistic", r.statistic}, {"p_value", r.p_value}, {"critical_1pct", r.critical_1pct},
                {"passes_1pct", r.passes_1pct()}};
  };
  json summary{{"config", cfg},
               {"samples", res.summary.samples},
               {"diverged_paths", res.summary.diverged_paths},
               {"mean_r", res.summary.mean_r},
               {"mean_r_rayleigh", qlc::rayleigh_mean(k, d)},
               {"var_r", res.summary.var_r},
               {"var_r_rayleigh", qlc::rayleigh_variance(k, d)},
               {"mean_x2_plus_y2", res.summary.mean_x2_plus_y2},
               {"mean_x2_plus_y2_gaussian", 8.0 * k / d},
               {"ks_r_rayleigh", ks_json(ks_r)},
               {"ks_phi_uniform", ks_json(ks_phi)},
               {"circulation_empirical", circ.empirical},
               {"circulation_formula", circ.formula},
               {"stability_indicator", c.stability_indicator()},
               {"warnings", res.warnings}};
  write_json(out, "summary.json", summary);
  if (dump_cap > 0) {
    OutFile csv(out, "samples.csv");
    write_csv_header(csv.os(), "sde", cfg);
    csv.os() << "r,phi,x,y\n";
    const std::size_t n = std::min<std::size_t>(res.r.size(), static_cast<std::size_t>(dump_cap));
    for (std::size_t i = 0; i < n; ++i) {
      csv.os() << res.r[i] << ',' << res.phi[i] << ',' << res.x[i] << ',' << res.y[i] << '\n';
    }
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "samples " << res.summary.samples << ", mean_r " << res.summary.mean_r << ", circulation "
            << circ.empirical << " (formula " << circ.formula << ")\n";
  return 0;
}

// ----------------------------------------------------------------------- wigner

int cmd_wigner(const json& cfg, const std::string& out_dir) {
  const Fields f(cfg);
  const double K = f.ratio("K", 0.5), wp = f.weight("wp_plus", 0.55);
  const double h = f.rate("h", 0.05);
  const double tol = f.rate("boundary_tol", qlc::kBoundaryTol);
  if (!(h > 0.0)) throw ConfigError("config field 'h': must be positive");
  const double L = f.number("L", qlc::adequate_grid_extent(K, wp, h, tol));
  const qlc::ModelParams p = qlc::ModelParams::noise_induced(f.number("omega0", 10.0), f.rate("kappa_down", 1.0), K);
  const fs::path out = prepare_out(out_dir, "wigner", cfg);

  const qlc::WignerClosedForm wf(K, wp);
  const qlc::Grid g = qlc::Grid::square(L, h);
  const qlc::WignerField field = qlc::analyze_field(g, g.sample([&](double x, double y) { return wf.cartesian(x, y); }), p, tol);
  const qlc::FieldStats s = qlc::field_stats(field);

  OutFile csv(out, "wigner_field.csv");
  write_csv_header(csv.os(), "wigner", cfg);
  qlc::write_field_csv(csv.os(), field);
  write_json(out, "summary.json",
             {{"config", cfg}, {"L", L}, {"h", h}, {"points_per_axis", g.n},
              {"max_generator_residual", s.max_residual}, {"max_irreversible_current", s.max_irreversible},
              {"max_reversible_current", s.max_reversible}, {"irreversible_to_reversible", s.max_irreversible / s.max_reversible},
              {"max_reversible_divergence", s.max_reversible_divergence}, {"mass", s.mass}});
  std::cout << "max|j_irr|/max|j_rev| = " << s.max_irreversible / s.max_reversible << " on " << g.n << "x" << g.n
            << " grid\n";
  return 0;
}

// ----------------------------------------------------------------------- verify

int cmd_verify(const std::vector<std::string>& only, bool mutate, const std::string& out_dir) {
  qlc::SuiteOptions options;
  for (const auto& item : only) {
    std::stringstream ss(item);
    std::string key;
    while (std::getline(ss, key, ',')) {
      if (!key.empty()) options.only.push_back(key);
    }
  }
  options.mutate_circulation = mutate;
  json cfg{{"only", options.only}, {"mutate", mutate}};
  std::optional<fs::path> out;
  if (!out_dir.empty()) out = prepare_out(out_dir, "verify", cfg);

  json checks = json::array();
  std::vector<std::string> failures;
  qlc::run_acceptance(options, [&](const qlc::CheckResult& r) {
    std::cout << qlc::format_result(r) << std::flush;
    json metrics = json::array();
    for (const auto& m : r.metrics) {
      metrics.push_back({{"name", m.name}, {"value", nan_to_null(m.value)}, {"lo", nan_to_null(m.lo)},
                         {"hi", nan_to_null(m.hi)}, {"passed", m.passed}});
    }
    checks.push_back({{"id", r.id}, {"key", r.key}, {"title", r.title}, {"passed", r.passed()}, {"seconds", r.seconds},
                      {"metrics", metrics}, {"notes", r.notes}, {"error", r.error}});
    if (!r.passed()) failures.push_back(r.key);
  });
  if (out) write_json(*out, "verify.json", {{"config", cfg}, {"checks", checks}, {"failures", failures}});
  if (failures.empty()) {
    std::cout << "all acceptance checks passed\n";
    return 0;
  }
  std::cout << "failed:";
  for (const auto& k : failures) std::cout << ' ' << k;
  std::cout << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-induced quantum limit cycle toolkit"};
  app.require_subcommand(1);
  app.footer("Threads: set QLC_THREADS (default: hardware concurrency).");

  CommandSetup phase, steady, evolve, sde, wigner;
  auto* c_phase = app.add_subcommand("phase-diagram", "sweep (K, wp_plus) and classify steady-state phases");
  add_overrides(c_phase, phase,
                {{"K-min", "K_min", "lowest K"}, {"K-max", "K_max", "highest K"}, {"K-count", "K_count", "K grid points"},
                 {"wp-min", "wp_min", "lowest wp_plus"}, {"wp-max", "wp_max", "highest wp_plus"},
                 {"wp-count", "wp_count", "wp_plus grid points"}});

  auto* c_steady = app.add_subcommand("steady", "numeric vs closed-form steady-state report");
  auto steady_flags = kModelFlags;
  steady_flags.push_back({"wp-plus", "wp_plus", "even-sector weight"});
  add_overrides(c_steady, steady, steady_flags);

  auto* c_evolve = app.add_subcommand("evolve", "propagate a density matrix under the Liouvillian");
  auto evolve_flags = kModelFlags;
  evolve_flags.insert(evolve_flags.end(), {{"initial", "initial.type", "coherent, vacuum or fock"},
                                           {"alpha-re", "initial.alpha_re", "coherent amplitude, real part"},
                                           {"alpha-im", "initial.alpha_im", "coherent amplitude, imaginary part"},
                                           {"n", "initial.n", "Fock level for initial = fock"},
                                           {"t-max", "t_max", "final time"},
                                           {"steps", "steps", "output intervals"}});
  add_overrides(c_evolve, evolve, evolve_flags);

  auto* c_sde = app.add_subcommand("sde", "classical multiplicative-noise ensemble");
  add_overrides(c_sde, sde,
                {{"kappa", "kappa", "noise strength"}, {"delta", "delta", "nonlinear damping"},
                 {"omega0", "omega0", "rotation frequency"}, {"dt", "dt", "time step"},
                 {"burn-in", "burn_in", "discarded steps per path"}, {"n-paths", "n_paths", "paths"},
                 {"n-steps", "n_steps", "recorded steps per path"}, {"sample-every", "sample_every", "recording stride"},
                 {"seed", "seed", "RNG seed"}, {"coordinates", "coordinates", "polar or cartesian"},
                 {"dump-samples", "dump_samples", "write up to this many samples to samples.csv"}});

  auto* c_wigner = app.add_subcommand("wigner", "closed-form Wigner field, generator residual and current split");
  add_overrides(c_wigner, wigner,
                {{"K", "K", "gain/loss ratio"}, {"wp-plus", "wp_plus", "even-sector weight"},
                 {"omega0", "omega0", "oscillator frequency"}, {"kappa-down", "kappa_down", "two-photon loss rate"},
                 {"spacing", "h", "grid spacing"}, {"L", "L", "half-width of the square grid"},
                 {"boundary-tol", "boundary_tol", "allowed edge/peak ratio of the field"}});

  auto* c_verify = app.add_subcommand("verify", "run the acceptance suite");
  std::vector<std::string> only;
  bool mutate = false;
  std::string verify_out;
  c_verify->add_option("--only", only, "comma-separated check keys")->delimiter(',');
  c_verify->add_flag("--mutate", mutate, "self-test: corrupt the steady circulation formula");
  c_verify->add_option("--out", verify_out, "directory for verify.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_phase) return cmd_phase_diagram(resolve_config(phase), phase.out_dir);
    if (*c_steady) return cmd_steady(resolve_config(steady), steady.out_dir);
    if (*c_evolve) return cmd_evolve(resolve_config(evolve), evolve.out_dir);
    if (*c_sde) return cmd_sde(resolve_config(sde), sde.out_dir);
    if (*c_wigner) return cmd_wigner(resolve_config(wigner), wigner.out_dir);
    if (*c_verify) return cmd_verify(only, mutate, verify_out);
  } catch (const ConfigError& e) {
    std::cerr << "qlc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qlc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
