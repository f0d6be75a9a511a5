#include "qmetro/cli.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmetro/bounds.hpp"
#include "qmetro/strategies.hpp"

namespace qmetro::cli {

using json = nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::dimension:
    case ErrorKind::constraint: return exit_usage;
    case ErrorKind::resource: return exit_resource;
    case ErrorKind::numeric: return exit_failure;
  }
  return exit_failure;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

struct Config {
  std::string command;
  std::string model;
  std::optional<double> eta;
  std::optional<double> eta_min, eta_max;
  std::optional<std::size_t> points;
  std::size_t n = 1;
  std::size_t n_max = 4;
  std::string scheme;
  std::string method;
  std::size_t ancilla = 0;
  int restarts = SeesawOptions{}.restarts;
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::size_t pad = 0;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string out;
  std::string sigma;
};

// Rows carry every field; `columns` picks what the CSV shows.
struct Output {
  std::vector<std::string> columns;
  std::vector<json> rows;
  bool converged = true;
};

json config_json(const Config& c) {
  auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["eta"] = opt(c.eta);
  j["eta_min"] = opt(c.eta_min);
  j["eta_max"] = opt(c.eta_max);
  j["points"] = opt(c.points);
  j["n"] = c.n;
  j["n_max"] = c.n_max;
  j["scheme"] = c.scheme;
  j["method"] = c.method;
  j["ancilla"] = c.ancilla;
  j["restarts"] = c.restarts;
  j["tol"] = opt(c.tol);
  j["max_iters"] = opt(c.max_iters);
  j["pad"] = c.pad;
  j["seed"] = opt(c.seed);
  j["format"] = c.format;
  j["sigma"] = c.sigma;
  return j;
}

StrategyOptions strategy_options(const Config& c) {
  StrategyOptions o;
  o.seesaw.restarts = c.restarts;
  if (c.tol) o.seesaw.tol = *c.tol;
  if (c.max_iters) {
    o.seesaw.max_iters = *c.max_iters;
    o.bounds.max_iters = *c.max_iters;
  }
  if (c.seed) o.seesaw.seed = *c.seed;
  o.ancilla_dim = c.ancilla;
  return o;
}

BoundOptions bound_options(const Config& c) {
  BoundOptions o;
  if (c.tol) o.grad_tol = *c.tol;
  if (c.max_iters) o.max_iters = *c.max_iters;
  return o;
}

double require_eta(const Config& c) {
  if (!c.eta) throw DomainError("--eta is required");
  return *c.eta;
}

json point_json(const StrategyPoint& p) {
  json j;
  j["model"] = std::string(to_string(p.model));
  j["eta"] = p.eta;
  j["N"] = p.n;
  j["scheme"] = std::string(to_string(p.scheme));
  j["method"] = std::string(to_string(p.method));
  j["value"] = p.value;
  j["best_n"] = p.best_n ? json(*p.best_n) : json(nullptr);
  j["converged"] = p.converged;
  return j;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw DimensionError("sigma file: '" + name + "' must be a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DimensionError("sigma file: '" + name + "' has ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw DomainError("sigma file: entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

StateFamily load_sigma(const std::string& path) {
  if (path.empty()) throw DomainError("--scheme simulation needs --sigma <file>");
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open sigma file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("sigma file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("rho") || !j.contains("rho_dot")) {
    throw DomainError("sigma file needs keys 'rho' and 'rho_dot'");
  }
  return {matrix_from_json(j["rho"], "rho"), matrix_from_json(j["rho_dot"], "rho_dot")};
}

Output cmd_qfi(Config& c) {
  const NoiseModel model = parse_noise_model(c.model);
  const double eta = require_eta(c);
  if (c.scheme.empty()) c.scheme = "ii";
  const Scheme scheme = parse_scheme(c.scheme);
  if (c.method.empty()) {
    switch (scheme) {
      case Scheme::sequential:
      case Scheme::parallel:
      case Scheme::ancilla: c.method = "seesaw"; break;
      default: c.method = "formula"; break;
    }
  }
  const Method method = parse_method(c.method);
  if (!valid_combination(scheme, method)) {
    throw DomainError("scheme " + c.scheme + " has no method " + c.method);
  }
  if (c.ancilla != 0 && scheme != Scheme::ancilla) {
    throw DomainError("--ancilla applies to scheme iii only");
  }
  const StrategyOptions opts = strategy_options(c);

  StrategyPoint p{};
  switch (scheme) {
    case Scheme::sequential: p = sequential_point(model, eta, c.n, method, opts); break;
    case Scheme::parallel: p = parallel_qfi(model, eta, c.n, false, method, opts); break;
    case Scheme::ancilla: p = parallel_qfi(model, eta, c.n, true, method, opts); break;
    case Scheme::adaptive_bound: p = adaptive_bound_point(model, eta, c.n, opts); break;
    case Scheme::ancilla_free:
      p = make_point(model, eta, c.n, scheme, method, ancilla_free_bound(eta, c.n));
      break;
    case Scheme::universal:
      p = make_point(model, eta, c.n, scheme, method, universal_bound(eta, c.n));
      break;
  }
  Output o;
  o.columns = {"model", "eta", "N", "scheme", "method", "value", "best_n", "converged"};
  o.rows.push_back(point_json(p));
  o.converged = p.converged;
  return o;
}

Output cmd_bound(Config& c) {
  if (c.scheme.empty()) c.scheme = std::string(scheme_tag::asymptotic_beta0);
  const BoundOptions opts = bound_options(c);
  BoundReport rep;
  std::string model_name;
  std::optional<double> eta;

  if (c.scheme == scheme_tag::simulation) {
    const StateFamily sigma = load_sigma(c.sigma);
    rep.scheme = c.scheme;
    rep.n = c.n;
    rep.value = simulation_bound(sigma, c.n);
    rep.converged = true;
  } else {
    const NoiseModel model = parse_noise_model(c.model);
    model_name = std::string(to_string(model));
    eta = require_eta(c);
    const ChannelFamily ch = make_channel(model, *eta);
    if (c.n < 1) throw DomainError("--n must be at least 1");
    if (c.scheme == scheme_tag::asymptotic_beta0) {
      rep = minimize_beta0(ch, c.pad, opts);
      rep.value *= static_cast<double>(c.n);
      rep.n = c.n;
    } else if (c.scheme == scheme_tag::finite_par) {
      rep = minimize_finite_parallel(ch, c.n, c.pad, opts);
    } else if (c.scheme == scheme_tag::finite_adaptive) {
      rep = minimize_finite_adaptive(ch, c.n, c.pad, opts);
    } else if (c.scheme == scheme_tag::extended_exact) {
      rep = extended_channel_qfi(tensor_power(ch, c.n, opts.dim_cap), c.pad, opts);
      rep.n = c.n;
    } else {
      throw DomainError("unknown bound scheme '" + c.scheme +
                        "' (expected asymptotic-beta0, finite-par, finite-adaptive, "
                        "extended-exact, simulation)");
    }
  }

  json j;
  j["model"] = model_name;
  j["eta"] = eta ? json(*eta) : json(nullptr);
  j["N"] = rep.n;
  j["scheme"] = rep.scheme;
  j["value"] = rep.value;
  j["residual_beta_norm"] = rep.residual_beta_norm;
  j["converged"] = rep.converged;
  j["grad_norm"] = rep.grad_norm;
  j["pad"] = rep.pad;
  j["iterations"] = rep.iterations;
  j["generator"] = matrix_json(rep.generator.h);

  Output o;
  o.columns = {"model", "eta", "N", "scheme", "value", "residual_beta_norm",
               "converged", "grad_norm", "pad", "iterations"};
  o.rows.push_back(std::move(j));
  o.converged = rep.converged;
  return o;
}

Output cmd_fig3(Config& c) {
  std::vector<double> grid;
  if (c.eta_min || c.eta_max || c.points) {
    const double lo = c.eta_min.value_or(0.01);
    const double hi = c.eta_max.value_or(0.99);
    const std::size_t count = c.points.value_or(99);
    if (count < 1) throw DomainError("--points must be at least 1");
    if (count > 1 && !(lo < hi)) throw DomainError("--eta-min must be below --eta-max");
    for (std::size_t i = 0; i < count; ++i) {
      grid.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                                static_cast<double>(count - 1));
    }
  } else {
    grid = default_eta_grid();
  }
  const auto shared = ratio_curve(NoiseModel::dephasing, grid);
  const auto ad = ratio_curve(NoiseModel::amplitude_damping, grid);
  Output o;
  o.columns = {"eta", "ratio_deph_erasure", "ratio_ampdamp_ceiling"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    json j;
    j["eta"] = shared[i].eta;
    j["ratio_deph_erasure"] = shared[i].ratio;
    j["ratio_ampdamp_ceiling"] = *ad[i].ceiling;
    o.rows.push_back(std::move(j));
  }
  return o;
}

Output cmd_fig4(Config& c) {
  if (c.model.empty()) c.model = std::string(to_string(NoiseModel::amplitude_damping));
  if (parse_noise_model(c.model) != NoiseModel::amplitude_damping) {
    throw DomainError("fig4 is defined for amplitude-damping only");
  }
  if (!c.eta) c.eta = 0.5;
  const auto table = figure4_table(*c.eta, c.n_max, strategy_options(c));
  Output o;
  o.columns = {"N", "f_ii", "f_iii", "knysh", "universal"};
  for (std::size_t i = 0; i + 3 < table.size(); i += 4) {
    json j;
    j["N"] = table[i].n;
    j["f_ii"] = table[i].value;
    j["f_iii"] = table[i + 1].value;
    j["knysh"] = table[i + 2].value;
    j["universal"] = table[i + 3].value;
    for (std::size_t k = 0; k < 4; ++k) o.converged = o.converged && table[i + k].converged;
    o.rows.push_back(std::move(j));
  }
  return o;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_output(const Config& c, const Output& o, std::ostream& os) {
  if (c.format == "json") {
    json doc;
    doc["config"] = config_json(c);
    doc["results"] = o.rows;
    os << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < o.columns.size(); ++i) os << (i ? "," : "") << o.columns[i];
  os << '\n';
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < o.columns.size(); ++i) {
      os << (i ? "," : "") << csv_cell(row[o.columns[i]]);
    }
    os << '\n';
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("QMETRO_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || *end != '\0' || *s == '-') {
    throw DomainError("QMETRO_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

void add_solver_flags(CLI::App* sub, Config& c) {
  sub->add_option("--restarts", c.restarts, "see-saw restarts")->check(CLI::PositiveNumber);
  sub->add_option("--tol", c.tol,
                  "solver tolerance (see-saw stopping / bound gradient certificate)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", c.max_iters, "iteration budget")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "see-saw seed (default: QMETRO_SEED, then built-in)");
}

void add_io_flags(CLI::App* sub, Config& c) {
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "write data here instead of standard output");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Quantum Fisher information and precision bounds for noisy phase estimation",
               "qmetro"};
  app.require_subcommand(1);

  auto* qfi = app.add_subcommand("qfi", "QFI of one strategy point");
  qfi->add_option("--model", c.model, "dephasing | erasure | amplitude-damping")->required();
  qfi->add_option("--eta", c.eta, "noise parameter")->required();
  qfi->add_option("--n", c.n, "number of probes");
  qfi->add_option("--scheme", c.scheme, "i | ii | iii | iv-bound | knysh | universal");
  qfi->add_option("--method", c.method, "closed-form | seesaw | kraus-min | formula");
  qfi->add_option("--ancilla", c.ancilla, "ancilla dimension for scheme iii (0: Kraus count)");
  add_solver_flags(qfi, c);
  add_io_flags(qfi, c);

  auto* bound = app.add_subcommand("bound", "precision bound from Kraus minimisation");
  bound->add_option("--model", c.model, "dephasing | erasure | amplitude-damping");
  bound->add_option("--eta", c.eta, "noise parameter");
  bound->add_option("--n", c.n, "number of probes");
  bound->add_option("--scheme", c.scheme,
                    "asymptotic-beta0 | finite-par | finite-adaptive | extended-exact | "
                    "simulation");
  bound->add_option("--pad", c.pad, "zero Kraus operators appended before minimising");
  bound->add_option("--sigma", c.sigma, "JSON file with 'rho' and 'rho_dot' (simulation)");
  add_solver_flags(bound, c);
  add_io_flags(bound, c);

  auto* fig3 = app.add_subcommand("fig3", "parallel / sequential advantage ratio over eta");
  fig3->add_option("--eta-min", c.eta_min, "first grid point");
  fig3->add_option("--eta-max", c.eta_max, "last grid point");
  fig3->add_option("--points", c.points, "grid size");
  add_io_flags(fig3, c);

  auto* fig4 = app.add_subcommand("fig4", "amplitude-damping table for N = 1..n-max");
  fig4->add_option("--model", c.model, "amplitude-damping");
  fig4->add_option("--eta", c.eta, "noise parameter (default 0.5)");
  fig4->add_option("--n-max", c.n_max, "largest N");
  add_solver_flags(fig4, c);
  add_io_flags(fig4, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (!c.seed) c.seed = env_seed();
    Output o;
    if (qfi->parsed()) {
      c.command = "qfi";
      o = cmd_qfi(c);
    } else if (bound->parsed()) {
      c.command = "bound";
      o = cmd_bound(c);
    } else if (fig3->parsed()) {
      c.command = "fig3";
      o = cmd_fig3(c);
    } else {
      c.command = "fig4";
      o = cmd_fig4(c);
    }

    if (c.out.empty()) {
      write_output(c, o, out);
    } else {
      std::ostringstream buf;
      write_output(c, o, buf);
      std::ofstream file(c.out, std::ios::binary);
      if (!(file << buf.str())) {
        err << "error: cannot write '" << c.out << "'\n";
        return exit_failure;
      }
    }
    if (!o.converged) {
      err << "warning: a solver did not meet its convergence criterion\n";
      return exit_not_converged;
    }
    return exit_ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace qmetro::cli
