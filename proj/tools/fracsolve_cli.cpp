// fracsolve command line front end. Talks to the library only through the C
// interface in fracsolve/fracsolve.h.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracsolve/fracsolve.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitSolver = 3;
constexpr int kExitUnstable = 4;
constexpr int kExitInconclusive = 5;

constexpr double kDefaultTol = 1e-6;
constexpr std::uint64_t kDefaultQMax = 100000;
constexpr double kDefaultSimpsonTol = 1e-10;
constexpr std::size_t kResidualSkip = 1;

/// Input file or field problem; maps to exit code 2.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Library failure; maps to exit code 3 and names the status variant.
struct SolverError : std::runtime_error {
  explicit SolverError(fs_status status) : std::runtime_error(describe(status)) {}

  static std::string describe(fs_status status) {
    const std::string name = fs_status_name(status);
    const std::string message = fs_last_error();
    return message.rfind(name, 0) == 0 ? message : name + ": " + message;
  }
};

void check(fs_status status) {
  if (status != FS_OK) throw SolverError(status);
}

struct TrajectoryDeleter {
  void operator()(fs_trajectory* t) const { fs_trajectory_destroy(t); }
};
struct ProblemDeleter {
  void operator()(fs_problem* p) const { fs_problem_destroy(p); }
};
using TrajectoryPtr = std::unique_ptr<fs_trajectory, TrajectoryDeleter>;
using ProblemPtr = std::unique_ptr<fs_problem, ProblemDeleter>;

// 17 significant digits, '.' separator regardless of locale.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SchemaError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": invalid JSON (" +
                      e.what() + ")");
  }
}

// ---- field readers ----------------------------------------------------------

const json& field(const json& obj, const std::string& name) {
  if (!obj.is_object()) throw SchemaError("top level must be a JSON object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw SchemaError("field '" + name + "': missing");
  return *it;
}

double read_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError("field '" + where + "': expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError("field '" + where + "': must be finite");
  return d;
}

double read_positive(const json& v, const std::string& where) {
  const double d = read_number(v, where);
  if (!(d > 0.0)) throw SchemaError("field '" + where + "': must be positive");
  return d;
}

std::vector<double> read_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError("field '" + where + "': expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Row-major n*n.
std::vector<double> read_square(const json& v, const std::string& where, std::size_t& n) {
  if (!v.is_array() || v.empty()) throw SchemaError("field '" + where + "': expected a non-empty array of rows");
  n = v.size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = read_vector(v[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != n) {
      throw SchemaError("field '" + where + "[" + std::to_string(i) + "]': expected " + std::to_string(n) +
                        " entries (matrix must be square)");
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::optional<fs_order> parse_odd_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return std::nullopt;
  std::uint64_t num = 0, den = 0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  auto r1 = std::from_chars(b, b + slash, num);
  auto r2 = std::from_chars(b + slash + 1, e, den);
  if (r1.ec != std::errc() || r1.ptr != b + slash || r2.ec != std::errc() || r2.ptr != e || den == 0) {
    return std::nullopt;
  }
  if (num % 2 == 1 && den % 2 == 1 && num <= den) {
    fs_order order;
    check(fs_order_from_pq((num - 1) / 2, (den - 1) / 2, &order));
    return order;
  }
  return std::nullopt;
}

// A number, or a string "num/den". Odd/odd fractions are taken exactly; any
// other value goes through the odd-rational approximation.
fs_order read_order(const json& v, const std::string& where, double tol, std::uint64_t q_max) {
  double alpha = 0.0;
  if (v.is_string()) {
    const auto text = v.get<std::string>();
    if (auto exact = parse_odd_fraction(text)) return *exact;
    const auto slash = text.find('/');
    try {
      alpha = slash == std::string::npos ? std::stod(text)
                                         : std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
    } catch (const std::exception&) {
      throw SchemaError("field '" + where + "': expected a number or \"num/den\", got \"" + text + "\"");
    }
  } else {
    alpha = read_number(v, where);
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw SchemaError("field '" + where + "': alpha must lie in (0, 1]");
  fs_order order;
  check(fs_approximate_order(alpha, tol, q_max, &order));
  return order;
}

fs_quadrature read_method(const json& v, const std::string& where) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "rectangle") return FS_RECTANGLE;
    if (s == "simpson") return FS_SIMPSON;
  }
  throw SchemaError("field '" + where + "': expected \"rectangle\" or \"simpson\"");
}

fs_quadrature parse_method_flag(const std::string& s) { return read_method(json(s), "--method"); }

// ---- solve ------------------------------------------------------------------

struct SolveSpec {
  std::size_t n = 0;
  std::vector<double> A;
  std::vector<double> x0;
  double t0 = 0.0;
  fs_order order{};
  std::vector<double> times;
  fs_solve_config config{};
  double tol = kDefaultTol;
  std::uint64_t q_max = kDefaultQMax;
  std::optional<std::vector<double>> eps_ladder;
  std::vector<double> B;
};

std::vector<double> grid_from_range(double start, double end, double step, double t0) {
  std::vector<double> times;
  const auto count = static_cast<long long>(std::floor((end - start) / step + 1e-9));
  for (long long k = 0; k <= count; ++k) {
    const double t = start + static_cast<double>(k) * step;
    // The representation is singular at t0 itself.
    if (t > t0) times.push_back(t);
  }
  return times;
}

SolveSpec read_solve_spec(const json& doc, const std::optional<std::string>& method_flag,
                          const std::optional<double>& h_flag) {
  SolveSpec spec;
  spec.A = read_square(field(doc, "A"), "A", spec.n);
  spec.x0 = read_vector(field(doc, "x0"), "x0");
  if (spec.x0.size() != spec.n) {
    throw SchemaError("field 'x0': expected " + std::to_string(spec.n) + " entries to match A");
  }
  spec.t0 = doc.contains("t0") ? read_number(doc["t0"], "t0") : 0.0;
  if (doc.contains("tol")) spec.tol = read_positive(doc["tol"], "tol");
  if (doc.contains("q_max")) {
    if (!doc["q_max"].is_number_unsigned() || doc["q_max"].get<std::uint64_t>() < 1) {
      throw SchemaError("field 'q_max': expected a positive integer");
    }
    spec.q_max = doc["q_max"].get<std::uint64_t>();
  }
  spec.order = read_order(field(doc, "alpha"), "alpha", spec.tol, spec.q_max);

  fs_solve_config_default(&spec.config);
  if (doc.contains("method")) spec.config.quadrature = read_method(doc["method"], "method");
  if (method_flag) spec.config.quadrature = parse_method_flag(*method_flag);
  if (doc.contains("simpson_tol")) spec.config.simpson_tol = read_positive(doc["simpson_tol"], "simpson_tol");
  if (doc.contains("sum_range")) {
    const auto& v = doc["sum_range"];
    if (v == "from_zero") {
      spec.config.sum_range = FS_SUM_FROM_ZERO;
    } else if (v == "from_one") {
      spec.config.sum_range = FS_SUM_FROM_ONE;
    } else {
      throw SchemaError("field 'sum_range': expected \"from_zero\" or \"from_one\"");
    }
  }

  const json& grid = field(doc, "grid");
  if (!grid.is_object()) throw SchemaError("field 'grid': expected an object");
  if (grid.contains("times")) {
    spec.times = read_vector(grid["times"], "grid.times");
    if (h_flag) spec.config.step = *h_flag;
  } else {
    const double start = read_number(field(grid, "start"), "grid.start");
    const double end = read_number(field(grid, "end"), "grid.end");
    const double step = h_flag ? *h_flag : read_positive(field(grid, "step"), "grid.step");
    if (!(step > 0.0)) throw SchemaError("flag '--h': must be positive");
    if (!(end >= start)) throw SchemaError("field 'grid.end': must not precede grid.start");
    spec.times = grid_from_range(start, end, step, spec.t0);
    spec.config.step = step;
  }
  if (spec.times.empty()) throw SchemaError("field 'grid': no grid time lies after t0");
  for (std::size_t k = 0; k < spec.times.size(); ++k) {
    if (!(spec.times[k] > spec.t0) || (k > 0 && !(spec.times[k] > spec.times[k - 1]))) {
      throw SchemaError("field 'grid': times must be strictly increasing and after t0");
    }
  }

  if (doc.contains("eps_ladder")) {
    spec.eps_ladder = read_vector(doc["eps_ladder"], "eps_ladder");
    if (spec.eps_ladder->size() < 2) throw SchemaError("field 'eps_ladder': needs at least two entries");
    if (doc.contains("B")) {
      std::size_t nb = 0;
      spec.B = read_square(doc["B"], "B", nb);
      if (nb != spec.n) throw SchemaError("field 'B': dimension must match A");
    } else {
      // diag(0, 1, ..., n-1) splits a repeated eigenvalue of a triangular A.
      spec.B.assign(spec.n * spec.n, 0.0);
      for (std::size_t i = 0; i < spec.n; ++i) spec.B[i * spec.n + i] = static_cast<double>(i);
    }
  } else if (doc.contains("B")) {
    throw SchemaError("field 'B': only meaningful together with eps_ladder");
  }
  return spec;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw SchemaError("failed writing '" + path + "'");
}

void print_banner(const std::string& command, double tol, std::uint64_t q_max, double simpson_tol,
                  const fs_order* order) {
  std::cerr << "fracsolve " << command << ": order tol=" << format_double(tol) << " q_max=" << q_max
            << " simpson_tol=" << format_double(simpson_tol) << " residual skip=" << kResidualSkip << "\n";
  if (order != nullptr) {
    std::cerr << "  alpha=" << format_double(order->alpha) << " -> (2p+1)/(2q+1) = " << (2 * order->p + 1) << "/"
              << (2 * order->q + 1) << " (error " << format_double(order->achieved_error) << ")\n";
  }
}

int cmd_solve(const std::string& config_path, const std::string& out_path, const std::optional<std::string>& method,
              const std::optional<double>& h, bool verbose) {
  const SolveSpec spec = read_solve_spec(load_json(config_path), method, h);
  if (verbose) print_banner("solve", spec.tol, spec.q_max, spec.config.simpson_tol, &spec.order);

  fs_problem* raw_problem = nullptr;
  check(fs_problem_create(spec.n, spec.A.data(), spec.x0.data(), spec.t0, &spec.order, &raw_problem));
  ProblemPtr problem(raw_problem);

  fs_trajectory* raw_traj = nullptr;
  if (spec.eps_ladder) {
    std::vector<double> gaps(spec.eps_ladder->size() - 1);
    check(fs_solve_perturbed(problem.get(), spec.B.data(), spec.eps_ladder->data(), spec.eps_ladder->size(),
                             spec.times.data(), spec.times.size(), &spec.config, &raw_traj, gaps.data()));
    if (verbose) {
      for (std::size_t i = 0; i < gaps.size(); ++i) std::cerr << "  ladder gap " << i << ": " << format_double(gaps[i]) << "\n";
    }
  } else {
    check(fs_solve(problem.get(), spec.times.data(), spec.times.size(), &spec.config, &raw_traj));
  }
  TrajectoryPtr traj(raw_traj);

  const std::size_t K = fs_trajectory_length(traj.get());
  const std::size_t n = fs_trajectory_dim(traj.get());
  const double* times = fs_trajectory_times(traj.get());
  const double* states = fs_trajectory_states(traj.get());
  std::string csv = "t";
  for (std::size_t i = 0; i < n; ++i) csv += ",x" + std::to_string(i + 1);
  csv += "\n";
  for (std::size_t k = 0; k < K; ++k) {
    csv += format_double(times[k]);
    for (std::size_t i = 0; i < n; ++i) csv += "," + format_double(states[k * n + i]);
    csv += "\n";
  }
  write_file(out_path, csv);
  return kExitOk;
}

// ---- table ------------------------------------------------------------------

int cmd_table(const std::string& config_path, const std::string& out_path, const std::optional<std::string>& method,
              const std::optional<double>& h_flag, bool verbose) {
  const json doc = load_json(config_path);
  const double a = read_number(field(doc, "a"), "a");
  const double tol = doc.contains("tol") ? read_positive(doc["tol"], "tol") : kDefaultTol;
  const std::uint64_t q_max = kDefaultQMax;
  const double simpson_tol = doc.contains("simpson_tol") ? read_positive(doc["simpson_tol"], "simpson_tol")
                                                         : kDefaultSimpsonTol;

  const json& alphas = field(doc, "alphas");
  if (!alphas.is_array() || alphas.empty()) throw SchemaError("field 'alphas': expected a non-empty array");
  std::vector<fs_order> orders;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    orders.push_back(read_order(alphas[i], "alphas[" + std::to_string(i) + "]", tol, q_max));
  }

  const auto interval = read_vector(field(doc, "interval"), "interval");
  if (interval.size() != 2 || !(interval[1] > interval[0])) {
    throw SchemaError("field 'interval': expected [t0, t_end] with t_end > t0");
  }
  const double h = h_flag ? *h_flag : read_positive(field(doc, "h"), "h");
  if (!(h > 0.0)) throw SchemaError("flag '--h': must be positive");
  fs_quadrature backend = doc.contains("method") ? read_method(doc["method"], "method") : FS_RECTANGLE;
  if (method) backend = parse_method_flag(*method);

  if (verbose) {
    print_banner("table", tol, q_max, simpson_tol, nullptr);
    std::cerr << "  a=" << format_double(a) << " interval=[" << format_double(interval[0]) << ", "
              << format_double(interval[1]) << "] h=" << format_double(h)
              << " method=" << (backend == FS_RECTANGLE ? "rectangle" : "simpson") << "\n";
  }

  std::vector<fs_study_row> rows(orders.size());
  check(fs_convergence_study(a, orders.data(), orders.size(), interval[0], interval[1], h, backend, simpson_tol,
                             rows.data()));
  std::string csv = "alpha,sup_dev,nev\n";
  for (const auto& row : rows) {
    const double value = static_cast<double>(2 * row.order.p + 1) / static_cast<double>(2 * row.order.q + 1);
    csv += format_double(value) + "," + format_double(row.sup_deviation) + "," + format_double(row.nev) + "\n";
  }
  write_file(out_path, csv);
  return kExitOk;
}

// ---- mlf / stability ----------------------------------------------------------

int cmd_mlf(double alpha, double beta, double z) {
  double value = 0.0;
  check(fs_mittag_leffler(alpha, beta, z, &value));
  std::cout << format_double(value) << "\n";
  return kExitOk;
}

int cmd_stability(const std::string& config_path, bool verbose) {
  const json doc = load_json(config_path);
  std::size_t n = 0;
  const auto A = read_square(field(doc, "A"), "A", n);
  fs_stability verdict = FS_INCONCLUSIVE;
  std::vector<double> eigenvalues(n);
  std::size_t count = 0;
  int non_real = 0;
  check(fs_stability_verdict(n, A.data(), &verdict, eigenvalues.data(), &count, &non_real));
  std::cout << fs_stability_name(verdict) << "\n";
  if (verbose) {
    if (non_real != 0) {
      std::cerr << "  spectrum: non-real\n";
    } else {
      std::cerr << "  eigenvalues:";
      for (std::size_t i = 0; i < count; ++i) std::cerr << " " << format_double(eigenvalues[i]);
      std::cerr << "\n";
    }
  }
  switch (verdict) {
    case FS_STABLE: return kExitOk;
    case FS_UNSTABLE: return kExitUnstable;
    case FS_INCONCLUSIVE: return kExitInconclusive;
  }
  return kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for D^alpha x = A x with constant A and odd-rational order alpha in (0, 1]"};
  // --h is the grid step, so help keeps only its long form.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose,-v", verbose, "Print defaults and resolved parameters to stderr");

  std::string config_path, out_path;
  std::string method_text;
  double h_value = 0.0;

  auto* solve = app.add_subcommand("solve", "Solve a problem from a JSON spec and write a CSV trajectory");
  solve->add_option("--config", config_path, "Problem JSON")->required();
  solve->add_option("--out", out_path, "Output CSV")->required();
  auto* solve_method = solve->add_option("--method", method_text, "rectangle | simpson");
  auto* solve_h = solve->add_option("--h", h_value, "Grid step override");
  solve->add_flag("--verbose,-v", verbose, "Print defaults and resolved parameters to stderr");

  auto* table = app.add_subcommand("table", "Convergence table: alpha, sup deviation from exp, residual nev");
  table->add_option("--config", config_path, "Case JSON")->required();
  table->add_option("--out", out_path, "Output CSV")->required();
  auto* table_method = table->add_option("--method", method_text, "rectangle | simpson");
  auto* table_h = table->add_option("--h", h_value, "Grid step override");
  table->add_flag("--verbose,-v", verbose, "Print defaults and resolved parameters to stderr");

  double ml_alpha = 1.0, ml_beta = 1.0, ml_z = 0.0;
  auto* mlf = app.add_subcommand("mlf", "Evaluate the Mittag-Leffler function E_{alpha,beta}(z)");
  mlf->add_option("alpha", ml_alpha, "alpha > 0")->required();
  mlf->add_option("beta", ml_beta, "beta")->required();
  mlf->add_option("z", ml_z, "argument, |z| <= 30")->required();

  auto* stability = app.add_subcommand("stability", "Stability verdict from the spectrum of A");
  stability->add_option("--config", config_path, "Problem JSON (only A is read)")->required();
  stability->add_flag("--verbose,-v", verbose, "Print the spectrum to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    if (*solve || *table) {
      std::optional<std::string> method;
      std::optional<double> h;
      if ((*solve && solve_method->count() > 0) || (*table && table_method->count() > 0)) method = method_text;
      if ((*solve && solve_h->count() > 0) || (*table && table_h->count() > 0)) h = h_value;
      return *solve ? cmd_solve(config_path, out_path, method, h, verbose)
                    : cmd_table(config_path, out_path, method, h, verbose);
    }
    if (*mlf) return cmd_mlf(ml_alpha, ml_beta, ml_z);
    if (*stability) return cmd_stability(config_path, verbose);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitSchema;
}
