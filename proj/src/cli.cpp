#include "funk/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "funk/coefficients.hpp"
#include "funk/error.hpp"
#include "funk/inversion.hpp"
#include "funk/io.hpp"
#include "funk/phantoms.hpp"
#include "funk/verify.hpp"

namespace funk {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string phantom;
  std::string input;
  std::string pole = "0,0,1";
  std::string point = "0,0,1";
  int nu_steps = 256;
  int tau_steps = 64;
  int circle_nodes = kDefaultCircleNodes;
  int profile_tau = kDefaultProfileTauCount;
  int gauss_order = kDefaultGaussOrder;
  int n = 0;
  bool automatic = false;
  double tol = 1e-8;
  int cap = 20;
  int kmax = kDefaultKmax;
  double limit = std::numeric_limits<double>::max();
  int samples = 0;
  std::string output;
  std::string format = "csv";
  std::string suite = "all";
  int trials = 100;
  std::uint64_t seed = 2024;
  int n_max = 20;
  std::string corrupt;
};

UnitVector parse_vector(const std::string& text, const std::string& flag) {
  double v[3] = {0.0, 0.0, 0.0};
  const char* p = text.data();
  const char* end = p + text.size();
  for (int i = 0; i < 3; ++i) {
    const auto res = std::from_chars(p, end, v[i]);
    if (res.ec != std::errc()) throw UsageError(flag + ": expected x,y,z, got '" + text + "'");
    p = res.ptr;
    if (i < 2) {
      if (p == end || *p != ',') throw UsageError(flag + ": expected x,y,z, got '" + text + "'");
      ++p;
    }
  }
  if (p != end) throw UsageError(flag + ": expected x,y,z, got '" + text + "'");
  try {
    return UnitVector(v[0], v[1], v[2]);
  } catch (const Error&) {
    throw UsageError(flag + ": zero vector");
  }
}

void require_count(int value, const std::string& flag) {
  if (value < 8) throw UsageError(flag + " must be >= 8 (got " + std::to_string(value) + ")");
}

// Appends key=value lines of --config for flags absent from the command line.
void apply_config(std::vector<std::string>& tokens) {
  std::string path;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "--config") {
      if (i + 1 >= tokens.size()) throw UsageError("--config needs a file");
      path = tokens[i + 1];
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (tokens[i].rfind("--config=", 0) == 0) {
      path = tokens[i].substr(9);
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& t : tokens) present = present || t == flag || t.rfind(flag + "=", 0) == 0;
    if (present) continue;
    if (key == "auto") {
      if (value == "true" || value == "1") tokens.push_back(flag);
      continue;
    }
    tokens.push_back(flag);
    tokens.push_back(value);
  }
}

void set_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("FUNK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

Phantom resolve_phantom(const std::string& spec) {
  try {
    return make_phantom(spec);
  } catch (const Error& e) {
    throw UsageError(std::string("--phantom: ") + e.what());
  }
}

void check_input(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("--input: no such file " + path);
}

struct Source {
  std::optional<Phantom> phantom;
  std::unique_ptr<TransformData> data;
};

Source transform_source(const Options& o, const CLI::App& sub) {
  if (o.phantom.empty() == o.input.empty()) {
    throw UsageError("exactly one of --phantom or --input is required\n" + sub.help());
  }
  require_count(o.circle_nodes, "--circle-nodes");
  Source s;
  if (!o.phantom.empty()) {
    s.phantom = resolve_phantom(o.phantom);
    s.data = std::make_unique<FieldTransformData>(s.phantom->field, parse_vector(o.pole, "--pole"), o.circle_nodes);
  } else {
    check_input(o.input);
    s.data = std::make_unique<GridTransformData>(read_grid(o.input));
  }
  return s;
}

ReconstructionOptions reconstruction_options(const Options& o) {
  require_count(o.profile_tau, "--profile-tau-steps");
  if (o.gauss_order < 2) throw UsageError("--gauss-order must be >= 2");
  ReconstructionOptions r;
  r.n = o.n;
  r.tol = o.tol;
  r.cap = o.cap;
  r.gauss_order = o.gauss_order;
  r.tau_count = o.profile_tau;
  return r;
}

// Largest pair count the profile nodes support.
int supported_pairs(const AveragedProfiles& p) {
  const auto nodes = static_cast<int>(p.size());
  return p.layout == ProfileLayout::GaussLegendre ? (nodes - 1 - 2) / 4 : nodes / 32;
}

// Every other row and column of a grid: the same layout at half the resolution.
std::optional<TransformGrid> coarsen(const TransformGrid& g) {
  if (g.nu_count() % 2 != 0 || g.tau_count() % 2 != 0 || g.nu_count() < 16 || g.tau_count() < 16) {
    return std::nullopt;
  }
  TransformGrid c;
  c.pole = g.pole;
  c.circle_nodes = g.circle_nodes;
  for (std::size_t j = 0; j < g.tau_count(); j += 2) c.tau_nodes.push_back(g.tau_nodes[j]);
  for (std::size_t i = 1; i < g.nu_count(); i += 2) {
    c.nu_nodes.push_back(g.nu_nodes[i]);
    for (std::size_t j = 0; j < g.tau_count(); j += 2) {
      c.ff.push_back(g.ff[g.index(i, j)]);
      c.cf.push_back(g.cf[g.index(i, j)]);
      c.sf.push_back(g.sf[g.index(i, j)]);
    }
  }
  return c;
}

int cmd_forward(const Options& o, const CLI::App& sub, std::ostream& out) {
  if (o.phantom.empty() == o.input.empty()) {
    throw UsageError("exactly one of --phantom or --input is required\n" + sub.help());
  }
  require_count(o.nu_steps, "--nu-steps");
  require_count(o.tau_steps, "--tau-steps");
  require_count(o.circle_nodes, "--circle-nodes");
  const UnitVector pole = parse_vector(o.pole, "--pole");
  std::optional<SphereField> field;
  if (!o.phantom.empty()) {
    field = resolve_phantom(o.phantom).field;
  } else {
    check_input(o.input);
    field = grid_field(read_field_csv(o.input));
  }
  const TransformGrid grid = transform_grid(*field, pole, o.nu_steps, o.tau_steps, o.circle_nodes);
  if (o.format == "json") {
    ordered_json j = grid_sidecar(grid);
    j["nu"] = grid.nu_nodes;
    j["tau"] = grid.tau_nodes;
    j["Ff"] = grid.ff;
    j["Cf"] = grid.cf;
    j["Sf"] = grid.sf;
    write_text(j.dump(2) + "\n", o.output, out);
  } else if (o.output.empty()) {
    write_grid_csv(grid, out);
  } else {
    write_grid(grid, o.output);
  }
  return kExitOk;
}

int cmd_invert(const Options& o, const CLI::App& sub, std::ostream& out) {
  Source src = transform_source(o, sub);
  const UnitVector point = parse_vector(o.point, "--point");
  ReconstructionOptions ro = reconstruction_options(o);
  if (!(o.tol > 0.0)) throw UsageError("--tol must be > 0");
  if (o.n < 0) throw UsageError("--n must be >= 1");
  if (o.n == 0 && (o.cap < 1 || o.cap > o.kmax)) throw UsageError("--cap must be in [1, kmax]");
  const CoeffTable table = build_coeff_table(o.kmax);
  const AveragedProfiles profiles = profiles_about(*src.data, point, ro);
  ReconstructionReport report;
  bool cap_limited = false;
  if (ro.n > 0) {
    report = reconstruct_at_pole(table, profiles, ro.n);
  } else {
    const int cap = std::min(ro.cap, supported_pairs(profiles));
    if (cap < 1) throw Error(ErrorKind::InsufficientProfile, "profile too coarse for n = 1");
    cap_limited = cap < ro.cap;
    report = reconstruct_at_pole_auto(table, profiles, ro.tol, cap);
  }

  ordered_json j;
  j["point"] = {point.x(), point.y(), point.z()};
  j["source"] = src.phantom ? "phantom:" + src.phantom->name : "grid:" + o.input;
  j["mode"] = ro.n > 0 ? "fixed" : "auto";
  if (ro.n == 0) {
    j["tol"] = ro.tol;
    j["cap"] = ro.cap;
    j["cap_limited_by_profile"] = cap_limited;
  }
  const ordered_json body = report_json(report);
  for (const auto& [k, v] : body.items()) j[k] = v;
  if (src.phantom) {
    const double truth = src.phantom->truth(point);
    j["truth"] = truth;
    j["abs_error"] = std::abs(report.estimate - truth);
  }
  if (const TransformGrid* grid = src.data->grid()) {
    // |fine - coarse| at the largest n both resolutions support: an upper
    // estimate of the interpolation error, since the coarse error dominates.
    ordered_json tolerance = nullptr;
    ordered_json tolerance_n = nullptr;
    if (auto coarse = coarsen(*grid)) {
      const GridTransformData coarse_data(std::move(*coarse));
      const AveragedProfiles cp = profiles_about(coarse_data, point, ro);
      const int n = std::min(report.n_used, supported_pairs(cp));
      if (n >= 1) {
        const double fine = reconstruct_at_pole(table, profiles, n).estimate;
        tolerance = std::abs(reconstruct_at_pole(table, cp, n).estimate - fine);
        tolerance_n = n;
      }
    }
    j["interpolation_tolerance"] = tolerance;
    j["interpolation_tolerance_n"] = tolerance_n;
  }
  write_text(j.dump(2) + "\n", o.output, out);
  return kExitOk;
}

int cmd_coeffs(const Options& o, std::ostream& out) {
  if (o.kmax < 1) throw UsageError("--max must be >= 1");
  if (o.samples < 0) throw UsageError("--samples must be >= 0");
  if (!(o.limit > 0.0)) throw UsageError("--limit must be > 0");
  const CoeffTable table = build_coeff_table(o.kmax, o.limit);
  write_text(coefficients_json(table, o.samples).dump(2) + "\n", o.output, out);
  return kExitOk;
}

CoeffTable corrupted(const CoeffTable& table, const std::string& spec) {
  // parity:k:m:delta with delta an integer or p/q
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4 || (parts[0] != "even" && parts[0] != "odd")) {
    throw UsageError("--corrupt-coefficient expects even|odd:k:m:delta");
  }
  try {
    const int k = std::stoi(parts[1]);
    const int m = std::stoi(parts[2]);
    const auto slash = parts[3].find('/');
    const Rational delta = slash == std::string::npos
                               ? Rational(std::stoll(parts[3]))
                               : Rational(std::stoll(parts[3].substr(0, slash))) /
                                     Rational(std::stoll(parts[3].substr(slash + 1)));
    return table.with_perturbation(parts[0] == "even" ? 0 : 1, k, m, delta);
  } catch (const std::logic_error&) {
    throw UsageError("--corrupt-coefficient: bad number in '" + spec + "'");
  } catch (const Error& e) {
    throw UsageError(std::string("--corrupt-coefficient: ") + e.what());
  }
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kSuites = {"phantoms", "identities", "theorem3", "recurrence", "oracle"};
  if (o.suite != "all" && std::find(kSuites.begin(), kSuites.end(), o.suite) == kSuites.end()) {
    throw UsageError("--suite must be one of all, phantoms, identities, theorem3, recurrence, oracle");
  }
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  require_count(o.circle_nodes, "--circle-nodes");
  CoeffTable table = build_coeff_table(o.kmax);
  if (!o.corrupt.empty()) table = corrupted(table, o.corrupt);

  std::vector<SuiteResult> results;
  auto wanted = [&](const std::string& s) { return o.suite == "all" || o.suite == s; };
  if (wanted("phantoms")) results.push_back(suite_phantoms(o.circle_nodes));
  if (wanted("identities")) results.push_back(suite_identities(table));
  if (wanted("theorem3")) results.push_back(suite_theorem3(o.trials, o.seed, o.circle_nodes));
  if (wanted("recurrence")) results.push_back(suite_recurrence(o.circle_nodes));
  if (wanted("oracle")) results.push_back(suite_oracle(table, o.circle_nodes));

  bool all_ok = true;
  char line[160];
  out << "suite        passed     worst                    result\n";
  for (const auto& r : results) {
    std::snprintf(line, sizeof(line), "%-12s %4d/%-4d  %-24s %s\n", r.name.c_str(), r.passed, r.total,
                  format_real(r.worst).c_str(), r.ok() ? "PASS" : "FAIL");
    out << line;
    all_ok = all_ok && r.ok();
    for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i) err << r.name << ": " << r.failures[i] << '\n';
  }
  return all_ok ? kExitOk : kExitVerifyFailed;
}

int cmd_convergence(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  Source src = transform_source(o, sub);
  const UnitVector point = parse_vector(o.point, "--point");
  const ReconstructionOptions ro = reconstruction_options(o);
  if (o.n_max < 1 || o.n_max > o.kmax) throw UsageError("--n-max must be in [1, kmax]");
  const CoeffTable table = build_coeff_table(o.kmax);
  const AveragedProfiles profiles = profiles_about(*src.data, point, ro);
  std::optional<double> truth;
  if (src.phantom) truth = src.phantom->truth(point);
  const ConvergenceReport report = convergence_report(table, profiles, o.n_max, truth, o.tol);
  if (report.rows.size() >= 5 && !report.gap_tail_decreasing) {
    err << "warning: Cauchy gap is not strictly decreasing over the last 5 rows\n";
  }
  if (report.stagnated) err << "warning: Cauchy gap stagnated above the tolerance\n";
  if (o.format == "json") {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"n", r.n},
                      {"estimate", r.estimate},
                      {"abs_error", r.abs_error ? ordered_json(*r.abs_error) : ordered_json(nullptr)},
                      {"cauchy_gap", r.cauchy_gap}});
    }
    ordered_json j;
    j["rows"] = std::move(rows);
    j["gap_tail_decreasing"] = report.gap_tail_decreasing;
    j["stagnated"] = report.stagnated;
    j["stopped_on_tolerance"] = report.stopped_on_tolerance;
    write_text(j.dump(2) + "\n", o.output, out);
  } else {
    std::ostringstream csv;
    write_convergence_csv(report, csv);
    write_text(csv.str(), o.output, out);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> tokens(argv + 1, argv + argc);
  try {
    apply_config(tokens);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  set_threads();

  Options o;
  CLI::App app{"Funk transform toolkit: forward transforms, reconstruction, coefficient tables"};
  app.name("funk");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");
  app.footer("Any command accepts --config FILE with key=value lines (flags on the command line win).\n"
             "FUNK_THREADS sets the number of worker threads.");

  auto add_source = [&](CLI::App* s, bool field_input) {
    s->add_option("--phantom", o.phantom, "Phantom spec, name[:key=value,...]");
    s->add_option("--input", o.input,
                  field_input ? "Field samples CSV (nu,tau,value)" : "Transform grid CSV (nu,tau,Ff,Cf,Sf)");
    s->add_option("--pole", o.pole, "Data pole x,y,z")->capture_default_str();
    s->add_option("--circle-nodes", o.circle_nodes, "Circle quadrature nodes M")->capture_default_str();
  };
  auto add_reconstruction = [&](CLI::App* s) {
    s->add_option("--point", o.point, "Reconstruction point x,y,z")->capture_default_str();
    s->add_option("--gauss-order", o.gauss_order, "Gauss-Legendre nodes of the profiles")->capture_default_str();
    s->add_option("--profile-tau-steps", o.profile_tau, "Azimuth nodes of the profiles")->capture_default_str();
    s->add_option("--kmax", o.kmax, "Coefficient table size")->capture_default_str();
  };

  CLI::App* forward = app.add_subcommand("forward", "Tabulate Ff, Cf, Sf on a (nu, tau) grid");
  add_source(forward, true);
  forward->add_option("--nu-steps", o.nu_steps, "Rows nu_i = i (pi/2) / N")->capture_default_str();
  forward->add_option("--tau-steps", o.tau_steps, "Columns tau_j = 2 pi j / T")->capture_default_str();
  forward->add_option("--output", o.output, "Output file (CSV plus .json sidecar); stdout if omitted");
  forward->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  CLI::App* invert = app.add_subcommand("invert", "Reconstruct f at a point from (Ff, Cf, Sf)");
  add_source(invert, false);
  add_reconstruction(invert);
  auto* n_opt = invert->add_option("--n", o.n, "Number of series pairs");
  auto* auto_opt = invert->add_flag("--auto", o.automatic, "Stop on the Cauchy gap (default when --n is absent)");
  n_opt->excludes(auto_opt);
  invert->add_option("--tol", o.tol, "Auto-mode tolerance on |S_n - S_{n-1}| / (2 pi)")->capture_default_str();
  invert->add_option("--cap", o.cap, "Auto-mode maximum n")->capture_default_str();
  invert->add_option("--output", o.output, "JSON report file; stdout if omitted");

  CLI::App* coeffs = app.add_subcommand("coeffs", "Export the exact coefficient tables");
  coeffs->add_option("--max,--kmax", o.kmax, "Largest k")->capture_default_str();
  coeffs->add_option("--limit", o.limit, "Magnitude bound; exceeding it is an overflow error");
  coeffs->add_option("--samples", o.samples, "Also tabulate P_n^0, P_n^1 at this many intervals on [0, pi/2]");
  coeffs->add_option("--output", o.output, "JSON file; stdout if omitted");

  CLI::App* verify = app.add_subcommand("verify", "Run the self-check suites");
  verify->add_option("--suite", o.suite, "all, phantoms, identities, theorem3, recurrence or oracle")
      ->capture_default_str();
  verify->add_option("--trials", o.trials, "Random pairs per phantom for theorem3")->capture_default_str();
  verify->add_option("--seed", o.seed, "Seed for theorem3")->capture_default_str();
  verify->add_option("--circle-nodes", o.circle_nodes, "Circle quadrature nodes M")->capture_default_str();
  verify->add_option("--kmax", o.kmax, "Coefficient table size")->capture_default_str();
  verify->add_option("--corrupt-coefficient", o.corrupt, "Shift one coefficient, even|odd:k:m:delta (negative control)");

  CLI::App* convergence = app.add_subcommand("convergence", "Partial sums, errors and Cauchy gaps for n = 1..n-max");
  add_source(convergence, false);
  add_reconstruction(convergence);
  convergence->add_option("--n-max", o.n_max, "Largest n")->capture_default_str();
  convergence->add_option("--tol", o.tol, "Stop after the first n >= 2 with gap below tol (0 reports all)")
      ->capture_default_str();
  convergence->add_option("--output", o.output, "Output file; stdout if omitted");
  convergence->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  std::vector<const char*> args;
  args.push_back(argc > 0 ? argv[0] : "funk");
  for (const auto& t : tokens) args.push_back(t.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub == forward) return cmd_forward(o, *forward, out);
    if (sub == invert) {
      if (o.automatic) o.n = 0;
      return cmd_invert(o, *invert, out);
    }
    if (sub == coeffs) return cmd_coeffs(o, out);
    if (sub == verify) return cmd_verify(o, out, err);
    return cmd_convergence(o, *convergence, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  }
}

}  // namespace funk
