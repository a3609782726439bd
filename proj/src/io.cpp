#include "funk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "funk/error.hpp"

namespace funk {

using nlohmann::ordered_json;

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t columns, std::size_t line_no) {
  std::vector<double> row;
  row.reserve(columns);
  const char* p = line.data();
  const char* end = p + line.size();
  while (end > p && (end[-1] == '\r' || end[-1] == ' ')) --end;
  for (std::size_t c = 0; c < columns; ++c) {
    while (p < end && *p == ' ') ++p;
    double v = 0.0;
    const auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc()) {
      throw Error(ErrorKind::Io, "line " + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                                     " is not a number");
    }
    row.push_back(v);
    p = res.ptr;
    if (c + 1 < columns) {
      if (p >= end || *p != ',') {
        throw Error(ErrorKind::Io, "line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                                       " columns");
      }
      ++p;
    }
  }
  if (p != end) throw Error(ErrorKind::Io, "line " + std::to_string(line_no) + ": trailing characters");
  return row;
}

// Rows of a (nu, tau, ...) table with tau fastest; returns the tau count.
std::vector<std::vector<double>> read_table(std::istream& in, const std::string& header, std::size_t& tau_count) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorKind::Io, "expected header '" + header + "', got '" + line + "'");
  const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    rows.push_back(parse_row(line, columns, line_no));
  }
  if (rows.empty()) throw Error(ErrorKind::Io, "no data rows");
  tau_count = 1;
  while (tau_count < rows.size() && rows[tau_count][0] == rows[0][0]) ++tau_count;
  if (rows.size() % tau_count != 0) throw Error(ErrorKind::Io, "row count is not a multiple of the tau count");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = r / tau_count;
    const std::size_t j = r % tau_count;
    if (rows[r][0] != rows[i * tau_count][0] || rows[r][1] != rows[j][1]) {
      throw Error(ErrorKind::Io, "row " + std::to_string(r + 2) + " breaks the nu-major, tau-fastest layout");
    }
  }
  return rows;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

std::optional<ordered_json> read_sidecar(const std::filesystem::path& csv) {
  const auto path = sidecar_path(csv);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in = open_in(path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

UnitVector sidecar_pole(const ordered_json& j) {
  try {
    const auto& p = j.at("pole");
    return UnitVector(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("sidecar pole: ") + e.what());
  }
}

ordered_json rational_json(const Rational& r) {
  return ordered_json::array({numerator(r).str(), denominator(r).str()});
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

void write_grid_csv(const TransformGrid& grid, std::ostream& out) {
  grid.validate();
  out << "nu,tau,Ff,Cf,Sf\n";
  for (std::size_t i = 0; i < grid.nu_count(); ++i) {
    for (std::size_t j = 0; j < grid.tau_count(); ++j) {
      const std::size_t k = grid.index(i, j);
      out << format_real(grid.nu_nodes[i]) << ',' << format_real(grid.tau_nodes[j]) << ',' << format_real(grid.ff[k])
          << ',' << format_real(grid.cf[k]) << ',' << format_real(grid.sf[k]) << '\n';
    }
  }
}

ordered_json grid_sidecar(const TransformGrid& grid) {
  ordered_json j;
  j["pole"] = {grid.pole.x(), grid.pole.y(), grid.pole.z()};
  j["nu_count"] = grid.nu_count();
  j["tau_count"] = grid.tau_count();
  j["circle_nodes"] = grid.circle_nodes;
  return j;
}

void write_grid(const TransformGrid& grid, const std::filesystem::path& csv) {
  std::ostringstream body;
  write_grid_csv(grid, body);
  std::ostringstream unused;
  write_text(body.str(), csv, unused);
  write_text(grid_sidecar(grid).dump(2) + "\n", sidecar_path(csv), unused);
}

TransformGrid read_grid_csv(std::istream& in, const UnitVector& pole, int circle_nodes) {
  std::size_t t = 0;
  const auto rows = read_table(in, "nu,tau,Ff,Cf,Sf", t);
  TransformGrid grid;
  grid.pole = pole;
  grid.circle_nodes = circle_nodes;
  for (std::size_t r = 0; r < rows.size(); r += t) grid.nu_nodes.push_back(rows[r][0]);
  for (std::size_t j = 0; j < t; ++j) grid.tau_nodes.push_back(rows[j][1]);
  for (const auto& row : rows) {
    grid.ff.push_back(row[2]);
    grid.cf.push_back(row[3]);
    grid.sf.push_back(row[4]);
  }
  try {
    grid.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, e.what());
  }
  return grid;
}

TransformGrid read_grid(const std::filesystem::path& csv) {
  std::ifstream in = open_in(csv);
  UnitVector pole = north_pole();
  int circle_nodes = kDefaultCircleNodes;
  const auto side = read_sidecar(csv);
  if (side) {
    pole = sidecar_pole(*side);
    circle_nodes = side->value("circle_nodes", kDefaultCircleNodes);
  }
  TransformGrid grid = read_grid_csv(in, pole, circle_nodes);
  if (side) {
    const auto n = side->value("nu_count", grid.nu_count());
    const auto t = side->value("tau_count", grid.tau_count());
    if (n != grid.nu_count() || t != grid.tau_count()) {
      throw Error(ErrorKind::Io, "sidecar counts disagree with " + csv.string());
    }
  }
  return grid;
}

FieldGrid read_field_csv(const std::filesystem::path& csv) {
  std::ifstream in = open_in(csv);
  std::size_t t = 0;
  const auto rows = read_table(in, "nu,tau,value", t);
  FieldGrid grid;
  if (const auto side = read_sidecar(csv)) grid.pole = sidecar_pole(*side);
  grid.nu_count = static_cast<int>(rows.size() / t);
  grid.tau_count = static_cast<int>(t);
  for (int i = 0; i < grid.nu_count; ++i) {
    if (std::abs(rows[static_cast<std::size_t>(i) * t][0] - grid.nu(i)) > 1e-12) {
      throw Error(ErrorKind::Io, "field nu nodes must be i pi / (count - 1)");
    }
  }
  for (int j = 0; j < grid.tau_count; ++j) {
    if (std::abs(rows[static_cast<std::size_t>(j)][1] - grid.tau(j)) > 1e-12) {
      throw Error(ErrorKind::Io, "field tau nodes must be 2 pi j / count");
    }
  }
  for (const auto& row : rows) grid.values.push_back(row[2]);
  return grid;
}

void write_field_csv(const FieldGrid& grid, std::ostream& out) {
  out << "nu,tau,value\n";
  for (int i = 0; i < grid.nu_count; ++i) {
    for (int j = 0; j < grid.tau_count; ++j) {
      out << format_real(grid.nu(i)) << ',' << format_real(grid.tau(j)) << ',' << format_real(grid.at(i, j)) << '\n';
    }
  }
}

ordered_json coefficients_json(const CoeffTable& table, int samples) {
  ordered_json even = ordered_json::object();
  ordered_json odd = ordered_json::object();
  ordered_json even_ok = ordered_json::object();
  ordered_json odd_ok = ordered_json::object();
  bool all = true;
  for (int k = 1; k <= table.kmax(); ++k) {
    ordered_json row = ordered_json::array();
    for (const auto& c : table.even_row(k)) row.push_back(rational_json(c));
    even[std::to_string(2 * k)] = std::move(row);
    const bool e = table.even_identity_holds(k);
    even_ok[std::to_string(2 * k)] = e;
    all = all && e;
    if (k >= 2) {
      ordered_json orow = ordered_json::array();
      for (const auto& c : table.odd_row(k)) orow.push_back(rational_json(c));
      odd[std::to_string(2 * k - 1)] = std::move(orow);
      const bool o = table.odd_identity_holds(k);
      odd_ok[std::to_string(2 * k - 1)] = o;
      all = all && o;
    }
  }
  ordered_json j;
  j["even"] = std::move(even);
  j["odd"] = std::move(odd);
  j["metadata"] = {
      {"kmax", table.kmax()},
      {"even_identity", "sum_m c_m(2k)/(2m) = -2"},
      {"odd_identity", "sum_m c_m(2k-1)/(2m+2) = -1"},
      {"even_identity_holds", std::move(even_ok)},
      {"odd_identity_holds", std::move(odd_ok)},
      {"all_identities_hold", all},
  };
  if (samples > 0) {
    ordered_json u = ordered_json::array();
    ordered_json p0 = ordered_json::object();
    ordered_json p1 = ordered_json::object();
    for (int i = 0; i <= samples; ++i) u.push_back(0.5 * std::numbers::pi * i / samples);
    for (int n = 1; n <= table.kmax(); ++n) {
      ordered_json r0 = ordered_json::array();
      ordered_json r1 = ordered_json::array();
      for (const auto& x : u) {
        r0.push_back(eval_P(table, n, x.get<double>(), 0));
        r1.push_back(eval_P(table, n, x.get<double>(), 1));
      }
      p0[std::to_string(n)] = std::move(r0);
      p1[std::to_string(n)] = std::move(r1);
    }
    j["samples"] = {{"u", std::move(u)}, {"P0", std::move(p0)}, {"P1", std::move(p1)}};
  }
  return j;
}

ordered_json report_json(const ReconstructionReport& r) {
  ordered_json j;
  j["estimate"] = r.estimate;
  j["grouped_estimate"] = r.grouped_estimate;
  j["n_used"] = r.n_used;
  j["stop_reason"] = r.stop_reason;
  j["cauchy_gap"] = r.cauchy_gap;
  j["last_term"] = r.last_term;
  j["fbar_half_pi"] = r.fbar_half_pi;
  j["cbar_half_pi"] = r.cbar_half_pi;
  j["partial_sums"] = r.partial_sums;
  ordered_json estimates = ordered_json::array();
  for (double s : r.partial_sums) estimates.push_back(s / (2.0 * std::numbers::pi));
  j["partial_estimates"] = std::move(estimates);
  j["odd_terms"] = r.odd_terms;
  j["even_terms"] = r.even_terms;
  return j;
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "n,estimate,abs_error,cauchy_gap\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << format_real(row.estimate) << ',' << (row.abs_error ? format_real(*row.abs_error) : "")
        << ',' << format_real(row.cauchy_gap) << '\n';
  }
}

void write_text(const std::string& text, const std::filesystem::path& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace funk
