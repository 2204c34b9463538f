#include "corrugate/curve_io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "corrugate/errors.hpp"
#include "json.hpp"

namespace corrugate::io {

namespace {

using nlohmann::json;

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError(path + ":" + std::to_string(line) + ": not a number: '" + text + "'");
  }
}

std::vector<std::vector<double>> read_table(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  header = split(line);
  std::vector<std::vector<double>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw IoError(path + ":" + std::to_string(number) + ": expected " + std::to_string(header.size()) + " columns");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, path, number));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string sidecar_path(const std::string& csv_path) {
  const auto dot = csv_path.find_last_of('.');
  const auto slash = csv_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

void write_curve_csv(const std::string& path, const SampledCurve& curve, bool with_jets) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const int n = curve.dimension();
  std::vector<std::string> columns{"t"};
  for (int c = 1; c <= n; ++c) columns.push_back("x" + std::to_string(c));
  if (with_jets) {
    for (int c = 1; c <= n; ++c) columns.push_back("dx" + std::to_string(c));
    for (int c = 1; c <= n; ++c) columns.push_back("ddx" + std::to_string(c));
  }
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (Index i = 0; i < curve.samples(); ++i) {
    out << format(curve.node(i));
    for (int order = 0; order < (with_jets ? 3 : 1); ++order)
      for (int c = 0; c < n; ++c) out << ',' << format(curve.derivative_table(order)(i, c));
    out << '\n';
  }
  if (!out) throw IoError("error while writing " + path);

  json meta;
  meta["n"] = n;
  meta["b"] = curve.domain_end();
  meta["closed"] = curve.closed();
  meta["interpolation_kind"] = to_string(curve.interpolation_kind());
  meta["samples"] = curve.samples();
  meta["columns"] = columns;
  std::ofstream side(sidecar_path(path));
  if (!side) throw IoError("cannot write " + sidecar_path(path));
  side << meta.dump(2) << '\n';
}

SampledCurve read_curve_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_table(path, header);
  if (header.empty() || header[0] != "t") throw IoError(path + ": first column must be 't'");
  int n = 0;
  while (n + 1 < static_cast<int>(header.size()) && header[n + 1] == "x" + std::to_string(n + 1)) ++n;
  if (n < 1) throw IoError(path + ": no x1..xn columns");
  bool jets = static_cast<int>(header.size()) == 1 + 3 * n;
  if (jets) {
    for (int c = 1; c <= n; ++c) {
      if (header[n + c] != "dx" + std::to_string(c) || header[2 * n + c] != "ddx" + std::to_string(c))
        throw IoError(path + ": unexpected jet column names");
    }
  } else if (static_cast<int>(header.size()) != 1 + n) {
    throw IoError(path + ": unexpected columns after x" + std::to_string(n));
  }
  const Index m = static_cast<Index>(rows.size());
  if (m < 7) throw IoError(path + ": need at least 7 samples");

  bool closed = false;
  double b = rows.back()[0];
  std::ifstream side(sidecar_path(path));
  if (side) {
    json meta;
    try {
      side >> meta;
      closed = meta.at("closed").get<bool>();
      b = meta.at("b").get<double>();
      if (meta.contains("n") && meta.at("n").get<int>() != n) throw IoError(path + ": sidecar n disagrees with the columns");
      if (meta.contains("samples") && meta.at("samples").get<Index>() != m)
        throw IoError(path + ": sidecar sample count disagrees with the file");
      if (meta.contains("interpolation_kind")) {
        const auto kind = interpolation_kind_from_string(meta.at("interpolation_kind").get<std::string>());
        if ((kind == InterpolationKind::PeriodicTrigonometric) != closed)
          throw IoError(path + ": interpolation_kind does not match the closed flag");
      }
    } catch (const json::exception& e) {
      throw IoError(sidecar_path(path) + ": " + e.what());
    }
  }
  const UniformGrid grid{b, closed, m};
  for (Index i = 0; i < m; ++i) {
    if (std::fabs(rows[i][0] - grid.node(i)) > 1e-9 * std::max(1.0, b))
      throw IoError(path + ": t column is not the uniform grid expected from the sidecar");
  }
  MatrixXd p(m, n), d1(m, n), d2(m, n);
  for (Index i = 0; i < m; ++i)
    for (int c = 0; c < n; ++c) {
      p(i, c) = rows[i][1 + c];
      if (jets) {
        d1(i, c) = rows[i][1 + n + c];
        d2(i, c) = rows[i][1 + 2 * n + c];
      }
    }
  if (!jets) return SampledCurve::from_positions(b, closed, std::move(p));
  return SampledCurve(b, closed, std::move(p), std::move(d1), std::move(d2));
}

void write_obj(const std::string& path, const SampledCurve& curve) {
  if (curve.dimension() != 3) throw IoError("OBJ export needs a curve in R^3");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const auto& p = curve.positions();
  for (Index i = 0; i < curve.samples(); ++i)
    out << "v " << format(p(i, 0)) << ' ' << format(p(i, 1)) << ' ' << format(p(i, 2)) << '\n';
  out << 'l';
  for (Index i = 0; i < curve.samples(); ++i) out << ' ' << i + 1;
  if (curve.closed()) out << " 1";
  out << '\n';
}

ScalarField read_scalar_csv(const std::string& path, double b, bool closed) {
  std::vector<std::string> header;
  const auto rows = read_table(path, header);
  if (header.size() != 2 || header[0] != "t") throw IoError(path + ": expected columns t,<value>");
  const Index m = static_cast<Index>(rows.size());
  if (m < 7) throw IoError(path + ": need at least 7 samples");
  const UniformGrid grid{b, closed, m};
  VectorXd v(m);
  for (Index i = 0; i < m; ++i) {
    if (std::fabs(rows[i][0] - grid.node(i)) > 1e-9 * std::max(1.0, b))
      throw IoError(path + ": t column is not a uniform grid over the curve's domain");
    v[i] = rows[i][1];
  }
  return ScalarField::from_values(b, closed, std::move(v));
}

void write_profile_table(const std::string& path, const ProfileEvaluator& profile, double s_max, int s_count,
                         int t_count) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "s,t,psi1,psi2,psi_t1,psi_t2,psi_tt1,psi_tt2\n";
  for (int i = 0; i < s_count; ++i) {
    const double s = s_count == 1 ? s_max : -s_max + 2.0 * s_max * i / (s_count - 1);
    for (int j = 0; j < t_count; ++j) {
      const double t = 2.0 * std::numbers::pi * j / t_count;
      const Vec2 p = profile.psi(s, t), pt = profile.psi_t(s, t), ptt = profile.psi_tt(s, t);
      out << format(s) << ',' << format(t) << ',' << format(p[0]) << ',' << format(p[1]) << ',' << format(pt[0]) << ','
          << format(pt[1]) << ',' << format(ptt[0]) << ',' << format(ptt[1]) << '\n';
    }
  }
}

}  // namespace corrugate::io
