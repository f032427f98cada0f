#pragma once

// A plain linear/mixed-integer model container and its MPS (free format)
// reader and writer. Only what the relaxation export needs: minimisation,
// one objective row, L/G/E rows, continuous/integer/binary columns.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wtsched/core.hpp"

namespace wtsched::lp {

enum class Sense { LE, GE, EQ };
enum class VarType { Continuous, Integer, Binary };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Column {
  std::string name;
  VarType type = VarType::Continuous;
  double obj = 0;
  double lb = 0;
  double ub = kInf;
};

struct Row {
  std::string name;
  Sense sense = Sense::EQ;
  double rhs = 0;
  std::vector<std::pair<int, double>> coefs;  // (column, value)
};

struct LinearModel {
  std::string name = "MODEL";
  std::vector<Column> cols;
  std::vector<Row> rows;

  int add_col(std::string name, VarType type, double obj = 0) {
    Column c{std::move(name), type, obj, 0, type == VarType::Binary ? 1.0 : kInf};
    cols.push_back(std::move(c));
    return static_cast<int>(cols.size()) - 1;
  }

  Row& add_row(std::string name, Sense sense, double rhs) {
    rows.push_back({std::move(name), sense, rhs, {}});
    return rows.back();
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.coefs.size();
    return n;
  }

  double objective(const std::vector<double>& x) const {
    double z = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) z += cols[c].obj * x[c];
    return z;
  }

  /// Names of rows, bounds and integrality conditions that `x` breaks.
  std::vector<std::string> violations(const std::vector<double>& x, double tol = 1e-9) const {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& col = cols[c];
      if (x[c] < col.lb - tol || x[c] > col.ub + tol) out.push_back("bound " + col.name);
      if (col.type != VarType::Continuous && std::abs(x[c] - std::round(x[c])) > tol)
        out.push_back("integrality " + col.name);
    }
    for (const auto& r : rows) {
      double lhs = 0;
      for (const auto& [c, v] : r.coefs) lhs += v * x[c];
      const bool ok = r.sense == Sense::LE   ? lhs <= r.rhs + tol
                      : r.sense == Sense::GE ? lhs >= r.rhs - tol
                                             : std::abs(lhs - r.rhs) <= tol;
      if (!ok) out.push_back("row " + r.name);
    }
    return out;
  }
};

namespace detail {

inline std::string num(double v) {
  if (v == std::round(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return format_real(v);
}

inline char sense_code(Sense s) { return s == Sense::LE ? 'L' : s == Sense::GE ? 'G' : 'E'; }

}  // namespace detail

/// Free-format MPS. Rows and columns are emitted in model order; within a
/// column, the objective entry comes first, then rows in ascending order.
inline std::string write_mps(const LinearModel& model) {
  std::vector<std::vector<std::pair<int, double>>> by_col(model.cols.size());
  for (std::size_t r = 0; r < model.rows.size(); ++r)
    for (const auto& [c, v] : model.rows[r].coefs) by_col[c].emplace_back(static_cast<int>(r), v);

  std::ostringstream os;
  os << "NAME " << model.name << "\n";
  os << "ROWS\n";
  os << " N obj\n";
  for (const auto& r : model.rows) os << ' ' << detail::sense_code(r.sense) << ' ' << r.name << "\n";
  os << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t c = 0; c < model.cols.size(); ++c) {
    const auto& col = model.cols[c];
    const bool is_int = col.type != VarType::Continuous;
    if (is_int != in_int) {
      os << "    MARKER" << marker++ << " 'MARKER' " << (is_int ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = is_int;
    }
    bool wrote = false;
    if (col.obj != 0) {
      os << "    " << col.name << " obj " << detail::num(col.obj) << "\n";
      wrote = true;
    }
    for (const auto& [r, v] : by_col[c]) {
      os << "    " << col.name << ' ' << model.rows[r].name << ' ' << detail::num(v) << "\n";
      wrote = true;
    }
    if (!wrote) os << "    " << col.name << " obj 0\n";
  }
  if (in_int) os << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
  os << "RHS\n";
  for (const auto& r : model.rows)
    if (r.rhs != 0) os << "    RHS " << r.name << ' ' << detail::num(r.rhs) << "\n";
  os << "BOUNDS\n";
  for (const auto& col : model.cols) {
    if (col.type == VarType::Binary) {
      os << " BV BND " << col.name << "\n";
      continue;
    }
    if (col.lb == -kInf && col.ub == kInf) {
      os << " FR BND " << col.name << "\n";
      continue;
    }
    if (col.lb == -kInf)
      os << " MI BND " << col.name << "\n";
    else if (col.lb != 0)
      os << " LO BND " << col.name << ' ' << detail::num(col.lb) << "\n";
    if (col.ub != kInf) os << " UP BND " << col.name << ' ' << detail::num(col.ub) << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

inline LinearModel read_mps(std::string_view text) {
  LinearModel model;
  std::unordered_map<std::string, int> row_index, col_index;
  std::string objective_row;
  enum class Section { None, Rows, Columns, Rhs, Bounds, End } section = Section::None;
  bool in_int = false;

  std::istringstream is{std::string(text)};
  std::string line;
  int no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError("MPS line " + std::to_string(no) + ": " + msg);
  };
  auto to_num = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail("bad number '" + s + "'");
    }
    return 0.0;
  };
  auto find_col = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it == col_index.end()) fail("unknown column '" + name + "'");
    return it->second;
  };

  while (std::getline(is, line)) {
    ++no;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> t{std::istream_iterator<std::string>(ls), {}};
    if (t.empty()) continue;
    const bool header = !std::isspace(static_cast<unsigned char>(line[0]));
    if (header) {
      if (t[0] == "NAME") {
        model.name = t.size() > 1 ? t[1] : "";
      } else if (t[0] == "ROWS") {
        section = Section::Rows;
      } else if (t[0] == "COLUMNS") {
        section = Section::Columns;
      } else if (t[0] == "RHS") {
        section = Section::Rhs;
      } else if (t[0] == "BOUNDS") {
        section = Section::Bounds;
      } else if (t[0] == "ENDATA") {
        section = Section::End;
      } else {
        fail("unsupported section '" + t[0] + "'");
      }
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (t.size() != 2) fail("ROWS entry needs type and name");
        if (t[0] == "N") {
          if (!objective_row.empty()) fail("multiple objective rows");
          objective_row = t[1];
          break;
        }
        Sense s = t[0] == "L" ? Sense::LE : t[0] == "G" ? Sense::GE : Sense::EQ;
        if (t[0] != "L" && t[0] != "G" && t[0] != "E") fail("bad row type '" + t[0] + "'");
        row_index[t[1]] = static_cast<int>(model.rows.size());
        model.add_row(t[1], s, 0);
        break;
      }
      case Section::Columns: {
        if (t.size() == 3 && t[1] == "'MARKER'") {
          in_int = t[2] == "'INTORG'";
          break;
        }
        if (t.size() != 3 && t.size() != 5) fail("COLUMNS entry needs name/row/value pairs");
        int c;
        if (auto it = col_index.find(t[0]); it != col_index.end()) {
          c = it->second;
          if (c != static_cast<int>(model.cols.size()) - 1) fail("column '" + t[0] + "' is not contiguous");
        } else {
          c = model.add_col(t[0], in_int ? VarType::Integer : VarType::Continuous);
          if (in_int) model.cols[c].ub = kInf;
          col_index[t[0]] = c;
        }
        for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
          const double v = to_num(t[k + 1]);
          if (t[k] == objective_row) {
            model.cols[c].obj = v;
            continue;
          }
          auto it = row_index.find(t[k]);
          if (it == row_index.end()) fail("unknown row '" + t[k] + "'");
          if (v != 0) model.rows[it->second].coefs.emplace_back(c, v);
        }
        break;
      }
      case Section::Rhs: {
        if (t.size() != 3 && t.size() != 5) fail("RHS entry needs set/row/value");
        for (std::size_t k = 1; k + 1 < t.size(); k += 2) {
          auto it = row_index.find(t[k]);
          if (it == row_index.end()) fail("unknown row '" + t[k] + "'");
          model.rows[it->second].rhs = to_num(t[k + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (t.size() < 3) fail("BOUNDS entry too short");
        auto& col = model.cols[find_col(t[2])];
        const std::string& kind = t[0];
        if (kind == "BV") {
          col.type = VarType::Binary;
          col.lb = 0;
          col.ub = 1;
        } else if (kind == "FR") {
          col.lb = -kInf;
          col.ub = kInf;
        } else if (kind == "MI") {
          col.lb = -kInf;
        } else if (kind == "PL") {
          col.ub = kInf;
        } else {
          if (t.size() != 4) fail("bound '" + kind + "' needs a value");
          const double v = to_num(t[3]);
          if (kind == "UP") {
            col.ub = v;
          } else if (kind == "LO") {
            col.lb = v;
          } else if (kind == "FX") {
            col.lb = col.ub = v;
          } else {
            fail("unsupported bound type '" + kind + "'");
          }
        }
        break;
      }
      default:
        fail("data outside of a section");
    }
  }
  if (section != Section::End) throw ParseError("MPS document has no ENDATA");
  // Rows arrive column-major; restore ascending column order within a row.
  for (auto& r : model.rows)
    std::stable_sort(r.coefs.begin(), r.coefs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  return model;
}

}  // namespace wtsched::lp
