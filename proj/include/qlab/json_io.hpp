#pragma once

// JSON conversions for the data types, a deterministic JSON writer (17
// significant digits) and an RFC-4180 CSV writer.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlab/bound.hpp"
#include "qlab/convexity.hpp"
#include "qlab/errors.hpp"
#include "qlab/ftc_maximal.hpp"
#include "qlab/galb_tensor.hpp"
#include "qlab/gauge.hpp"
#include "qlab/integration.hpp"
#include "qlab/measure.hpp"
#include "qlab/quasi_normed_space.hpp"

namespace qlab::io {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing JSON field \"") + key + "\"");
  return j.at(key);
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

inline std::vector<std::size_t> indices(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of indices");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError(std::string(what) + " must hold indices >= 0");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

inline json numbers_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace detail

// ---- parsing ----

inline MeasureSpace measure_from_json(const json& j) {
  return MeasureSpace(detail::numbers(detail::field(j, "weights"), "weights"));
}

inline ScalarField scalar_from_json(const json& j) {
  if (j.is_array()) return ScalarField(detail::numbers(j, "values"));
  return ScalarField(detail::numbers(detail::field(j, "values"), "values"));
}

inline VectorField vector_from_json(const json& j) {
  const json& rows = detail::field(j, "vectors");
  if (!rows.is_array()) throw InputError("vectors must be an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& r : rows) out.push_back(detail::numbers(r, "vectors"));
  return VectorField::from_rows(out);
}

inline Partition partition_from_json(const json& j, std::size_t atoms) {
  const json& blocks = detail::field(j, "blocks");
  if (!blocks.is_array()) throw InputError("blocks must be an array");
  std::vector<std::vector<std::size_t>> out;
  for (const auto& b : blocks) out.push_back(detail::indices(b, "blocks"));
  return Partition(std::move(out), atoms);
}

inline OrliczFunction phi_from_json(const json& j) {
  std::string name;
  double p = 1.0;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object()) {
    name = detail::field(j, "name").get<std::string>();
    if (j.contains("p")) p = detail::number(j.at("p"), "p");
  } else {
    throw InputError("phi must be a name or an object");
  }
  if (name == "loglog") return OrliczFunction::loglog();
  if (name == "rational") return OrliczFunction::rational();
  if (name == "power") return OrliczFunction::power(p);
  throw InputError("unknown Orlicz function \"" + name + "\"");
}

inline Gauge gauge_from_json(const json& j) {
  const json& k = detail::field(j, "kind");
  if (!k.is_string()) throw InputError("gauge kind must be a string");
  const auto kind = k.get<std::string>();
  if (kind == "lp") return Gauge::lp(detail::number(detail::field(j, "p"), "p"));
  if (kind == "weak_l1") return Gauge::weak_l1();
  if (kind == "orlicz") {
    if (j.contains("p") && detail::field(j, "phi").is_string())
      return Gauge::orlicz(phi_from_json(json{{"name", j.at("phi")}, {"p", j.at("p")}}));
    return Gauge::orlicz(phi_from_json(detail::field(j, "phi")));
  }
  if (kind == "convexified")
    return Gauge::convexified(gauge_from_json(detail::field(j, "base")), detail::number(detail::field(j, "r"), "r"));
  if (kind == "intersect")
    return Gauge::intersect(gauge_from_json(detail::field(j, "g1")), gauge_from_json(detail::field(j, "g2")));
  throw InputError("unknown gauge kind \"" + kind + "\"");
}

/// {"dim":d,"norm":{"kind":"lq","q":0.5}} or {"dim":d,"norm":{"kind":"weak_l1"}}.
inline QuasiNormedSpace space_from_json(const json& j) {
  const json& d = detail::field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) throw InputError("dim must be a positive integer");
  const auto dim = d.get<std::size_t>();
  const json& norm = detail::field(j, "norm");
  const auto kind = detail::field(norm, "kind").get<std::string>();
  if (kind == "lq") {
    const json& q = detail::field(norm, "q");
    if (q.is_string() && q.get<std::string>() == "inf")
      return QuasiNormedSpace::lq(dim, std::numeric_limits<double>::infinity());
    return QuasiNormedSpace::lq(dim, detail::number(q, "q"));
  }
  if (kind == "weak_l1") return QuasiNormedSpace::weak_l1(dim);
  throw InputError("unknown norm kind \"" + kind + "\"");
}

inline TensorRep tensor_from_json(const json& j) {
  TensorRep rep{space_from_json(detail::field(j, "X")), gauge_from_json(detail::field(j, "lambda")), {}};
  const json& terms = detail::field(j, "terms");
  if (!terms.is_array()) throw InputError("terms must be an array");
  for (const auto& t : terms)
    rep.terms.push_back({detail::numbers(detail::field(t, "x"), "x"), ScalarField(detail::numbers(detail::field(t, "f"), "f"))});
  return rep;
}

inline SimpleFunction simple_from_json(const json& j) {
  SimpleFunction s;
  const json& pieces = detail::field(j, "pieces");
  if (!pieces.is_array()) throw InputError("pieces must be an array");
  for (const auto& p : pieces)
    s.pieces.push_back({detail::indices(detail::field(p, "atoms"), "atoms"), detail::numbers(detail::field(p, "x"), "x")});
  return s;
}

inline GridSpace grid_from_json(const json& j) {
  const json& d = detail::field(j, "d");
  const json& c = detail::field(j, "cells");
  if (!d.is_number_integer() || !c.is_number_integer() || c.get<long long>() < 0)
    throw InputError("grid needs integer d and cells");
  return GridSpace(d.get<int>(), c.get<std::size_t>());
}

// ---- emitting ----

inline json to_json(const MeasureSpace& s) { return {{"weights", detail::numbers_json(s.weights())}}; }
inline json to_json(const ScalarField& f) { return {{"values", detail::numbers_json(f.values)}}; }

inline json to_json(const VectorField& F) {
  json rows = json::array();
  for (std::size_t i = 0; i < F.size(); ++i) rows.push_back(detail::numbers_json(F.at(i)));
  return {{"vectors", rows}};
}

inline json to_json(const Partition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks()) blocks.push_back(b);
  return {{"blocks", blocks}};
}

inline json to_json(const Gauge& g) {
  switch (g.kind()) {
    case Gauge::Kind::lp:
      return {{"kind", "lp"}, {"p", g.p()}};
    case Gauge::Kind::weak_l1:
      return {{"kind", "weak_l1"}};
    case Gauge::Kind::orlicz: {
      const auto& phi = g.phi();
      if (phi.builtin() == OrliczFunction::Builtin::power)
        return {{"kind", "orlicz"}, {"phi", {{"name", "power"}, {"p", phi.exponent()}}}};
      return {{"kind", "orlicz"}, {"phi", phi.name()}};
    }
    case Gauge::Kind::convexified:
      return {{"kind", "convexified"}, {"r", g.r()}, {"base", to_json(g.base())}};
    case Gauge::Kind::intersect:
      return {{"kind", "intersect"}, {"g1", to_json(g.first())}, {"g2", to_json(g.second())}};
  }
  return {};
}

inline json to_json(const QuasiNormedSpace& X) {
  json norm;
  switch (X.kind()) {
    case QuasiNormedSpace::Kind::lq:
      norm = {{"kind", "lq"}};
      if (std::isinf(X.q())) {
        norm["q"] = "inf";
      } else {
        norm["q"] = X.q();
      }
      break;
    case QuasiNormedSpace::Kind::weak_l1:
      norm = {{"kind", "weak_l1"}};
      break;
    case QuasiNormedSpace::Kind::custom:
      norm = {{"kind", "custom"}};
      break;
  }
  return {{"dim", X.dim()}, {"norm", norm}};
}

inline json to_json(const TensorRep& rep) {
  json terms = json::array();
  for (const auto& t : rep.terms) terms.push_back({{"x", detail::numbers_json(t.x)}, {"f", detail::numbers_json(t.f.values)}});
  return {{"lambda", to_json(rep.lambda)}, {"X", to_json(rep.target)}, {"terms", terms}};
}

inline json to_json(const SimpleFunction& s) {
  json pieces = json::array();
  for (const auto& p : s.pieces) pieces.push_back({{"atoms", p.atoms}, {"x", detail::numbers_json(p.x)}});
  return {{"pieces", pieces}};
}

inline json to_json(const BoundResult& b) {
  json w = json::array();
  for (const auto& v : b.witness) w.push_back(detail::numbers_json(v));
  return {{"value", b.value}, {"tag", std::string(to_string(b.tag))}, {"witness", w}};
}

inline json to_json(const MiiReport& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"rows", r.rows}, {"cols", r.cols}};
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
  return rows;
}

inline json to_json(const CounterexampleReport& r) {
  return {{"p", r.p},
          {"n", r.n},
          {"sup_part_norm", r.sup_part_norm},
          {"riemann_sum_norm", r.riemann_sum_norm},
          {"ratio", r.blowup_ratio}};
}

// ---- text output ----

/// Shortest decimal that reads back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Fixed 17 significant digits; non-finite values become null.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += json(k).dump();
        out += indent > 0 ? ": " : ":";
        write(v, out, indent, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // flat numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",";
        if (!flat) {
          out += nl;
          out += pad;
        }
        first = false;
        write(v, out, indent, depth + 1);
      }
      if (!flat) {
        out += nl;
        out += close_pad;
      }
      out += "]";
      return;
    }
    case json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic text form: insertion-ordered keys, floats at %.17g.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::write(j, out, indent, 0);
  return out;
}

/// RFC-4180 CSV with LF line endings. Cells containing a comma, quote or
/// line break are quoted; quotes are doubled.
inline std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const auto& cell = row[c];
      if (cell.find_first_of(",\"\r\n") == std::string::npos) {
        out += cell;
      } else {
        out += '"';
        for (char ch : cell) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      }
    }
    out += '\n';
  }
  return out;
}

/// Parses RFC-4180 text back into rows.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    any = true;
    if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  if (quoted) throw InputError("unterminated quoted CSV cell");
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Tabular JSON ({"columns":[...],"rows":[[...],...]}) to CSV cells.
inline std::vector<std::vector<std::string>> table_to_csv(const json& table) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head;
  for (const auto& c : detail::field(table, "columns")) head.push_back(c.get<std::string>());
  rows.push_back(head);
  for (const auto& r : detail::field(table, "rows")) {
    std::vector<std::string> cells;
    for (const auto& v : r) {
      if (v.is_number_float()) {
        cells.push_back(format_number(v.get<double>()));
      } else if (v.is_string()) {
        cells.push_back(v.get<std::string>());
      } else {
        cells.push_back(v.dump());
      }
    }
    rows.push_back(cells);
  }
  return rows;
}

/// Inverse of table_to_csv: numeric cells parse back as numbers.
inline json csv_to_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) throw InputError("CSV has no header row");
  json t;
  t["columns"] = rows.front();
  json body = json::array();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    json row = json::array();
    for (const auto& cell : rows[r]) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size()) {
        const bool integral = cell.find_first_of(".eEn") == std::string::npos;
        if (integral) {
          row.push_back(std::stoll(cell));
        } else {
          row.push_back(v);
        }
      } else {
        row.push_back(cell);
      }
    }
    body.push_back(row);
  }
  t["rows"] = body;
  return t;
}

}  // namespace qlab::io
