// qlab: command-line front end for the quasi-norm laboratory.
//
// Exit codes: 0 success, 1 a suite found a violation, 2 malformed input or
// usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlab/convexity.hpp"
#include "qlab/ftc_maximal.hpp"
#include "qlab/galb_tensor.hpp"
#include "qlab/gauge.hpp"
#include "qlab/integration.hpp"
#include "qlab/json_io.hpp"
#include "qlab/suites.hpp"

namespace fs = std::filesystem;
using qlab::io::json;

namespace {

struct Config {
  std::uint64_t seed = 0;
  int trials = 0;  // 0: command default
  double tol = 1e-9;
  int budget = 0;  // 0: command default
  std::string out;
  std::string format = "json";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qlab::InputError("cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline JSON when the argument starts like JSON, otherwise a file path.
json load(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  const bool inline_json = first != std::string::npos && (arg[first] == '{' || arg[first] == '[');
  const std::string text = inline_json ? arg : read_file(arg);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw qlab::InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::string plain_number(double v) {
  std::string s = qlab::io::shortest(v);
  if (s.find_first_of(".eEin") == std::string::npos) s += ".0";
  return s;
}

/// Writes `text` to <out>/<name> when --out is set, else to stdout.
std::string emit(const Config& cfg, const std::string& name, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return {};
  }
  fs::create_directories(cfg.out);
  const fs::path path = fs::path(cfg.out) / fs::path(name).filename();
  std::ofstream o(path, std::ios::binary);
  if (!o) throw qlab::InputError("cannot write \"" + path.string() + "\"");
  o << text;
  return path.string();
}

/// JSON, or CSV when a table is available and --format csv.
std::string render(const Config& cfg, const json& doc, const json* table) {
  if (cfg.format == "csv") {
    if (!table) throw qlab::InputError("this command has no tabular output; use --format json");
    return qlab::io::to_csv(qlab::io::table_to_csv(*table));
  }
  return qlab::io::dump(doc) + "\n";
}

json table_of(const std::vector<std::string>& columns, const json& row) {
  json t{{"columns", columns}, {"rows", json::array()}};
  t["rows"].push_back(row);
  return t;
}

qlab::ScalarField field_arg(const std::string& arg) { return qlab::io::scalar_from_json(load(arg)); }

qlab::MeasureSpace space_arg(const std::string& arg, std::size_t atoms) {
  if (arg.empty()) return qlab::MeasureSpace::counting(atoms);
  return qlab::io::measure_from_json(load(arg));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlab: quasi-norm laboratory on finite measure spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--trials", cfg.trials, "trial count (default depends on the command)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", cfg.tol, "tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--budget", cfg.budget, "search budget (default depends on the command)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out, "output directory (stdout when unset)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string gauge_arg, space_json, field_json, vector_json, target_json;
  auto* eval = app.add_subcommand("eval", "evaluate a gauge on a field");
  eval->add_option("--gauge", gauge_arg, "gauge JSON")->required();
  eval->add_option("--space", space_json, "measure space JSON (counting measure when unset)");
  auto* eval_f = eval->add_option("--field", field_json, "scalar field JSON");
  auto* eval_v = eval->add_option("--vector-field", vector_json, "vector field JSON");
  eval->add_option("--target", target_json, "target space JSON for --vector-field");
  eval_f->excludes(eval_v);

  std::string suite_name, outer_json, inner_json;
  double suite_p = 0.5;
  std::size_t max_n = 0;
  auto* suite = app.add_subcommand("suite", "run a named property suite");
  suite->add_option("name", suite_name, "suite name")->required();
  suite->add_option("--outer", outer_json, "outer gauge JSON (mii)");
  suite->add_option("--inner", inner_json, "inner gauge JSON (mii)");
  suite->add_option("--p", suite_p, "exponent (counterexample)")->capture_default_str();
  suite->add_option("--max-n", max_n, "largest size");

  std::vector<std::string> report_inputs;
  auto* report = app.add_subcommand("report", "merge suite outputs into one artifact");
  report->add_option("inputs", report_inputs, "suite output files (JSON or CSV)");

  double rp = 0.5;
  std::size_t rn = 4;
  auto* rolewicz = app.add_subcommand("rolewicz", "Riemann-sum counterexample in L_p");
  rolewicz->add_option("--p", rp, "exponent in (0,1]")->capture_default_str();
  rolewicz->add_option("--n", rn, "number of atoms")->capture_default_str();

  std::string matrix_json, space_a_json, space_b_json;
  auto* mii = app.add_subcommand("mii", "iterated-gauge comparison on a matrix");
  mii->add_option("--outer", outer_json, "outer gauge JSON")->required();
  mii->add_option("--inner", inner_json, "inner gauge JSON")->required();
  mii->add_option("--matrix", matrix_json, "nonnegative matrix JSON (array of rows)")->required();
  mii->add_option("--space-a", space_a_json, "row measure space (counting when unset)");
  mii->add_option("--space-b", space_b_json, "column measure space (counting when unset)");

  std::string x_json, a_json;
  auto* galb = app.add_subcommand("galb-estimate", "lower bound on the galb gauge");
  galb->add_option("--X", x_json, "quasi-normed space JSON")->required();
  galb->add_option("--a", a_json, "coefficient array JSON")->required();

  std::string rep_json;
  auto* tensor = app.add_subcommand("tensor-norm", "upper bound on the tensor quasi-norm");
  tensor->add_option("--rep", rep_json, "TensorRep JSON")->required();
  tensor->add_option("--space", space_json, "measure space JSON (counting when unset)");

  double env_p = 1.0;
  auto* envelope = app.add_subcommand("envelope", "p-norm envelope (upper bound)");
  envelope->add_option("--gauge", gauge_arg, "gauge JSON")->required();
  envelope->add_option("--p", env_p, "exponent in (0,1]")->capture_default_str();
  envelope->add_option("--space", space_json, "measure space JSON (counting when unset)");
  envelope->add_option("--field", field_json, "scalar field JSON")->required();

  auto* dual = app.add_subcommand("dual", "associated (dual) gauge");
  dual->add_option("--gauge", gauge_arg, "gauge JSON")->required();
  dual->add_option("--space", space_json, "measure space JSON (counting when unset)");
  dual->add_option("--field", field_json, "scalar field JSON")->required();

  std::string grid_json;
  std::vector<double> schedule;
  auto* ftc = app.add_subcommand("ftc", "maximal function and differentiation on a grid");
  ftc->add_option("--grid", grid_json, "grid JSON {\"d\":1,\"cells\":N}")->required();
  ftc->add_option("--field", field_json, "flat grid field (point mass at the center when unset)");
  ftc->add_option("--schedule", schedule, "halfwidths for a differentiation table over all cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cfg.trials < 0 || cfg.budget < 0) throw qlab::InputError("trials and budget must be >= 0");

    if (*eval) {
      const auto g = qlab::io::gauge_from_json(load(gauge_arg));
      qlab::BoundResult r;
      if (!vector_json.empty()) {
        if (target_json.empty()) throw qlab::InputError("--vector-field needs --target");
        const auto F = qlab::io::vector_from_json(load(vector_json));
        const auto X = qlab::io::space_from_json(load(target_json));
        r = qlab::eval_vector_gauge(g, space_arg(space_json, F.size()), X, F);
      } else {
        if (field_json.empty()) throw qlab::InputError("eval needs --field or --vector-field");
        const auto f = field_arg(field_json);
        r = qlab::eval_gauge(g, space_arg(space_json, f.size()), f);
      }
      std::string line = plain_number(r.value) + " " + std::string(qlab::to_string(r.tag));
      if (!r.witness.empty() && !cfg.out.empty()) {
        line += " " + emit(cfg, "eval_witness.json", qlab::io::dump(qlab::io::to_json(r)) + "\n");
      }
      std::cout << line << "\n";
      return 0;
    }

    if (*suite) {
      qlab::suites::SuiteConfig sc;
      sc.seed = cfg.seed;
      if (cfg.trials > 0) sc.trials = cfg.trials;
      if (cfg.budget > 0) sc.budget = cfg.budget;
      sc.tol = cfg.tol;
      if (!outer_json.empty()) sc.outer = load(outer_json);
      if (!inner_json.empty()) sc.inner = load(inner_json);
      sc.p = suite_p;
      if (max_n > 0) sc.max_n = max_n;
      const auto outcome = qlab::suites::run(suite_name, sc);
      const json* table = outcome.table ? &*outcome.table : nullptr;
      const std::string ext = cfg.format == "csv" ? ".csv" : ".json";
      const auto path = emit(cfg, suite_name + ext, render(cfg, outcome.report, table));
      if (!path.empty())
        std::cout << suite_name << ": " << (outcome.exit_code == 0 ? "PASS" : "FAIL") << " -> " << path << "\n";
      return outcome.exit_code;
    }

    if (*report) {
      if (report_inputs.empty()) throw qlab::InputError("report needs at least one input");
      json merged{{"sections", json::object()}};
      for (const auto& path : report_inputs) {
        const std::string text = read_file(path);
        const std::string key = fs::path(path).stem().string();
        if (fs::path(path).extension() == ".csv") {
          merged["sections"][key] = qlab::io::csv_to_table(qlab::io::parse_csv(text));
        } else {
          try {
            merged["sections"][key] = json::parse(text);
          } catch (const json::parse_error& e) {
            throw qlab::InputError("malformed JSON in \"" + path + "\"");
          }
        }
      }
      if (cfg.format == "csv") {
        if (report_inputs.size() != 1 || !merged["sections"].begin()->contains("rows"))
          throw qlab::InputError("CSV report needs exactly one tabular input");
        emit(cfg, "report.csv", render(cfg, merged, &*merged["sections"].begin()));
      } else {
        emit(cfg, "report.json", render(cfg, merged, nullptr));
      }
      return 0;
    }

    if (*rolewicz) {
      const auto r = qlab::rolewicz_counterexample(rp, rn);
      const json j = qlab::io::to_json(r);
      const json t = table_of({"p", "n", "sup_part_norm", "riemann_sum_norm", "ratio"},
                              {j["p"], j["n"], j["sup_part_norm"], j["riemann_sum_norm"], j["ratio"]});
      emit(cfg, std::string("rolewicz") + (cfg.format == "csv" ? ".csv" : ".json"), render(cfg, j, &t));
      return 0;
    }

    if (*mii) {
      const auto outer = qlab::io::gauge_from_json(load(outer_json));
      const auto inner = qlab::io::gauge_from_json(load(inner_json));
      const json mj = load(matrix_json);
      if (!mj.is_array() || mj.empty() || !mj.front().is_array()) throw qlab::InputError("matrix must be an array of rows");
      qlab::Matrix m(mj.size(), mj.front().size());
      for (std::size_t i = 0; i < m.rows; ++i) {
        const auto row = qlab::io::detail::numbers(mj[i], "matrix");
        if (row.size() != m.cols) throw qlab::DimensionError("matrix rows must have equal length");
        for (std::size_t k = 0; k < m.cols; ++k) m(i, k) = row[k];
      }
      const auto r = qlab::mii_check(outer, space_arg(space_a_json, m.rows), inner, space_arg(space_b_json, m.cols), m);
      const json j = qlab::io::to_json(r);
      const json t = table_of({"lhs", "rhs", "ratio", "rows", "cols"}, {j["lhs"], j["rhs"], j["ratio"], j["rows"], j["cols"]});
      emit(cfg, std::string("mii") + (cfg.format == "csv" ? ".csv" : ".json"), render(cfg, j, &t));
      return 0;
    }

    if (*galb) {
      const auto X = qlab::io::space_from_json(load(x_json));
      const auto a = qlab::io::detail::numbers(load(a_json), "a");
      const auto r = qlab::galb_gauge_estimate(X, a, cfg.budget > 0 ? cfg.budget : 200, cfg.seed);
      json j = qlab::io::to_json(r.bound);
      j["coefficients"] = r.witness.coefficients;
      emit(cfg, "galb.json", render(cfg, j, nullptr));
      return 0;
    }

    if (*tensor) {
      const auto rep = qlab::io::tensor_from_json(load(rep_json));
      if (rep.terms.empty()) throw qlab::InputError("representation has no terms");
      const auto space = space_arg(space_json, rep.terms.front().f.size());
      const auto r = qlab::tensor_norm_estimate(rep, space, cfg.budget > 0 ? cfg.budget : 2000, cfg.seed);
      json j = qlab::io::to_json(r.bound);
      j.erase("witness");
      j["representation"] = qlab::io::to_json(r.best);
      j["bochner_norm"] = qlab::bochner_norm(rep, space);
      emit(cfg, "tensor_norm.json", render(cfg, j, nullptr));
      return 0;
    }

    if (*envelope) {
      const auto g = qlab::io::gauge_from_json(load(gauge_arg));
      const auto f = field_arg(field_json);
      const auto r = qlab::p_envelope(g, env_p, space_arg(space_json, f.size()), f, cfg.budget > 0 ? cfg.budget : 20,
                                      cfg.seed);
      json j = qlab::io::to_json(r.bound);
      emit(cfg, "envelope.json", render(cfg, j, nullptr));
      return 0;
    }

    if (*dual) {
      const auto g = qlab::io::gauge_from_json(load(gauge_arg));
      const auto f = field_arg(field_json);
      const auto r = qlab::dual_gauge(g, space_arg(space_json, f.size()), f, cfg.budget > 0 ? cfg.budget : 20, cfg.seed);
      emit(cfg, "dual.json", render(cfg, qlab::io::to_json(r), nullptr));
      return 0;
    }

    if (*ftc) {
      const auto grid = qlab::io::grid_from_json(load(grid_json));
      qlab::ScalarField f;
      if (field_json.empty()) {
        f = qlab::ScalarField(std::vector<double>(grid.size(), 0.0));
        f[grid.flat(grid.cells() / 2, grid.cells() / 2)] = static_cast<double>(grid.size());
      } else {
        f = field_arg(field_json);
      }
      if (f.size() != grid.size()) throw qlab::DimensionError("field length must equal the grid size");
      json j{{"grid", {{"d", grid.dim()}, {"cells", grid.cells()}}},
             {"weak11_constant", qlab::weak11_constant(grid, f, grid.all_scales())}};
      json t{{"columns", {"halfwidth", "max_error"}}, {"rows", json::array()}};
      if (!schedule.empty()) {
        qlab::VectorField F(f.size(), 1);
        std::vector<std::size_t> cells(grid.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
          F.at(i)[0] = f[i];
          cells[i] = i;
        }
        for (const auto& r : qlab::differentiation_report(grid, qlab::QuasiNormedSpace::lq(1, 1.0), F, cells, schedule))
          t["rows"].push_back({r.halfwidth, r.max_error});
        j["differentiation"] = t;
      }
      emit(cfg, std::string("ftc") + (cfg.format == "csv" ? ".csv" : ".json"),
           render(cfg, j, schedule.empty() ? nullptr : &t));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
