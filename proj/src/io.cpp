#include "qw1/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace qw1::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { fail(ErrorCode::ParseError, what); }

void require_object(const Json& j, const std::string& what, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) parse_error(what + " must be a JSON object");
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) parse_error(what + " has unknown field '" + it.key() + "'");
  }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  const auto it = j.find(key);
  if (it == j.end()) parse_error(what + " is missing field '" + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& what) {
  const Json& v = field(j, key, what);
  if (!v.is_number_integer()) parse_error(what + " field '" + key + "' must be an integer");
  return v.get<int>();
}

double real_value(const Json& v, const std::string& what) {
  if (!v.is_number()) parse_error(what + " must be a number");
  return v.get<double>();
}

QuditLayout layout_from(const Json& j, const std::string& what, int cap) {
  return QuditLayout::make(int_field(j, "d", what), int_field(j, "n", what), cap);
}

}  // namespace

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, x);
  return buf;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

CMatrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) parse_error(what + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  CMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      parse_error(what + " must be square (row " + std::to_string(r) + ")");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      const Json& e = row[c];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        parse_error(what + " entry (" + std::to_string(r) + ", " + std::to_string(c) + ") must be [re, im]");
      }
    }
  }
  return m;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({number(m(r, c).real()), number(m(r, c).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

HermitianOperator operator_from_json(const Json& j, int cap) {
  require_object(j, "operator", {"d", "n", "matrix"});
  const QuditLayout layout = layout_from(j, "operator", cap);
  const CMatrix m = matrix_from_json(field(j, "matrix", "operator"), "operator matrix");
  return HermitianOperator(layout, m);
}

DensityMatrix density_from_json(const Json& j, int cap) { return DensityMatrix(operator_from_json(j, cap)); }

Json operator_to_json(const HermitianOperator& x) {
  Json j;
  j["d"] = x.layout().d;
  j["n"] = x.layout().n;
  j["matrix"] = matrix_to_json(x.matrix());
  return j;
}

Distribution distribution_from_json(const Json& j, int cap) {
  require_object(j, "distribution", {"d", "n", "weights"});
  const QuditLayout layout = layout_from(j, "distribution", cap);
  const Json& w = field(j, "weights", "distribution");
  if (!w.is_array()) parse_error("distribution weights must be an array");
  RVector v(static_cast<Eigen::Index>(w.size()));
  for (size_t k = 0; k < w.size(); ++k) v(static_cast<Eigen::Index>(k)) = real_value(w[k], "distribution weight");
  return Distribution::make(layout, std::move(v));
}

Json distribution_to_json(const Distribution& p) {
  Json j;
  j["d"] = p.layout.d;
  j["n"] = p.layout.n;
  Json w = Json::array();
  for (double x : p.weights) w.push_back(number(x));
  j["weights"] = std::move(w);
  return j;
}

KrausChannel channel_from_json(const Json& j, int cap) {
  require_object(j, "channel", {"kind", "d", "n", "p", "omega", "kraus"});
  const Json& kind_j = field(j, "kind", "channel");
  if (!kind_j.is_string()) parse_error("channel kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  const int d = int_field(j, "d", "channel");
  const int n = j.contains("n") ? int_field(j, "n", "channel") : 1;
  const QuditLayout layout = QuditLayout::make(d, n, cap);
  auto probability = [&] { return real_value(field(j, "p", "channel"), "channel p"); };

  if (kind == "kraus") {
    const Json& list = field(j, "kraus", "channel");
    if (!list.is_array() || list.empty()) parse_error("channel kraus must be a non-empty array of matrices");
    std::vector<CMatrix> ops;
    for (const Json& k : list) ops.push_back(matrix_from_json(k, "Kraus operator"));
    return KrausChannel(layout, std::move(ops));
  }
  if (n != 1) parse_error("named channels act on one qudit");
  if (kind == "amplitude_damping") {
    if (d != 2) parse_error("amplitude damping requires d = 2");
    return amplitude_damping(probability());
  }
  if (kind == "depolarizing") {
    DensityMatrix omega = maximally_mixed(layout);
    if (j.contains("omega")) omega = DensityMatrix(HermitianOperator(layout, matrix_from_json(j["omega"], "omega")));
    return depolarizing(probability(), omega);
  }
  parse_error("unknown channel kind '" + kind + "'");
}

Circuit circuit_from_json(const Json& j, int cap) {
  require_object(j, "circuit", {"d", "n", "gates"});
  const int d = int_field(j, "d", "circuit");
  const int n = int_field(j, "n", "circuit");
  const Json& gates_j = field(j, "gates", "circuit");
  if (!gates_j.is_array()) parse_error("circuit gates must be an array");
  std::vector<Gate> gates;
  for (const Json& g : gates_j) {
    require_object(g, "gate", {"support", "unitary"});
    const Json& s = field(g, "support", "gate");
    if (!s.is_array()) parse_error("gate support must be an array of qudit indices");
    Gate gate;
    for (const Json& q : s) {
      if (!q.is_number_integer()) parse_error("gate support entries must be integers");
      gate.support.push_back(q.get<int>());
    }
    gate.unitary = matrix_from_json(field(g, "unitary", "gate"), "gate unitary");
    gates.push_back(std::move(gate));
  }
  return Circuit::make(d, n, std::move(gates), cap);
}

Json certificate_to_json(const W1Certificate& c) {
  Json j;
  j["method"] = method_name(c.method);
  j["value"] = number(c.value);
  j["primal"] = c.primal_value ? number(*c.primal_value) : Json(nullptr);
  j["dual"] = c.dual_value ? number(*c.dual_value) : Json(nullptr);
  j["gap"] = number(c.gap);
  j["iterations"] = c.iterations;
  Json dec = Json::array();
  for (const HermitianOperator& x : c.decomposition) dec.push_back(operator_to_json(x));
  j["decomposition"] = std::move(dec);
  j["witness"] = c.witness ? operator_to_json(*c.witness) : Json(nullptr);
  return j;
}

Json lipschitz_to_json(const LipschitzResult& r) {
  Json j;
  j["value"] = number(r.value);
  Json per = Json::array();
  for (double v : r.per_qudit) per.push_back(number(v));
  j["per_qudit"] = std::move(per);
  return j;
}

Json estimate_to_json(const LipschitzEstimate& e) {
  Json j;
  j["lower"] = number(e.lower);
  j["upper"] = number(e.upper);
  return j;
}

Json classical_to_json(const ClassicalW1& primal, const ClassicalW1Dual& dual, const BoundCheck& shannon) {
  Json j;
  j["value"] = number(primal.value);
  j["dual"] = number(dual.value);
  Json coupling = Json::array();
  for (Eigen::Index r = 0; r < primal.coupling.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < primal.coupling.cols(); ++c) row.push_back(number(primal.coupling(r, c)));
    coupling.push_back(std::move(row));
  }
  j["coupling"] = std::move(coupling);
  Json f = Json::array();
  for (double v : dual.potential) f.push_back(number(v));
  j["potential"] = std::move(f);
  j["entropy_difference"] = number(shannon.lhs);
  j["shannon_bound"] = number(shannon.rhs);
  return j;
}

Json contraction_to_json(const ContractionReport& r) {
  Json j;
  j["n"] = r.n;
  // Closed-form sandwich from the one-to-one norm; "refined" tightens both ends.
  j["bounds"] = {{"lower", number(r.lower)}, {"upper", number(r.closed_form_upper)}};
  j["refined"] = {{"lower", number(r.best_lower)}, {"upper", number(r.upper)}};
  j["exact"] = r.exact ? number(*r.exact) : Json(nullptr);
  j["one_to_one"] = number(r.one_to_one);
  j["diamond"] = number(r.diamond);
  j["depolarizing_parameter"] = r.depolarizing ? number(*r.depolarizing) : Json(nullptr);
  j["lower_witness_value"] = number(r.lower_witness_value);
  j["methods"] = r.methods;
  j["fixed_point"] = operator_to_json(r.omega.op());
  j["lower_witness"] = operator_to_json(r.lower_witness);
  j["best_witness"] = operator_to_json(r.best_witness);
  return j;
}

Json empirical_to_json(const EmpiricalContraction& e) {
  Json j;
  j["value"] = number(e.value);
  j["samples"] = e.samples;
  j["best_sample"] = e.best_sample;
  j["best_qudit"] = e.best_qudit;
  return j;
}

Json check_to_json(const CheckResult& r) {
  Json j;
  j["check"] = r.name;
  j["instance"] = r.index;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["margin"] = number(r.margin);
  j["pass"] = r.pass;
  j["flags"] = r.flags;
  if (!r.message.empty()) j["message"] = r.message;
  Json inst;
  inst["d"] = r.instance.d;
  inst["n"] = r.instance.n;
  inst["trial"] = r.instance.trial;
  inst["seed"] = r.instance.seed;
  for (const auto& [k, v] : r.instance.params) inst[k] = number(v);
  j["descriptor"] = std::move(inst);
  return j;
}

std::string battery_to_jsonl(const BatteryReport& report) {
  std::string out;
  for (const CheckResult& r : report.results) out += dump_line(check_to_json(r));
  Json s;
  s["summary"] = true;
  s["suite"] = report.suite;
  s["seed"] = report.seed;
  s["trials"] = report.trials;
  Json layouts = Json::array();
  for (const QuditLayout& l : report.layouts) layouts.push_back(Json{{"d", l.d}, {"n", l.n}});
  s["layouts"] = std::move(layouts);
  s["results"] = report.results.size();
  s["failures"] = report.failures;
  Json checks = Json::object();
  for (const auto& [name, c] : report.summary) {
    checks[name] = Json{{"count", c.count}, {"failures", c.failures}, {"worst_margin", number(c.worst_margin)}};
  }
  s["checks"] = std::move(checks);
  s["not_run"] = report.not_run;
  out += dump_line(s);
  return out;
}

std::string dump_line(const Json& j) { return j.dump() + "\n"; }
std::string dump_pretty(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qw1::io
