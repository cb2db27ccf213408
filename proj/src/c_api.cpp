#include "qw1/qw1.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "qw1/io.hpp"

struct qw1_operator {
  qw1::HermitianOperator value;
};
struct qw1_distribution {
  qw1::Distribution value;
};
struct qw1_channel {
  qw1::KrausChannel value;
};
struct qw1_circuit {
  qw1::Circuit value;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument {
  std::string name;
};

qw1_status to_status(qw1::ErrorCode code) {
  using qw1::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return QW1_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return QW1_ERR_DIMENSION_MISMATCH;
    case ErrorCode::CapExceeded: return QW1_ERR_CAP_EXCEEDED;
    case ErrorCode::IndexOutOfRange: return QW1_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::NotHermitian: return QW1_ERR_NOT_HERMITIAN;
    case ErrorCode::NotDensity: return QW1_ERR_NOT_DENSITY;
    case ErrorCode::NotTraceless: return QW1_ERR_NOT_TRACELESS;
    case ErrorCode::LayoutMismatch: return QW1_ERR_LAYOUT_MISMATCH;
    case ErrorCode::LengthMismatch: return QW1_ERR_LENGTH_MISMATCH;
    case ErrorCode::SupportMismatch: return QW1_ERR_SUPPORT_MISMATCH;
    case ErrorCode::SupportViolation: return QW1_ERR_SUPPORT_VIOLATION;
    case ErrorCode::ParameterRange: return QW1_ERR_PARAMETER_RANGE;
    case ErrorCode::EigenFailure: return QW1_ERR_EIGEN_FAILURE;
    case ErrorCode::NoFixedPoint: return QW1_ERR_NO_FIXED_POINT;
    case ErrorCode::SolverFailure: return QW1_ERR_SOLVER_FAILURE;
    case ErrorCode::ParseError: return QW1_ERR_PARSE;
  }
  return QW1_ERR_INTERNAL;
}

template <class F>
qw1_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return QW1_OK;
  } catch (const NullArgument& e) {
    g_last_error = e.name + " is null";
    return QW1_ERR_NULL_ARGUMENT;
  } catch (const qw1::Error& e) {
    g_last_error = std::string(qw1::error_code_name(e.code())) + ": " + e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return QW1_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error";
    return QW1_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qw1::W1Method to_method(qw1_method m) {
  switch (m) {
    case QW1_METHOD_PRIMAL: return qw1::W1Method::Primal;
    case QW1_METHOD_DUAL: return qw1::W1Method::Dual;
    case QW1_METHOD_BOTH: return qw1::W1Method::Both;
  }
  throw qw1::Error(qw1::ErrorCode::InvalidArgument, "unknown method");
}

int resolve_cap(int cap) { return cap > 0 ? cap : qw1_default_dim_cap(); }

template <class Handle, class Parse>
qw1_status make_handle(Handle** out, Parse&& parse) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = new Handle{parse()};
  });
}

}  // namespace

extern "C" {

const char* qw1_version(void) { return "1.0.0"; }

const char* qw1_status_name(qw1_status status) {
  switch (status) {
    case QW1_OK: return "ok";
    case QW1_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case QW1_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case QW1_ERR_CAP_EXCEEDED: return "cap_exceeded";
    case QW1_ERR_INDEX_OUT_OF_RANGE: return "index_out_of_range";
    case QW1_ERR_NOT_HERMITIAN: return "not_hermitian";
    case QW1_ERR_NOT_DENSITY: return "not_density";
    case QW1_ERR_NOT_TRACELESS: return "not_traceless";
    case QW1_ERR_LAYOUT_MISMATCH: return "layout_mismatch";
    case QW1_ERR_LENGTH_MISMATCH: return "length_mismatch";
    case QW1_ERR_SUPPORT_MISMATCH: return "support_mismatch";
    case QW1_ERR_SUPPORT_VIOLATION: return "support_violation";
    case QW1_ERR_PARAMETER_RANGE: return "parameter_range";
    case QW1_ERR_EIGEN_FAILURE: return "eigen_failure";
    case QW1_ERR_NO_FIXED_POINT: return "no_fixed_point";
    case QW1_ERR_SOLVER_FAILURE: return "solver_failure";
    case QW1_ERR_PARSE: return "parse_error";
    case QW1_ERR_NULL_ARGUMENT: return "null_argument";
    case QW1_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* qw1_last_error(void) { return g_last_error.c_str(); }

void qw1_string_free(char* s) { std::free(s); }

int qw1_default_dim_cap(void) {
  const char* env = std::getenv("QW1_DIM_CAP");
  if (env == nullptr || *env == '\0') return qw1::kDefaultDimCap;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v <= 0 || v > (1L << 20)) return qw1::kDefaultDimCap;
  return static_cast<int>(v);
}

int qw1_status_exit_code(qw1_status status) {
  switch (status) {
    case QW1_OK: return 0;
    case QW1_ERR_SOLVER_FAILURE:
    case QW1_ERR_EIGEN_FAILURE:
    case QW1_ERR_INTERNAL: return 2;
    default: return 1;
  }
}

qw1_status qw1_operator_parse(const char* json, int cap, qw1_operator** out) {
  return make_handle(out, [&] {
    require(json, "json");
    return qw1::io::operator_from_json(qw1::io::parse(json), resolve_cap(cap));
  });
}

qw1_status qw1_operator_load(const char* path, int cap, qw1_operator** out) {
  return make_handle(out, [&] {
    require(path, "path");
    return qw1::io::operator_from_json(qw1::io::read_file(path), resolve_cap(cap));
  });
}

qw1_status qw1_operator_dims(const qw1_operator* op, int* d, int* n) {
  return guarded([&] {
    require(op, "operator");
    if (d) *d = op->value.layout().d;
    if (n) *n = op->value.layout().n;
  });
}

void qw1_operator_free(qw1_operator* op) { delete op; }

qw1_status qw1_distribution_parse(const char* json, int cap, qw1_distribution** out) {
  return make_handle(out, [&] {
    require(json, "json");
    return qw1::io::distribution_from_json(qw1::io::parse(json), resolve_cap(cap));
  });
}

qw1_status qw1_distribution_load(const char* path, int cap, qw1_distribution** out) {
  return make_handle(out, [&] {
    require(path, "path");
    return qw1::io::distribution_from_json(qw1::io::read_file(path), resolve_cap(cap));
  });
}

void qw1_distribution_free(qw1_distribution* p) { delete p; }

qw1_status qw1_channel_parse(const char* json, int cap, qw1_channel** out) {
  return make_handle(out, [&] {
    require(json, "json");
    return qw1::io::channel_from_json(qw1::io::parse(json), resolve_cap(cap));
  });
}

qw1_status qw1_channel_load(const char* path, int cap, qw1_channel** out) {
  return make_handle(out, [&] {
    require(path, "path");
    return qw1::io::channel_from_json(qw1::io::read_file(path), resolve_cap(cap));
  });
}

qw1_status qw1_channel_named(const char* kind, int d, double p, qw1_channel** out) {
  return make_handle(out, [&] {
    require(kind, "kind");
    qw1::io::Json j;
    j["kind"] = kind;
    j["d"] = d;
    j["p"] = p;
    return qw1::io::channel_from_json(j, qw1::kDefaultDimCap);
  });
}

void qw1_channel_free(qw1_channel* ch) { delete ch; }

qw1_status qw1_circuit_parse(const char* json, int cap, qw1_circuit** out) {
  return make_handle(out, [&] {
    require(json, "json");
    return qw1::io::circuit_from_json(qw1::io::parse(json), resolve_cap(cap));
  });
}

qw1_status qw1_circuit_load(const char* path, int cap, qw1_circuit** out) {
  return make_handle(out, [&] {
    require(path, "path");
    return qw1::io::circuit_from_json(qw1::io::read_file(path), resolve_cap(cap));
  });
}

void qw1_circuit_free(qw1_circuit* c) { delete c; }

qw1_status qw1_w1_distance(const qw1_operator* rho, const qw1_operator* sigma, qw1_method method, char** json_out) {
  return guarded([&] {
    require(rho, "rho");
    require(sigma, "sigma");
    require(json_out, "json_out");
    const qw1::DensityMatrix a(rho->value);
    const qw1::DensityMatrix b(sigma->value);
    const qw1::W1Certificate c = qw1::w1_distance(a, b, to_method(method));
    *json_out = copy_string(qw1::io::dump_pretty(qw1::io::certificate_to_json(c)));
  });
}

qw1_status qw1_w1_norm(const qw1_operator* x, qw1_method method, double* value) {
  return guarded([&] {
    require(x, "operator");
    require(value, "value");
    *value = qw1::w1_norm(x->value, to_method(method)).value;
  });
}

qw1_status qw1_lipschitz(const qw1_operator* h, int exact, char** json_out) {
  return guarded([&] {
    require(h, "operator");
    require(json_out, "json_out");
    qw1::io::Json j;
    if (exact) {
      j = qw1::io::lipschitz_to_json(qw1::lipschitz_constant(h->value));
      j["mode"] = "exact";
    } else {
      j = qw1::io::estimate_to_json(qw1::lipschitz_estimate(h->value));
      j["mode"] = "estimate";
    }
    *json_out = copy_string(qw1::io::dump_pretty(j));
  });
}

qw1_status qw1_lipschitz_value(const qw1_operator* h, double* value) {
  return guarded([&] {
    require(h, "operator");
    require(value, "value");
    *value = qw1::lipschitz_constant(h->value).value;
  });
}

qw1_status qw1_classical(const qw1_distribution* p, const qw1_distribution* q, char** json_out) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    require(json_out, "json_out");
    const auto primal = qw1::classical_w1(p->value, q->value);
    const auto dual = qw1::classical_w1_dual(p->value, q->value);
    const auto shannon = qw1::shannon_continuity_bound(p->value, q->value);
    *json_out = copy_string(qw1::io::dump_pretty(qw1::io::classical_to_json(primal, dual, shannon)));
  });
}

qw1_status qw1_channel_bounds(const qw1_channel* ch, int n, int samples, uint64_t seed, int cap, char** json_out) {
  return guarded([&] {
    require(ch, "channel");
    require(json_out, "json_out");
    if (samples < 0) throw qw1::Error(qw1::ErrorCode::InvalidArgument, "samples must be nonnegative");
    const int c = resolve_cap(cap);
    const qw1::ContractionReport r = qw1::tensor_power_contraction_bounds(ch->value, n, {}, {}, c);
    qw1::io::Json j = qw1::io::contraction_to_json(r);
    if (samples > 0) {
      j["empirical"] = qw1::io::empirical_to_json(
          qw1::empirical_contraction(qw1::tensor_power(ch->value, n, c), samples, seed));
    }
    *json_out = copy_string(qw1::io::dump_pretty(j));
  });
}

qw1_status qw1_circuit_bounds(const qw1_circuit* c, int samples, uint64_t seed, char** json_out) {
  return guarded([&] {
    require(c, "circuit");
    require(json_out, "json_out");
    if (samples < 0) throw qw1::Error(qw1::ErrorCode::InvalidArgument, "samples must be nonnegative");
    const qw1::LightCones cones = qw1::light_cone_bound(c->value);
    qw1::io::Json j;
    j["cones"] = cones.cones;
    j["bound"] = qw1::io::number(cones.bound);
    if (samples > 0) {
      j["empirical"] =
          qw1::io::empirical_to_json(qw1::empirical_contraction(qw1::circuit_channel(c->value), samples, seed));
    }
    *json_out = copy_string(qw1::io::dump_pretty(j));
  });
}

qw1_status qw1_concentration(const qw1_operator* h, const double* ts, size_t t_count, const double* deltas,
                             size_t delta_count, char** json_out) {
  return guarded([&] {
    require(h, "operator");
    require(json_out, "json_out");
    if (t_count > 0) require(ts, "ts");
    if (delta_count > 0) require(deltas, "deltas");
    const double lip = qw1::lipschitz_constant(h->value).value;
    qw1::io::Json j;
    j["lipschitz"] = qw1::io::number(lip);
    qw1::io::Json checks = qw1::io::Json::array();
    for (size_t k = 0; k < t_count; ++k) checks.push_back(qw1::io::check_to_json(qw1::concentration_mgf(h->value, ts[k], lip)));
    for (size_t k = 0; k < delta_count; ++k) {
      checks.push_back(qw1::io::check_to_json(qw1::spectral_tail(h->value, deltas[k], lip)));
    }
    j["checks"] = std::move(checks);
    *json_out = copy_string(qw1::io::dump_pretty(j));
  });
}

qw1_status qw1_verify(const char* suite, uint64_t seed, int trials, int d, const int* ns, size_t n_count,
                      char** jsonl_out, int* failures) {
  return guarded([&] {
    require(suite, "suite");
    require(jsonl_out, "jsonl_out");
    if (n_count > 0) require(ns, "ns");
    qw1::BatteryOptions opt;
    opt.suite = suite;
    opt.seed = seed;
    opt.trials = trials;
    const int cap = qw1_default_dim_cap();
    if (n_count > 0) opt.layouts.clear();
    for (size_t k = 0; k < n_count; ++k) opt.layouts.push_back(qw1::QuditLayout::make(d, ns[k], cap));
    const qw1::BatteryReport r = qw1::run_battery(opt);
    *jsonl_out = copy_string(qw1::io::battery_to_jsonl(r));
    if (failures) *failures = r.failures;
  });
}

}  // extern "C"
