/* C interface to the qw1 library: quantum W1 distances, Lipschitz constants,
 * classical transport, channel contraction bounds and the verification battery.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns a qw1_status; on failure qw1_last_error() describes the
 * error for the calling thread. Strings returned through char** are owned by
 * the caller and released with qw1_string_free. */
#ifndef QW1_QW1_H
#define QW1_QW1_H

#include <stddef.h>
#include <stdint.h>

#if defined(QW1_BUILDING_LIBRARY)
#define QW1_API __attribute__((visibility("default")))
#else
#define QW1_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qw1_status {
  QW1_OK = 0,
  QW1_ERR_INVALID_ARGUMENT = 1,
  QW1_ERR_DIMENSION_MISMATCH = 2,
  QW1_ERR_CAP_EXCEEDED = 3,
  QW1_ERR_INDEX_OUT_OF_RANGE = 4,
  QW1_ERR_NOT_HERMITIAN = 5,
  QW1_ERR_NOT_DENSITY = 6,
  QW1_ERR_NOT_TRACELESS = 7,
  QW1_ERR_LAYOUT_MISMATCH = 8,
  QW1_ERR_LENGTH_MISMATCH = 9,
  QW1_ERR_SUPPORT_MISMATCH = 10,
  QW1_ERR_SUPPORT_VIOLATION = 11,
  QW1_ERR_PARAMETER_RANGE = 12,
  QW1_ERR_EIGEN_FAILURE = 13,
  QW1_ERR_NO_FIXED_POINT = 14,
  QW1_ERR_SOLVER_FAILURE = 15,
  QW1_ERR_PARSE = 16,
  QW1_ERR_NULL_ARGUMENT = 17,
  QW1_ERR_INTERNAL = 99
} qw1_status;

typedef enum qw1_method { QW1_METHOD_PRIMAL = 0, QW1_METHOD_DUAL = 1, QW1_METHOD_BOTH = 2 } qw1_method;

typedef struct qw1_operator qw1_operator;
typedef struct qw1_distribution qw1_distribution;
typedef struct qw1_channel qw1_channel;
typedef struct qw1_circuit qw1_circuit;

QW1_API const char* qw1_version(void);
QW1_API const char* qw1_status_name(qw1_status status);
/* Message of the last failed call on this thread; "" if none. */
QW1_API const char* qw1_last_error(void);
QW1_API void qw1_string_free(char* s);
/* QW1_DIM_CAP from the environment if set to a positive integer, else 32. */
QW1_API int qw1_default_dim_cap(void);
/* 1 for input errors, 2 for numerical failures, 0 for QW1_OK. */
QW1_API int qw1_status_exit_code(qw1_status status);

/* Operators: {"d", "n", "matrix": [[[re, im], ...], ...]}. */
QW1_API qw1_status qw1_operator_parse(const char* json, int cap, qw1_operator** out);
QW1_API qw1_status qw1_operator_load(const char* path, int cap, qw1_operator** out);
QW1_API qw1_status qw1_operator_dims(const qw1_operator* op, int* d, int* n);
QW1_API void qw1_operator_free(qw1_operator* op);

/* Distributions: {"d", "n", "weights"}. */
QW1_API qw1_status qw1_distribution_parse(const char* json, int cap, qw1_distribution** out);
QW1_API qw1_status qw1_distribution_load(const char* path, int cap, qw1_distribution** out);
QW1_API void qw1_distribution_free(qw1_distribution* p);

/* Channels: {"kind": "kraus" | "amplitude_damping" | "depolarizing", "d", "p", "omega", "kraus"}. */
QW1_API qw1_status qw1_channel_parse(const char* json, int cap, qw1_channel** out);
QW1_API qw1_status qw1_channel_load(const char* path, int cap, qw1_channel** out);
/* kind "amplitude_damping" (d = 2) or "depolarizing" (maximally mixed omega). */
QW1_API qw1_status qw1_channel_named(const char* kind, int d, double p, qw1_channel** out);
QW1_API void qw1_channel_free(qw1_channel* ch);

/* Circuits: {"d", "n", "gates": [{"support": [...], "unitary": matrix}, ...]}. */
QW1_API qw1_status qw1_circuit_parse(const char* json, int cap, qw1_circuit** out);
QW1_API qw1_status qw1_circuit_load(const char* path, int cap, qw1_circuit** out);
QW1_API void qw1_circuit_free(qw1_circuit* c);

/* W1 distance between two density matrices; writes a certificate as JSON. */
QW1_API qw1_status qw1_w1_distance(const qw1_operator* rho, const qw1_operator* sigma, qw1_method method,
                                   char** json_out);
/* W1 norm of a traceless operator. */
QW1_API qw1_status qw1_w1_norm(const qw1_operator* x, qw1_method method, double* value);

/* exact != 0: SDP value and per-qudit terms; otherwise the (lower, upper) sandwich. */
QW1_API qw1_status qw1_lipschitz(const qw1_operator* h, int exact, char** json_out);
QW1_API qw1_status qw1_lipschitz_value(const qw1_operator* h, double* value);

/* Transport LP, its dual and the Shannon continuity bound. */
QW1_API qw1_status qw1_classical(const qw1_distribution* p, const qw1_distribution* q, char** json_out);

/* Contraction bounds of the n-fold tensor power, plus `samples` empirical
 * neighboring-pair ratios when samples > 0. */
QW1_API qw1_status qw1_channel_bounds(const qw1_channel* ch, int n, int samples, uint64_t seed, int cap,
                                      char** json_out);
/* Light cones, their bound, and `samples` empirical ratios of the circuit channel. */
QW1_API qw1_status qw1_circuit_bounds(const qw1_circuit* c, int samples, uint64_t seed, char** json_out);

/* Concentration checks for each t and spectral-tail checks for each delta. */
QW1_API qw1_status qw1_concentration(const qw1_operator* h, const double* ts, size_t t_count, const double* deltas,
                                     size_t delta_count, char** json_out);

/* Runs the battery over layouts (d, ns[k]), or the default layouts when n_count is 0;
 * writes JSON lines and the failure count. */
QW1_API qw1_status qw1_verify(const char* suite, uint64_t seed, int trials, int d, const int* ns, size_t n_count,
                              char** jsonl_out, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* QW1_QW1_H */
