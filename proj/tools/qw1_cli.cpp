// qw1: command-line front end over the C API.
//
// Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qw1/qw1.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 3;

struct Failure {
  int code;
};

void check(qw1_status s) {
  if (s == QW1_OK) return;
  std::fprintf(stderr, "qw1: %s\n", qw1_last_error());
  throw Failure{qw1_status_exit_code(s)};
}

[[noreturn]] void input_error(const std::string& msg) {
  std::fprintf(stderr, "qw1: %s\n", msg.c_str());
  throw Failure{kExitInput};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Operator = std::unique_ptr<qw1_operator, Deleter<qw1_operator, qw1_operator_free>>;
using Dist = std::unique_ptr<qw1_distribution, Deleter<qw1_distribution, qw1_distribution_free>>;
using Channel = std::unique_ptr<qw1_channel, Deleter<qw1_channel, qw1_channel_free>>;
using Circuit = std::unique_ptr<qw1_circuit, Deleter<qw1_circuit, qw1_circuit_free>>;
using Text = std::unique_ptr<char, Deleter<char, qw1_string_free>>;

Operator load_operator(const std::string& path, int cap) {
  qw1_operator* p = nullptr;
  check(qw1_operator_load(path.c_str(), cap, &p));
  return Operator(p);
}

Dist load_distribution(const std::string& path, int cap) {
  qw1_distribution* p = nullptr;
  check(qw1_distribution_load(path.c_str(), cap, &p));
  return Dist(p);
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) input_error("cannot write '" + output + "'");
  out << text;
  if (!out) input_error("cannot write '" + output + "'");
}

void emit(Text text, const std::string& output) { emit(std::string(text.get()), output); }

const std::map<std::string, std::string> kChannelKinds = {
    {"amplitude_damping", "amplitude_damping"},
    {"amplitude-damping", "amplitude_damping"},
    {"depolarizing", "depolarizing"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Wasserstein distance of order 1: distances, Lipschitz constants and contraction bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qw1_version());

  std::string output;
  const int cap = qw1_default_dim_cap();

  // dist
  auto* dist = app.add_subcommand("dist", "W1 distance between two density matrices");
  std::string dist_a, dist_b, method = "both";
  dist->add_option("A", dist_a, "first density matrix (JSON)")->required()->check(CLI::ExistingFile);
  dist->add_option("B", dist_b, "second density matrix (JSON)")->required()->check(CLI::ExistingFile);
  dist->add_option("--method", method, "primal, dual or both")
      ->check(CLI::IsMember({"primal", "dual", "both"}))
      ->capture_default_str();
  dist->add_option("-o,--output", output, "write to this file instead of stdout");

  // lip
  auto* lip = app.add_subcommand("lip", "quantum Lipschitz constant of an observable");
  std::string lip_h;
  bool lip_exact = false, lip_estimate = false;
  lip->add_option("H", lip_h, "Hermitian operator (JSON)")->required()->check(CLI::ExistingFile);
  auto* exact_flag = lip->add_flag("--exact", lip_exact, "solve the per-qudit SDPs (default)");
  lip->add_flag("--estimate", lip_estimate, "closed-form (lower, upper) sandwich")->excludes(exact_flag);
  lip->add_option("-o,--output", output, "write to this file instead of stdout");

  // classical
  auto* classical = app.add_subcommand("classical", "classical W1 (Ornstein distance) between distributions");
  std::string cl_p, cl_q;
  classical->add_option("p", cl_p, "first distribution (JSON)")->required()->check(CLI::ExistingFile);
  classical->add_option("q", cl_q, "second distribution (JSON)")->required()->check(CLI::ExistingFile);
  classical->add_option("-o,--output", output, "write to this file instead of stdout");

  // channel
  auto* channel = app.add_subcommand("channel", "W1 contraction bounds of a channel power or a circuit");
  std::string ch_spec, ch_circuit;
  double ch_p = 0.0;
  int ch_n = 1, ch_d = 2, ch_samples = 100;
  std::uint64_t ch_seed = 1;
  auto* ch_opt = channel->add_option("--channel", ch_spec, "amplitude_damping, depolarizing, or a channel JSON file");
  channel->add_option("--p", ch_p, "channel parameter")->needs(ch_opt);
  channel->add_option("--n", ch_n, "number of tensor factors")->check(CLI::PositiveNumber)->capture_default_str();
  channel->add_option("--d", ch_d, "local dimension of a named channel")
      ->check(CLI::Range(2, 1 << 10))
      ->capture_default_str();
  channel->add_option("--samples", ch_samples, "empirical neighboring-pair samples")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  channel->add_option("--seed", ch_seed, "sampling seed")->capture_default_str();
  channel->add_option("--circuit", ch_circuit, "circuit JSON file")->check(CLI::ExistingFile)->excludes(ch_opt);
  channel->add_option("-o,--output", output, "write to this file instead of stdout");

  // concentration
  auto* conc = app.add_subcommand("concentration", "Gaussian concentration and spectral tail checks");
  std::string conc_h;
  std::vector<double> ts = {0.5, 1.0}, deltas = {1.0};
  conc->add_option("H", conc_h, "Hermitian operator (JSON)")->required()->check(CLI::ExistingFile);
  conc->add_option("--t", ts, "moment-generating parameters")->capture_default_str();
  conc->add_option("--delta", deltas, "tail deviations per qudit")->capture_default_str();
  conc->add_option("-o,--output", output, "write to this file instead of stdout");

  // verify
  auto* verify = app.add_subcommand("verify", "randomized inequality battery, JSON lines");
  std::string suite = "all";
  std::uint64_t v_seed = 42;
  int v_trials = 100, v_d = 2;
  std::vector<int> v_ns;
  verify->add_option("--suite", suite, "all or one module name")->capture_default_str();
  verify->add_option("--seed", v_seed, "battery seed")->capture_default_str();
  verify->add_option("--trials", v_trials, "instances per check and layout")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--d", v_d, "local dimension")->check(CLI::Range(2, 1 << 10))->capture_default_str();
  verify->add_option("--n", v_ns, "qudit counts (default 1 2 3)")->check(CLI::PositiveNumber);
  verify->add_option("-o,--output", output, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (dist->parsed()) {
      const qw1_method m = method == "primal" ? QW1_METHOD_PRIMAL : method == "dual" ? QW1_METHOD_DUAL : QW1_METHOD_BOTH;
      const Operator a = load_operator(dist_a, cap);
      const Operator b = load_operator(dist_b, cap);
      char* out = nullptr;
      check(qw1_w1_distance(a.get(), b.get(), m, &out));
      emit(Text(out), output);
    } else if (lip->parsed()) {
      const Operator h = load_operator(lip_h, cap);
      char* out = nullptr;
      check(qw1_lipschitz(h.get(), lip_estimate ? 0 : 1, &out));
      emit(Text(out), output);
    } else if (classical->parsed()) {
      const Dist p = load_distribution(cl_p, cap);
      const Dist q = load_distribution(cl_q, cap);
      char* out = nullptr;
      check(qw1_classical(p.get(), q.get(), &out));
      emit(Text(out), output);
    } else if (channel->parsed()) {
      char* out = nullptr;
      if (!ch_circuit.empty()) {
        qw1_circuit* c = nullptr;
        check(qw1_circuit_load(ch_circuit.c_str(), cap, &c));
        const Circuit circuit(c);
        check(qw1_circuit_bounds(circuit.get(), ch_samples, ch_seed, &out));
      } else {
        if (ch_spec.empty()) input_error("channel: one of --channel or --circuit is required");
        qw1_channel* raw = nullptr;
        const auto kind = kChannelKinds.find(ch_spec);
        if (kind != kChannelKinds.end()) {
          if (channel->count("--p") == 0) input_error("channel: --p is required for " + ch_spec);
          check(qw1_channel_named(kind->second.c_str(), ch_d, ch_p, &raw));
        } else {
          if (channel->count("--p") != 0) input_error("channel: --p only applies to named channels");
          std::ifstream probe(ch_spec);
          if (!probe) input_error("channel: '" + ch_spec + "' is neither a channel kind nor a readable file");
          check(qw1_channel_load(ch_spec.c_str(), cap, &raw));
        }
        const Channel ch(raw);
        check(qw1_channel_bounds(ch.get(), ch_n, ch_samples, ch_seed, cap, &out));
      }
      emit(Text(out), output);
    } else if (conc->parsed()) {
      const Operator h = load_operator(conc_h, cap);
      char* out = nullptr;
      check(qw1_concentration(h.get(), ts.data(), ts.size(), deltas.data(), deltas.size(), &out));
      emit(Text(out), output);
    } else if (verify->parsed()) {
      char* out = nullptr;
      int failures = 0;
      check(qw1_verify(suite.c_str(), v_seed, v_trials, v_d, v_ns.data(), v_ns.size(), &out, &failures));
      emit(Text(out), output);
      if (failures > 0) {
        std::fprintf(stderr, "qw1: %d check(s) failed\n", failures);
        return kExitVerify;
      }
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitOk;
}
