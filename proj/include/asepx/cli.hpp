#ifndef ASEPX_CLI_HPP
#define ASEPX_CLI_HPP

// The asepx command line. run() returns the process exit code: 0 on success,
// 1 on a computation error or a failed check, 2 on a usage error.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asepx/algebra_checks.hpp"
#include "asepx/asep_core.hpp"
#include "asepx/ctm.hpp"
#include "asepx/json_io.hpp"
#include "asepx/mlq.hpp"
#include "asepx/scalar.hpp"

namespace asepx::cli {

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string subcommand;
  int n = -1;
  int L = -1;
  std::vector<int> mult;
  std::string method = "kernel";
  std::string q = "1";
  double t = 0.5;
  double horizon = 20000;
  double burn_in = 100;
  int batches = 100;
  int alpha = -1;
  int l = 1;
  int fock_dim = 10;
  int trials = 5;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string check;
  bool all_methods = false;
  bool dump_mlq = false;
  bool compare = false;
};

inline Rational parse_flag_rational(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw UsageError("--" + flag + " expects a rational 'p/q', got '" + text + "'");
  }
}

/// Checks --mult against --n and --L, filling in whichever was omitted.
inline Multiplicity sector_of(RunConfig& c) {
  if (c.mult.empty()) throw UsageError("--mult is required");
  if (std::any_of(c.mult.begin(), c.mult.end(), [](int v) { return v < 0; }))
    throw UsageError("--mult entries must be nonnegative");
  const int n = static_cast<int>(c.mult.size()) - 1;
  const int L = std::accumulate(c.mult.begin(), c.mult.end(), 0);
  if (n < 1) throw UsageError("--mult needs at least two entries");
  if (c.n >= 0 && c.n != n) throw UsageError("--mult has " + std::to_string(n + 1) + " entries but --n is " + std::to_string(c.n));
  if (c.L >= 0 && c.L != L) throw UsageError("--mult sums to " + std::to_string(L) + " but --L is " + std::to_string(c.L));
  c.n = n;
  c.L = L;
  return Multiplicity(c.mult);
}

inline Json header(const std::string& command) { return Json{{"schema", kSchema}, {"command", command}}; }

inline SectorVector compute_state(const std::string& method, const Multiplicity& m, const Rational& q) {
  if (method == "kernel") return canonicalize(stationary_kernel(m));
  if (method == "mlq") return canonicalize(mlq_state(m, q));
  if (method == "mp") return mp_stationary(m);
  throw UsageError("unknown method '" + method + "' (expected kernel, mlq or mp)");
}

inline Json mlq_dump(const Multiplicity& m, const Rational& q) {
  Json list = Json::array();
  for_each_mlq(m, q, [&](const Mlq& x) { list.push_back(to_json(x)); });
  return list;
}

inline int cmd_sector(RunConfig& c, std::ostream& out) {
  const Multiplicity m = sector_of(c);
  const SectorBasis basis(m);
  const SparseMatrixRF H = markov_sector(basis);
  Json j = header("sector");
  j["n"] = c.n;
  j["L"] = c.L;
  j["mult"] = c.mult;
  j["basic"] = m.basic();
  Json b = Json::array();
  for (const auto& cfg : basis.configs()) b.push_back(config_to_string(cfg));
  j["basis"] = b;
  Json e = Json::array();
  for (const auto& [rc, v] : H.entries) e.push_back(Json::array({rc.first, rc.second, to_json(v)}));
  j["markov"] = Json{{"dim", H.dim}, {"entries", e}};
  out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_stationary(RunConfig& c, std::ostream& out) {
  const Multiplicity m = sector_of(c);
  const Rational q = parse_flag_rational("q", c.q);
  if (c.format != "json" && c.format != "text") throw UsageError("--format must be json or text");
  if (!c.all_methods && c.method != "kernel" && c.method != "mlq" && c.method != "mp")
    throw UsageError("unknown method '" + c.method + "' (expected kernel, mlq or mp)");
  if (q != 1 && (c.all_methods || c.method != "mlq")) throw UsageError("--q other than 1 applies to --method mlq only");

  SectorVector state;
  Json j = header("stationary");
  j["n"] = c.n;
  j["L"] = c.L;
  j["mult"] = c.mult;
  j["q"] = to_string(q);
  bool equal = true;
  if (c.all_methods) {
    j["method"] = "all";
    Json per = Json::object();
    std::vector<SectorVector> got;
    for (const char* meth : {"kernel", "mlq", "mp"}) {
      got.push_back(compute_state(meth, m, q));
      per[meth] = to_json(got.back());
    }
    equal = got[0].values == got[1].values && got[0].values == got[2].values;
    j["status"] = equal ? "EQUAL" : "DIFFERENT";
    j["methods"] = per;
    state = got[0];
  } else {
    j["method"] = c.method;
    state = compute_state(c.method, m, q);
  }
  j["state"] = to_json(state);
  if (c.dump_mlq) j["mlqs"] = mlq_dump(m, q);

  if (c.format == "text") {
    if (c.all_methods) out << "status " << (equal ? "EQUAL" : "DIFFERENT") << "\n";
    for (std::size_t k = 0; k < state.size(); ++k)
      out << config_to_string(state.basis[k]) << " " << state.values[k].to_string() << "\n";
  } else {
    out << j.dump(2) << "\n";
  }
  return equal ? 0 : 1;
}

inline int cmd_verify(RunConfig& c, std::ostream& out) {
  const auto& names = ladder_names();
  if (std::find(names.begin(), names.end(), c.check) == names.end()) throw UsageError("unknown check '" + c.check + "'");
  if (c.n < 0) c.n = 2;
  if (c.n < 1) throw UsageError("--n must be at least 1");
  if (c.fock_dim < 2) throw UsageError("--fock-dim must be at least 2");
  if (c.trials < 1) throw UsageError("--trials must be at least 1");
  LadderOptions o;
  o.n = c.n;
  o.l = c.l;
  o.fock_dim = c.fock_dim;
  o.trials = c.trials;
  o.seed = c.seed;
  if (!c.mult.empty()) o.mult = sector_of(c);
  const CheckReport r = run_ladder_check(c.check, o);
  Json j = header("verify");
  j["params"] = Json{{"n", c.n}, {"l", c.l}, {"fock_dim", c.fock_dim}, {"trials", c.trials}, {"seed", c.seed}};
  j.update(to_json(r));
  out << j.dump(2) << "\n";
  return r.passed ? 0 : 1;
}

inline int cmd_simulate(RunConfig& c, std::ostream& out) {
  const Multiplicity m = sector_of(c);
  if (c.t < 0) throw UsageError("--t must be nonnegative");
  const GillespieResult g = gillespie(m, c.t, c.horizon, c.burn_in, c.seed, c.batches);
  Json j = header("simulate");
  j["mult"] = c.mult;
  j["t"] = c.t;
  j["horizon"] = c.horizon;
  j["burn_in"] = c.burn_in;
  j["seed"] = c.seed;
  j["events"] = g.events;
  std::vector<Rational> exact;
  if (c.compare) exact = normalized_probabilities(stationary_kernel(m), Rational(c.t));
  Json d = Json::object();
  for (std::size_t k = 0; k < g.basis.size(); ++k) {
    Json e{{"fraction", g.fraction[k]}, {"std_error", g.std_error[k]}};
    if (c.compare) e["exact"] = exact[k].get_d();
    d[config_to_string(g.basis[k])] = e;
  }
  j["distribution"] = d;
  out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_dump_x(RunConfig& c, std::ostream& out) {
  if (c.n < 0) throw UsageError("--n is required");
  if (c.alpha > c.n) throw UsageError("--alpha must lie in 0.." + std::to_string(c.n));
  Json j = header("dump-x");
  j["n"] = c.n;
  Json ops = Json::array();
  const auto X = build_X_all(c.n);
  for (int a = 0; a <= c.n; ++a)
    if (c.alpha < 0 || a == c.alpha) ops.push_back(to_json(X[static_cast<std::size_t>(a)], a));
  j["operators"] = ops;
  out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_dump_mlq(RunConfig& c, std::ostream& out) {
  const Multiplicity m = sector_of(c);
  const Rational q = parse_flag_rational("q", c.q);
  Json j = header("dump-mlq");
  j["mult"] = c.mult;
  j["q"] = to_string(q);
  const Json list = mlq_dump(m, q);
  j["count"] = list.size();
  j["mlqs"] = list;
  out << j.dump(2) << "\n";
  return 0;
}

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact stationary states of the multispecies ASEP on a ring", "asepx"};
  app.require_subcommand(1);

  auto sector_flags = [&](CLI::App* s) {
    s->add_option("--n", c.n, "number of species");
    s->add_option("--L", c.L, "ring length");
    s->add_option("--mult", c.mult, "multiplicities m0,m1,...,mn")->delimiter(',');
  };

  auto* sector = app.add_subcommand("sector", "sector basis and Markov matrix");
  sector_flags(sector);

  auto* stationary = app.add_subcommand("stationary", "stationary state by kernel, MLQ or matrix product");
  sector_flags(stationary);
  stationary->add_option("--method", c.method, "kernel | mlq | mp");
  stationary->add_option("--q", c.q, "MLQ parameter as p/q");
  stationary->add_flag("--all-methods", c.all_methods, "run all three methods and compare");
  stationary->add_flag("--dump-mlq", c.dump_mlq, "also list every multiline queue");
  stationary->add_option("--format", c.format, "json | text");

  auto* verify = app.add_subcommand("verify", "identity checks");
  verify->add_option("check", c.check, "ybe | rll | lt-link | qp | rtt | zf | hat | ms-theorem | stationary")->required();
  verify->add_option("--n", c.n, "rank");
  verify->add_option("--l", c.l, "Fock level for rll");
  verify->add_option("--fock-dim", c.fock_dim, "truncation D");
  verify->add_option("--trials", c.trials, "minimum number of random points");
  verify->add_option("--seed", c.seed, "random seed");
  verify->add_option("--mult", c.mult, "sector for the stationary check")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "continuous-time simulation");
  sector_flags(simulate);
  simulate->add_option("--t", c.t, "hopping rate t (decimal)");
  simulate->add_option("--horizon", c.horizon, "simulated time after burn-in");
  simulate->add_option("--burn-in", c.burn_in, "discarded initial time");
  simulate->add_option("--batches", c.batches, "batches for standard errors");
  simulate->add_option("--seed", c.seed, "random seed");
  simulate->add_flag("--compare", c.compare, "include exact probabilities");

  auto* dumpx = app.add_subcommand("dump-x", "terms of the operators X_alpha(z)");
  dumpx->add_option("--n", c.n, "rank")->required();
  dumpx->add_option("--alpha", c.alpha, "single operator index");

  auto* dumpmlq = app.add_subcommand("dump-mlq", "all multiline queues of a sector");
  sector_flags(dumpmlq);
  dumpmlq->add_option("--q", c.q, "parameter q as p/q");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'asepx --help' for usage\n";
    return 2;
  }

  try {
    if (*sector) return cmd_sector(c, out);
    if (*stationary) return cmd_stationary(c, out);
    if (*verify) return cmd_verify(c, out);
    if (*simulate) return cmd_simulate(c, out);
    if (*dumpx) return cmd_dump_x(c, out);
    if (*dumpmlq) return cmd_dump_mlq(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace asepx::cli

#endif  // ASEPX_CLI_HPP
