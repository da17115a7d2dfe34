#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "acu/gap_opening.hpp"
#include "acu/generators.hpp"
#include "acu/homotopy.hpp"
#include "acu/invariants.hpp"
#include "acu/io.hpp"
#include "selftest.hpp"

using namespace acu;

namespace {

struct Options {
  std::string input, out, path, certificate, pair_out;
  std::string kind = "voiculescu";
  std::string mode = "certified";
  std::vector<int> ms;
  std::uint64_t seed = 0;
  double c1 = 10.0;
  double scale = 1e-3;
  double tol_commute = kTol.commute;
  std::optional<double> eps;
  std::optional<int> N;
  Index n = 8;
  int m = 8;
  int samples = 32;
};

void emit(const Options& o, const io::Json& j) {
  if (o.out.empty())
    std::cout << j.dump(2) << "\n";
  else
    io::write_json(o.out, j);
}

io::PairFile load_pair(const Options& o) {
  if (o.input.empty()) throw Error(ErrorCode::InvalidInput, "--input is required");
  return io::pair_from_json(io::read_json(o.input));
}

int cmd_gen(const Options& o) {
  InstanceSpec spec;
  spec.kind = parse_instance_kind(o.kind);
  const bool clock = spec.kind == InstanceKind::Voiculescu || spec.kind == InstanceKind::Doubled;
  spec.size = clock ? o.m : o.n;
  spec.scale = o.scale;
  spec.seed = o.seed;
  const Instance inst = make_instance(spec);
  emit(o, io::pair_to_json({inst.u.matrix(), inst.v.matrix(), inst.description, inst.expected_invariant}));
  return 0;
}

int cmd_invariants(const Options& o) {
  const io::PairFile p = load_pair(o);
  InvariantConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.c1 = o.c1;
  const InvariantReport r = compute_invariants(UnitaryMatrix(p.u), UnitaryMatrix(p.v), cfg);
  emit(o, io::to_json(r));
  return 0;
}

int cmd_homotopy(const Options& o) {
  const io::PairFile p = load_pair(o);
  HomotopyConfig cfg;
  cfg.N = o.N;
  cfg.samples = o.samples;
  cfg.mode = parse_mode(o.mode);
  cfg.invariants.c1 = o.c1;
  const Homotopy h = build_homotopy(UnitaryMatrix(p.u), UnitaryMatrix(p.v), cfg);
  io::Json j = io::path_to_json(h.path);
  j["certificate"] = io::to_json(h.certificate);
  emit(o, j);
  if (!o.certificate.empty()) io::write_json(o.certificate, io::to_json(h.certificate));
  return 0;
}

ApproximateConfig approx_config(const Options& o) {
  ApproximateConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.eps = o.eps;
  cfg.N = o.N;
  cfg.samples = o.samples;
  cfg.c1 = o.c1;
  cfg.oracle.commute_tol = o.tol_commute;
  return cfg;
}

int cmd_approximate(const Options& o) {
  const io::PairFile p = load_pair(o);
  const UnitaryMatrix u(p.u), v(p.v);
  const ApproximateConfig cfg = approx_config(o);
  const ApproximantPair r = o.path.empty() ? approximate(u, v, cfg)
                                           : approximate_with_path(u, v, io::path_from_json(io::read_json(o.path)), cfg);
  io::Json j = io::to_json(r.report);
  j["u_prime"] = io::matrix_to_json(r.u.matrix());
  j["v_prime"] = io::matrix_to_json(r.v.matrix());
  emit(o, j);
  if (!o.pair_out.empty())
    io::write_json(o.pair_out, io::pair_to_json({r.u.matrix(), r.v.matrix(), "commuting approximant", 0}));
  return 0;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string opt(const std::optional<int>& x) { return x ? std::to_string(*x) : "nan"; }

int cmd_bench(const Options& o) {
  const InstanceKind kind = parse_instance_kind(o.kind);
  const bool clock = kind == InstanceKind::Voiculescu || kind == InstanceKind::Doubled;
  std::vector<int> sizes = o.ms;
  if (sizes.empty()) sizes = {clock ? o.m : static_cast<int>(o.n)};
  std::ostringstream csv;
  csv << "instance,n_total,delta,eps,N,d,distance_u,distance_v,commutator_residual,winding,isospec,mode,runtime_ms\n";
  int failures = 0;
  for (int s : sizes) {
    InstanceSpec spec{kind, s, o.scale, o.seed};
    const std::string name = to_string(kind) + (clock ? ":m=" : ":n=") + std::to_string(s) + ":seed=" +
                             std::to_string(o.seed);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Instance inst = make_instance(spec);
      const ApproximantPair r = approximate(inst.u, inst.v, approx_config(o));
      const PipelineReport& p = r.report;
      csv << name << "," << p.n_total << "," << fmt(p.delta) << "," << fmt(p.eps) << "," << p.N << "," << p.d << ","
          << fmt(p.distance_u) << "," << fmt(p.distance_v) << "," << fmt(p.commutator_residual) << ","
          << opt(p.winding) << "," << opt(p.isospec) << "," << to_string(p.mode) << "," << fmt(p.runtime_ms) << "\n";
    } catch (const Error& e) {
      ++failures;
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << name << ": " << e.what() << "\n";
      csv << name << ",nan,nan,nan,nan,nan,nan,nan,nan,nan,nan," << o.mode << "," << fmt(ms) << "\n";
    }
    if (o.out.empty()) {
      std::cout << csv.str();
      csv.str("");
    }
  }
  if (!o.out.empty()) io::write_text(o.out, csv.str());
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost commuting unitaries: invariants, homotopies and commuting approximants"};
  app.require_subcommand(1);
  Options o;
  double eps = 0;
  int N = 0;

  auto add_mode = [&](CLI::App* c) {
    c->add_option("--mode", o.mode, "certified or best-effort")->check(CLI::IsMember({"certified", "best-effort", "best_effort"}));
  };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "output file (stdout if omitted)");
    c->add_option("--seed", o.seed, "random seed");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate an instance pair");
  add_common(gen);
  gen->add_option("--kind", o.kind, "voiculescu, doubled, perturbed_commuting");
  gen->add_option("--m", o.m, "clock/shift size");
  gen->add_option("--n", o.n, "dimension for random kinds");
  gen->add_option("--scale", o.scale, "perturbation scale");

  CLI::App* inv = app.add_subcommand("invariants", "winding number and isospectral invariant");
  add_common(inv);
  add_mode(inv);
  inv->add_option("--input", o.input, "pair JSON")->required();
  inv->add_option("--c1", o.c1, "arc separation constant");

  CLI::App* hom = app.add_subcommand("homotopy", "path from v to 1 almost commuting with u");
  add_common(hom);
  add_mode(hom);
  hom->add_option("--input", o.input, "pair JSON")->required();
  hom->add_option("--n", N, "number of arcs N (default from the commutator)");
  hom->add_option("--samples", o.samples, "samples per segment for the certificate");
  hom->add_option("--c1", o.c1, "arc separation constant");
  hom->add_option("--certificate", o.certificate, "also write the certificate here");

  CLI::App* apx = app.add_subcommand("approximate", "exactly commuting unitaries near the input");
  add_common(apx);
  add_mode(apx);
  apx->add_option("--input", o.input, "pair JSON")->required();
  apx->add_option("--path", o.path, "path JSON for v (skips the homotopy)");
  apx->add_option("--eps", eps, "gap opening parameter, 0 < eps < 1/10");
  apx->add_option("--n", N, "homotopy N");
  apx->add_option("--samples", o.samples, "homotopy samples per segment");
  apx->add_option("--c1", o.c1, "arc separation constant");
  apx->add_option("--tol-commute", o.tol_commute, "commutator level treated as commuting");
  apx->add_option("--pair-out", o.pair_out, "write the output pair as pair JSON");

  CLI::App* bench = app.add_subcommand("bench", "sweep instances, CSV table");
  add_common(bench);
  add_mode(bench);
  bench->add_option("--kind", o.kind, "instance kind");
  bench->add_option("--m", o.ms, "sizes, comma separated")->delimiter(',');
  bench->add_option("--n", o.n, "dimension for random kinds");
  bench->add_option("--scale", o.scale, "perturbation scale");
  bench->add_option("--eps", eps, "gap opening parameter");
  bench->add_option("--samples", o.samples, "homotopy samples per segment");
  bench->add_option("--c1", o.c1, "arc separation constant");
  bench->add_option("--tol-commute", o.tol_commute, "commutator level treated as commuting");

  CLI::App* st = app.add_subcommand("selftest", "randomized checks of each construction step");
  st->add_option("--seed", o.seed, "random seed");
  st->add_option("--trials", selftest_trials, "trials per suite");

  CLI11_PARSE(app, argc, argv);
  for (CLI::App* c : {apx, bench})
    if (c->parsed() && c->count("--eps")) o.eps = eps;
  for (CLI::App* c : {hom, apx})
    if (c->parsed() && c->count("--n")) o.N = N;

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (inv->parsed()) return cmd_invariants(o);
    if (hom->parsed()) return cmd_homotopy(o);
    if (apx->parsed()) return cmd_approximate(o);
    if (bench->parsed()) return cmd_bench(o);
    if (st->parsed()) return run_selftest(o.seed, std::cout) ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]";
    if (!e.stage().empty()) std::cerr << " in " << e.stage();
    std::cerr << ": " << e.what();
    if (std::isfinite(e.measured())) std::cerr << " (measured " << e.measured() << ")";
    std::cerr << "\n";
    return e.is_precondition() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
