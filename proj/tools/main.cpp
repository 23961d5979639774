#include <CLI11.hpp>

#include "floorgcd/cli.hpp"

// Experiment harness around the floorgcd library: counts coprime pairs
// (n, floor(P(n))), runs the Legendre sieve, evaluates Weyl sums and
// discrepancy bounds, and searches diophantine witnesses. Reports are CSV or
// JSON files; every run writes a manifest that `rerun` replays byte for byte.

namespace {

void add_common(CLI::App* cmd, floorgcd::ExperimentConfig& cfg) {
  cmd->add_option("--out", cfg.out, "report file path (default <subcommand>.<format>)");
  cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)")
      ->envname("FLOORGCD_THREADS");
  cmd->add_option("--precision-ceiling", cfg.precision_ceiling,
                  "floor certification ceiling in bits")
      ->envname("FLOORGCD_PRECISION_CEILING");
  cmd->add_option("--seed", cfg.seed, "seed for randomized point selection (recorded)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floorgcd: coprimality of n and floor(P(n)) - density, sieve and "
               "equidistribution experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", floorgcd::kVersion);

  floorgcd::ExperimentConfig cfg;
  std::string manifest;

  auto* density = app.add_subcommand("density", "count S(X) = #{x <= X : gcd(x, floor(P(x))) = 1}");
  density->add_option("--poly", cfg.poly, "polynomial, e.g. \"sqrt(2)*x\"")->required();
  density->add_option("--xmax", cfg.xmax, "range X");
  density->add_option("--checkpoints", cfg.checkpoints, "geometric checkpoints (ratio 2)");
  density->add_option("--xlist", cfg.xlist, "explicit ascending checkpoint list");
  add_common(density, cfg);

  auto* sieve = app.add_subcommand("sieve", "sifted count S(X,z) and its Legendre expansion");
  sieve->add_option("--poly", cfg.poly)->required();
  sieve->add_option("--xmax", cfg.xmax);
  sieve->add_option("--z", cfg.z, "explicit sieve level (else z = X^(c/log log X))");
  sieve->add_option("--A", cfg.A, "error exponent parameter, c = 1/(2(A+1))");
  sieve->add_option("--epsilon", cfg.epsilon, "split parameter in (0,1), recorded");
  add_common(sieve, cfg);

  auto* divisors = app.add_subcommand("divisors", "A_d(X) counts with transform-side bounds");
  divisors->add_option("--poly", cfg.poly)->required();
  divisors->add_option("--xmax", cfg.xmax);
  divisors->add_option("--dmax", cfg.dmax, "report d = 1..dmax");
  divisors->add_option("--T", cfg.T, "frequency cutoff in the bound");
  add_common(divisors, cfg);

  auto* weyl = app.add_subcommand("weyl", "s_m(X) = sum e(m P(dx)/d) for m = 1..m_max");
  weyl->add_option("--poly", cfg.poly)->required();
  weyl->add_option("--xmax", cfg.xmax);
  weyl->add_option("--d", cfg.d, "dilation d");
  weyl->add_option("--mmax", cfg.m_max, "frequencies 1..m_max");
  add_common(weyl, cfg);

  auto* disc = app.add_subcommand("discrepancy", "star discrepancy of {P(dx)/d mod 1} vs bound");
  disc->add_option("--poly", cfg.poly)->required();
  disc->add_option("--xmax", cfg.xmax);
  disc->add_option("--d", cfg.d);
  disc->add_option("--T", cfg.T);
  add_common(disc, cfg);

  auto* cf = app.add_subcommand("cf", "continued fraction expansion of a constant");
  cf->add_option("--alpha", cfg.alpha, "constant, e.g. \"sqrt(2)\"")->required();
  cf->add_option("--terms", cfg.terms, "coefficients to produce (a0 included)");
  add_common(cf, cfg);

  auto* witness = app.add_subcommand("witness", "search |alpha - p/q| <= q^-n, 1 < q <= qmax");
  witness->add_option("--alpha", cfg.alpha)->required();
  witness->add_option("--n", cfg.n, "exponent");
  witness->add_option("--qmax", cfg.qmax, "denominator bound");
  add_common(witness, cfg);

  auto* omega = app.add_subcommand("omega", "count |omega(n) - log log n| > (log log n)^(2/3)");
  omega->add_option("--xmax", cfg.xmax);
  omega->add_option("--nmin", cfg.nmin, "lower cutoff (>= 3)");
  add_common(omega, cfg);

  auto* approx =
      app.add_subcommand("approx", "simultaneous approximation: q <= X^delta, |q a_j - p_j| <= X^(delta-j)");
  approx->add_option("--alpha", cfg.alphas, "constants a_1..a_k (repeatable)")->required();
  approx->add_option("--xmax", cfg.xmax, "X");
  approx->add_option("--delta", cfg.delta);
  add_common(approx, cfg);

  auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
  rerun->add_option("--manifest", manifest, "manifest path")->required();
  rerun->add_option("--out", cfg.out, "override report path");

  CLI11_PARSE(app, argc, argv);

  if (rerun->parsed()) return floorgcd::rerun_from_manifest(manifest, cfg.out);
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return floorgcd::run(cfg);
}
