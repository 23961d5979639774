#include "floorgcd/cli.hpp"

#include <cmath>
#include <iostream>

#include <json.hpp>

#include "floorgcd/diophantine.hpp"
#include "floorgcd/errors.hpp"
#include "floorgcd/exponential_sums.hpp"
#include "floorgcd/polynomial.hpp"
#include "floorgcd/report.hpp"
#include "floorgcd/sieve.hpp"

namespace floorgcd {

namespace {

using nlohmann::json;

json manifest_json(const ExperimentConfig& c) {
  json j;
  j["version"] = kVersion;
  j["subcommand"] = c.subcommand;
  j["poly"] = c.poly;
  j["alpha"] = c.alpha;
  j["alphas"] = c.alphas;
  j["xmax"] = c.xmax;
  j["xlist"] = c.xlist;
  j["checkpoints"] = c.checkpoints;
  if (c.z)
    j["z"] = *c.z;
  else
    j["z"] = nullptr;
  j["A"] = c.A;
  j["epsilon"] = c.epsilon;
  j["d"] = c.d;
  j["dmax"] = c.dmax;
  j["m_max"] = c.m_max;
  j["T"] = c.T;
  j["n"] = c.n;
  j["qmax"] = c.qmax;
  j["delta"] = c.delta;
  j["terms"] = c.terms;
  j["nmin"] = c.nmin;
  j["out"] = c.out;
  j["format"] = c.format;
  j["threads"] = c.threads;
  j["precision_ceiling"] = c.precision_ceiling;
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig config_from_manifest(const json& j) {
  ExperimentConfig c;
  c.subcommand = j.at("subcommand").get<std::string>();
  c.poly = j.value("poly", std::string());
  c.alpha = j.value("alpha", std::string());
  c.alphas = j.value("alphas", std::vector<std::string>());
  c.xmax = j.value("xmax", std::int64_t{1000});
  c.xlist = j.value("xlist", std::vector<std::int64_t>());
  c.checkpoints = j.value("checkpoints", 8);
  if (j.contains("z") && !j.at("z").is_null()) c.z = j.at("z").get<double>();
  c.A = j.value("A", 2.0);
  c.epsilon = j.value("epsilon", 0.5);
  c.d = j.value("d", std::int64_t{1});
  c.dmax = j.value("dmax", std::int64_t{1});
  c.m_max = j.value("m_max", std::int64_t{10});
  c.T = j.value("T", std::int64_t{100});
  c.n = j.value("n", 2u);
  c.qmax = j.value("qmax", std::int64_t{1000});
  c.delta = j.value("delta", 0.5);
  c.terms = j.value("terms", 10);
  c.nmin = j.value("nmin", std::int64_t{3});
  c.out = j.value("out", std::string());
  c.format = j.value("format", std::string("csv"));
  c.threads = j.value("threads", 0u);
  c.precision_ceiling = j.value("precision_ceiling", 4096L);
  c.seed = j.value("seed", std::uint64_t{0});
  return c;
}

std::string default_out(const ExperimentConfig& c) {
  const bool json_only =
      c.subcommand == "cf" || c.subcommand == "witness" || c.subcommand == "approx";
  return c.subcommand + (json_only || c.format == "json" ? ".json" : ".csv");
}

CountOptions count_options(const ExperimentConfig& c) {
  CountOptions o;
  o.threads = c.threads;
  o.scan.floor_ceiling_bits = c.precision_ceiling;
  return o;
}

SumOptions sum_options(const ExperimentConfig& c) {
  SumOptions o;
  o.threads = c.threads;
  o.scan.floor_ceiling_bits = c.precision_ceiling;
  return o;
}

// ------------------------------------------------------------------ density

std::string density_report(const ExperimentConfig& c) {
  RealPolynomial P = RealPolynomial::parse(c.poly);
  DensityReport rep = c.xlist.empty() ? coprime_count(P, c.xmax, c.checkpoints, count_options(c))
                                      : coprime_count_at(P, c.xlist, count_options(c));
  if (c.format == "json") {
    json j;
    j["target"] = rep.target;
    j["X"] = rep.X;
    j["count"] = rep.count;
    j["ratio"] = rep.ratio;
    j["abs_error"] = rep.abs_error;
    json rows = json::array();
    for (const Checkpoint& cp : rep.checkpoints) {
      rows.push_back({{"X", cp.X},
                      {"count", cp.count},
                      {"ratio", cp.ratio},
                      {"abs_error", std::fabs(cp.ratio - rep.target)}});
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
  CsvTable t;
  t.header = {"X", "count", "ratio", "abs_error"};
  for (const Checkpoint& cp : rep.checkpoints) {
    t.rows.push_back({fmt_int(cp.X), fmt_int(cp.count), fmt_real(cp.ratio),
                      fmt_real(std::fabs(cp.ratio - rep.target))});
  }
  return t.render();
}

// ------------------------------------------------------------------- sieve

std::string sieve_report(const ExperimentConfig& c) {
  RealPolynomial P = RealPolynomial::parse(c.poly);
  SieveConfig cfg = choose_z(c.xmax, c.A, c.z, c.epsilon);
  const double z = cfg.z_used();
  const std::int64_t sifted = sifted_count(P, c.xmax, z, count_options(c));
  LegendreExpansion leg = legendre_expansion(P, c.xmax, z, count_options(c));
  DensityReport dens = coprime_count(P, c.xmax, 1, count_options(c));
  ExactReal mertens = mertens_product(z);
  ExactReal zeta2 = zeta2_partial(z);
  mpz_class pz = primorial(z);

  if (c.format == "json") {
    json j;
    j["X"] = c.xmax;
    j["A"] = cfg.A;
    j["c"] = cfg.c;
    j["epsilon"] = cfg.epsilon;
    j["z_formula"] = cfg.z;
    j["z_used"] = z;
    j["primorial"] = pz.get_str();
    j["sifted_count"] = sifted;
    j["legendre_value"] = leg.value;
    j["coprime_count"] = dens.count;
    j["mertens"] = mertens.approx;
    j["zeta2_partial"] = zeta2.approx;
    j["zeta2_limit"] = kZeta2Inverse;
    json terms = json::array();
    for (const LegendreTerm& t : leg.terms)
      terms.push_back({{"d", t.d}, {"mu", t.mu}, {"count", t.count}});
    j["legendre_terms"] = terms;
    return j.dump(2) + "\n";
  }
  CsvTable t;
  t.header = {"X",           "z_formula",     "z_used",        "primorial",
              "sifted_count", "legendre_value", "coprime_count", "mertens",
              "zeta2_partial", "zeta2_limit"};
  t.rows.push_back({fmt_int(c.xmax), fmt_real(cfg.z), fmt_real(z), pz.get_str(), fmt_int(sifted),
                    fmt_int(leg.value), fmt_int(dens.count), fmt_real(mertens.approx),
                    fmt_real(zeta2.approx), fmt_real(kZeta2Inverse)});
  return t.render();
}

// ----------------------------------------------------------------- divisors

std::string divisors_report(const ExperimentConfig& c) {
  RealPolynomial P = RealPolynomial::parse(c.poly);
  CsvTable t;
  t.header = {"d", "X", "count", "expected", "deviation", "et_bound"};
  json rows = json::array();
  for (std::int64_t d = 1; d <= c.dmax; ++d) {
    DivisorCount dc = divisor_count(P, d, c.xmax, count_options(c));
    // count-scale bound: (X/d)/(T+1) + 3 sum_{m<=T} |s_m(N)|/m + 1
    DiscrepancyReport et = erdos_turan_bound(P, d, c.xmax, c.T, sum_options(c));
    const double bound = (static_cast<double>(c.xmax) / static_cast<double>(d)) /
                             (static_cast<double>(c.T) + 1.0) +
                         3.0 * et.weyl_term_sum + 1.0;
    if (c.format == "json") {
      rows.push_back({{"d", d},
                      {"X", c.xmax},
                      {"count", dc.count},
                      {"expected", dc.expected},
                      {"deviation", dc.deviation},
                      {"et_bound", bound}});
    } else {
      t.rows.push_back({fmt_int(d), fmt_int(c.xmax), fmt_int(dc.count), fmt_real(dc.expected),
                        fmt_real(dc.deviation), fmt_real(bound)});
    }
  }
  if (c.format == "json") {
    json j;
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
  return t.render();
}

// --------------------------------------------------------------------- weyl

std::string weyl_report(const ExperimentConfig& c) {
  RealPolynomial P = RealPolynomial::parse(c.poly);
  CsvTable t;
  t.header = {"m", "d", "X", "re", "im", "magnitude", "exponent"};
  json rows = json::array();
  for (std::int64_t m = 1; m <= c.m_max; ++m) {
    WeylSumValue s = weyl_sum(P, c.d, m, c.xmax, sum_options(c));
    if (c.format == "json") {
      rows.push_back({{"m", m},
                      {"d", c.d},
                      {"X", c.xmax},
                      {"re", s.re},
                      {"im", s.im},
                      {"magnitude", s.magnitude},
                      {"exponent", s.exponent}});
    } else {
      t.rows.push_back({fmt_int(m), fmt_int(c.d), fmt_int(c.xmax), fmt_real(s.re), fmt_real(s.im),
                        fmt_real(s.magnitude), fmt_real(s.exponent)});
    }
  }
  if (c.format == "json") {
    json j;
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
  return t.render();
}

// -------------------------------------------------------------- discrepancy

std::string discrepancy_report(const ExperimentConfig& c) {
  RealPolynomial P = RealPolynomial::parse(c.poly);
  DiscrepancyReport rep = erdos_turan_bound(P, c.d, c.xmax, c.T, sum_options(c));
  if (c.format == "json") {
    json j;
    j["N"] = rep.N;
    j["T"] = rep.T;
    j["d_star"] = rep.d_star;
    j["et_bound"] = rep.et_bound;
    j["weyl_terms"] = rep.weyl_terms;
    return j.dump(2) + "\n";
  }
  CsvTable t;
  t.header = {"N", "T", "d_star", "et_bound", "weyl_term_sum"};
  t.rows.push_back({fmt_int(rep.N), fmt_int(rep.T), fmt_real(rep.d_star), fmt_real(rep.et_bound),
                    fmt_real(rep.weyl_term_sum)});
  return t.render();
}

// ----------------------------------------------------------------------- cf

std::string cf_report(const ExperimentConfig& c) {
  ComputableReal alpha = parse_constant(c.alpha);
  CFExpansion cf = continued_fraction(alpha, c.terms);
  json j;
  j["alpha"] = c.alpha;
  j["a0"] = cf.a0.get_str();
  json pq = json::array();
  for (const mpz_class& a : cf.partial_quotients) pq.push_back(a.get_str());
  j["partial_quotients"] = pq;
  json conv = json::array();
  for (const Convergent& cv : cf.convergents)
    conv.push_back({{"p", cv.p.get_str()}, {"q", cv.q.get_str()}});
  j["convergents"] = conv;
  j["terminated"] = cf.terminated;
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------------ witness

std::string witness_report(const ExperimentConfig& c) {
  ComputableReal alpha = parse_constant(c.alpha);
  auto w = liouville_witness(alpha, c.n, mpz_class(static_cast<long>(c.qmax)));
  json j;
  j["alpha"] = c.alpha;
  j["n"] = c.n;
  j["qmax"] = c.qmax;
  j["found"] = w.has_value();
  if (w) {
    j["p"] = w->p.get_str();
    j["q"] = w->q.get_str();
    j["err_upper_bound"] = w->err.to_double();
  }
  return j.dump(2) + "\n";
}

// -------------------------------------------------------------------- omega

std::string omega_report(const ExperimentConfig& c) {
  OmegaDeviationReport rep = omega_deviation_count(c.xmax, c.nmin);
  if (c.format == "json") {
    json j;
    j["X"] = rep.X;
    j["n_min"] = rep.n_min;
    j["count"] = rep.count;
    j["fraction"] = rep.fraction;
    return j.dump(2) + "\n";
  }
  CsvTable t;
  t.header = {"X", "n_min", "count", "fraction"};
  t.rows.push_back({fmt_int(rep.X), fmt_int(rep.n_min), fmt_int(rep.count), fmt_real(rep.fraction)});
  return t.render();
}

// ------------------------------------------------------------------- approx

std::string approx_report(const ExperimentConfig& c) {
  std::vector<ComputableReal> alphas;
  for (const std::string& a : c.alphas) alphas.push_back(parse_constant(a));
  auto r = simultaneous_approx_search(alphas, static_cast<double>(c.xmax), c.delta);
  json j;
  j["alphas"] = c.alphas;
  j["X"] = c.xmax;
  j["delta"] = c.delta;
  j["found"] = r.has_value();
  if (r) {
    j["q"] = r->q;
    json a = json::array();
    for (const mpz_class& v : r->a) a.push_back(v.get_str());
    j["a"] = a;
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string manifest_path_for(const std::string& report_path) {
  return report_path + ".manifest.json";
}

int run(const ExperimentConfig& input) {
  ExperimentConfig c = input;
  if (c.out.empty()) c.out = default_out(c);
  try {
    if (c.format != "csv" && c.format != "json")
      throw std::invalid_argument("format must be csv or json");
    std::string report;
    if (c.subcommand == "density")
      report = density_report(c);
    else if (c.subcommand == "sieve")
      report = sieve_report(c);
    else if (c.subcommand == "divisors")
      report = divisors_report(c);
    else if (c.subcommand == "weyl")
      report = weyl_report(c);
    else if (c.subcommand == "discrepancy")
      report = discrepancy_report(c);
    else if (c.subcommand == "cf")
      report = cf_report(c);
    else if (c.subcommand == "witness")
      report = witness_report(c);
    else if (c.subcommand == "omega")
      report = omega_report(c);
    else if (c.subcommand == "approx")
      report = approx_report(c);
    else
      throw std::invalid_argument("unknown subcommand: " + c.subcommand);

    write_file(c.out, report);
    write_file(manifest_path_for(c.out), manifest_json(c).dump(2) + "\n");
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const FloorUndecidedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int rerun_from_manifest(const std::string& manifest_path, const std::string& out) {
  json j;
  try {
    std::ifstream f(manifest_path);
    if (!f) throw std::runtime_error("cannot open manifest: " + manifest_path);
    f >> j;
  } catch (const std::exception& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return 1;
  }
  ExperimentConfig c = config_from_manifest(j);
  if (!out.empty()) c.out = out;
  return run(c);
}

}  // namespace floorgcd
