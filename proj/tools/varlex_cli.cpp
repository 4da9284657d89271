// varlex command line front end: config ingestion, subcommand dispatch,
// seeded reproducible runs, CSV emission.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "varlex/csv.hpp"
#include "varlex/errors.hpp"
#include "varlex/estimator.hpp"
#include "varlex/norms.hpp"
#include "varlex/oracle.hpp"
#include "varlex/serde.hpp"
#include "varlex/stable.hpp"

namespace {

using namespace varlex;
using nlohmann::json;

Exponent parse_exponent(const std::string& s) {
  if (s == "inf") return Exponent::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return Exponent(v);
  } catch (const std::invalid_argument&) {
    throw validation_error("cannot parse exponent \"" + s + "\" (number or \"inf\")");
  } catch (const std::out_of_range&) {
    throw validation_error("exponent \"" + s + "\" out of range");
  }
}

struct Output {
  std::string path;  // empty = stdout
  std::ostringstream buf;

  void line(const std::string& s) { buf << s << "\n"; }
  void flush() {
    if (path.empty()) {
      std::cout << buf.str();
      return;
    }
    std::ofstream f(path);
    if (!f) throw validation_error("cannot open output file: " + path);
    f << buf.str();
  }
};

SpaceSpec load_space_field(const json& cfg, const char* field) {
  if (!cfg.contains(field))
    throw validation_error(std::string("config is missing field \"") + field + "\"");
  return space_from_json(cfg.at(field));
}

std::vector<double> load_vector(const json& cfg, const char* field) {
  if (!cfg.contains(field) || !cfg.at(field).is_array())
    throw validation_error(std::string("config needs a numeric array \"") + field +
                           "\"");
  return cfg.at(field).get<std::vector<double>>();
}

SpaceSpec maybe_truncate(SpaceSpec space, std::optional<std::size_t> n) {
  if (n) return truncate(space, *n);
  return space;
}

std::string interval_str(const IntervalIpq& I) {
  std::string s;
  s += I.lo_closed ? '[' : '(';
  s += I.lo.is_infinite() ? "inf" : csv_real(I.lo.value());
  s += ',';
  s += I.hi.is_infinite() ? "inf" : csv_real(I.hi.value());
  s += I.hi_closed ? ']' : ')';
  return s;
}

std::string derivation_str(const std::vector<DerivStep>& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) s += " | ";
    s += chain[i].rule;
    if (chain[i].from)
      s += " from " + chain[i].from->str();
    else
      s += " = " + csv_real(chain[i].factor);
  }
  return s;
}

int run(int argc, char** argv) {
  CLI::App app{"varlex: norms, extension verdicts and MZ-constant estimation on "
               "variable-exponent Lebesgue spaces"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "Write CSV to this file instead of stdout");

  std::string config_path, p_str, q_str, r_str("2");
  std::optional<std::size_t> trunc;
  std::uint64_t seed = 1;

  auto* c_norm = app.add_subcommand("norm", "Luxemburg norm of f");
  c_norm->add_option("--config", config_path, "JSON with space and f")->required();
  c_norm->add_option("--truncate", trunc, "materialize this many tail atoms");

  auto* c_vnorm = app.add_subcommand("vnorm", "vector l^r norm of a family F");
  c_vnorm->add_option("--config", config_path, "JSON with space and F")->required();
  c_vnorm->add_option("--r", r_str, "exponent r (number or inf)")->required();
  c_vnorm->add_option("--truncate", trunc, "materialize this many tail atoms");

  auto* c_dual = app.add_subcommand("dualnorm", "associate norm of f");
  c_dual->add_option("--config", config_path, "JSON with space and f")->required();
  c_dual->add_option("--seed", seed, "ascent seed");
  c_dual->add_option("--truncate", trunc, "materialize this many tail atoms");

  auto* c_interval = app.add_subcommand("interval", "the interval I(p,q)");
  c_interval->add_option("--p", p_str, "target exponent")->required();
  c_interval->add_option("--q", q_str, "source exponent")->required();

  auto* c_decide = app.add_subcommand("decide", "extension verdict for a space pair");
  c_decide->add_option("--config", config_path, "JSON with source and target")
      ->required();
  c_decide->add_option("--r", r_str, "exponent r (number or inf)")->required();

  std::string seeds_path, queries_path;
  std::size_t max_steps = 64;
  std::uint64_t order_seed = 0;
  auto* c_prop = app.add_subcommand("propagate", "bound propagation fixpoint");
  c_prop->add_option("--seeds", seeds_path, "JSON seed facts")->required();
  c_prop->add_option("--queries", queries_path, "JSON query keys")->required();
  c_prop->add_option("--max-steps", max_steps, "fixpoint round cap");
  c_prop->add_option("--order-seed", order_seed,
                     "shuffle rule application order (0 = canonical)");

  double mp = 1.0, mq = 1.0;
  auto* c_moment = app.add_subcommand("moment", "stable moment constant c_{r,p}");
  c_moment->add_option("--r", r_str, "stable index r in (0,2]")->required();
  c_moment->add_option("--p", mp, "moment order p")->required();

  std::size_t samples = 1000000;
  auto* c_mc = app.add_subcommand("mc-check", "Monte Carlo vs formula moment ratio");
  c_mc->add_option("--r", r_str, "stable index r in (0,2]")->required();
  c_mc->add_option("--p", mp, "lower moment order")->required();
  c_mc->add_option("--q", mq, "upper moment order")->required();
  c_mc->add_option("--samples", samples, "sample count");
  c_mc->add_option("--seed", seed, "RNG seed");

  std::size_t n_funcs = 4, budget = 50;
  auto* c_est = app.add_subcommand("estimate-k", "certified lower bound on k");
  c_est->add_option("--config", config_path, "JSON with source and target")
      ->required();
  c_est->add_option("--r", r_str, "exponent r (number or inf)")->required();
  c_est->add_option("--N", n_funcs, "number of witness functions");
  c_est->add_option("--budget", budget, "random witness draws");
  c_est->add_option("--seed", seed, "RNG seed");
  c_est->add_option("--truncate", trunc, "materialize this many tail atoms");

  double q0 = 1.2, p0 = 1.5, scale = 1.0;
  std::size_t nmax = 128;
  auto* c_blow = app.add_subcommand("blowup", "atomic blow-up experiment");
  c_blow->add_option("--q0", q0, "tail base exponent, 1 < q0 < p0")->required();
  c_blow->add_option("--p0", p0, "target exponent, q0 < p0 < 2")->required();
  c_blow->add_option("--scale", scale, "tail lambda scale");
  c_blow->add_option("--nmax", nmax, "largest n (doubling from 4)");
  c_blow->add_option("--budget", budget, "random witness draws per n");
  c_blow->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  Output out;
  out.path = out_path;

  if (c_norm->parsed() || c_dual->parsed()) {
    const json cfg = load_json_file(config_path);
    const SpaceSpec space = maybe_truncate(load_space_field(cfg, "space"), trunc);
    const SimpleFunction f(load_vector(cfg, "f"));
    const NormResult res = c_norm->parsed()
                               ? luxemburg_norm(space, f)
                               : associate_norm_detailed(space, f, {false, seed});
    out.line("value,residual,iterations");
    out.line(csv_real(res.value) + "," + csv_real(res.residual) + "," +
             std::to_string(res.iterations));
  } else if (c_vnorm->parsed()) {
    const json cfg = load_json_file(config_path);
    const SpaceSpec space = maybe_truncate(load_space_field(cfg, "space"), trunc);
    if (!cfg.contains("F") || !cfg.at("F").is_array())
      throw validation_error("config needs an array of arrays \"F\"");
    std::vector<SimpleFunction> family;
    for (const json& row : cfg.at("F"))
      family.emplace_back(row.get<std::vector<double>>());
    const NormResult res = vector_norm_detailed(space, family, parse_exponent(r_str));
    out.line("value,residual,iterations");
    out.line(csv_real(res.value) + "," + csv_real(res.residual) + "," +
             std::to_string(res.iterations));
  } else if (c_interval->parsed()) {
    const IntervalIpq I = interval_ipq(parse_exponent(p_str), parse_exponent(q_str));
    out.line("lo,hi,lo_closed,hi_closed");
    out.line((I.lo.is_infinite() ? "inf" : csv_real(I.lo.value())) + "," +
             (I.hi.is_infinite() ? "inf" : csv_real(I.hi.value())) + "," +
             (I.lo_closed ? "true" : "false") + "," +
             (I.hi_closed ? "true" : "false"));
  } else if (c_decide->parsed()) {
    const json cfg = load_json_file(config_path);
    const SpaceSpec source = load_space_field(cfg, "source");
    const SpaceSpec target = load_space_field(cfg, "target");
    const Exponent r = parse_exponent(r_str);
    const Verdict v = decide(source, target, r);
    out.line("r,status,rule,interval");
    out.line((r.is_infinite() ? "inf" : csv_real(r.value())) + "," +
             status_name(v.status) + "," + csv_field(v.rule) + "," +
             csv_field(interval_str(v.interval)));
  } else if (c_prop->parsed()) {
    const json sj = load_json_file(seeds_path);
    const json qj = load_json_file(queries_path);
    auto parse_key = [](const json& j) {
      BoundKey k;
      k.q = exponent_from_json(j.at("q"));
      k.p = exponent_from_json(j.at("p"));
      k.r = exponent_from_json(j.at("r"));
      k.pair_id = j.value("pair", std::string());
      return k;
    };
    std::vector<BoundFact> seeds;
    if (sj.contains("seeds"))
      for (const json& j : sj.at("seeds")) {
        BoundFact f;
        f.key = parse_key(j);
        f.upper_bound = j.at("bound").get<double>();
        f.derivation = {{j.value("rule", std::string("assumption")),
                         f.upper_bound, std::nullopt}};
        seeds.push_back(std::move(f));
      }
    std::vector<PairRelation> rels;
    if (sj.contains("pairs"))
      for (const json& j : sj.at("pairs"))
        rels.push_back({j.at("child").get<std::string>(),
                        j.value("parent", std::string())});
    std::vector<BoundKey> queries;
    if (!qj.contains("queries"))
      throw validation_error("queries file needs an array \"queries\"");
    for (const json& j : qj.at("queries")) queries.push_back(parse_key(j));
    const BoundLedger ledger =
        propagate_bounds(seeds, queries, rels, max_steps, order_seed);
    out.line("key,bound,derivation");
    for (const BoundFact& f : ledger.facts)
      out.line(csv_field(f.key.str()) + "," +
               (std::isfinite(f.upper_bound) ? csv_real(f.upper_bound) : "inf") +
               "," + csv_field(derivation_str(f.derivation)));
  } else if (c_moment->parsed()) {
    out.line("value");
    out.line(csv_real(moment_c(parse_exponent(r_str), mp)));
  } else if (c_mc->parsed()) {
    const Exponent r = parse_exponent(r_str);
    const McRatio res = mc_ratio_check(r.value(), mp, mq, samples, seed);
    out.line("r,p,q,formula,mc,rel_err");
    out.line(csv_real(r.value()) + "," + csv_real(mp) + "," + csv_real(mq) + "," +
             csv_real(res.formula_ratio) + "," + csv_real(res.mc_ratio) + "," +
             csv_real(std::fabs(res.mc_ratio - res.formula_ratio) /
                      res.formula_ratio));
  } else if (c_est->parsed()) {
    const json cfg = load_json_file(config_path);
    const SpaceSpec source = maybe_truncate(load_space_field(cfg, "source"), trunc);
    const SpaceSpec target = maybe_truncate(load_space_field(cfg, "target"), trunc);
    const MzWitness w = estimate_k_lower(source, target, parse_exponent(r_str),
                                         n_funcs, budget, seed);
    out.line("certified,optimistic");
    out.line(csv_real(w.certified_lower_bound) + "," + csv_real(w.optimistic_ratio));
  } else if (c_blow->parsed()) {
    if (nmax < 4) throw validation_error("blowup requires --nmax >= 4");
    std::vector<std::size_t> ns;
    for (std::size_t n = 4; n <= nmax; n *= 2) ns.push_back(n);
    const auto rows = blowup_experiment(q0, p0, scale, ns, budget, seed);
    out.line("n,certified,optimistic,predicted");
    for (const BlowupRow& row : rows)
      out.line(std::to_string(row.n) + "," + csv_real(row.certified) + "," +
               csv_real(row.optimistic) + "," + csv_real(row.predicted));
  }

  out.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
