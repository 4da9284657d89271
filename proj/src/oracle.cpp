#include "varlex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "varlex/errors.hpp"
#include "varlex/rng.hpp"
#include "varlex/stable.hpp"

namespace varlex {

std::string status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::finite: return "Finite";
    case VerdictStatus::infinite: return "Infinite";
    default: return "Undetermined";
  }
}

ExtensionQuery make_query(const SpaceSpec& source, const SpaceSpec& target,
                          const Exponent& r) {
  ExtensionQuery q;
  q.source_summary = summarize(source);
  q.target_summary = summarize(target);
  q.source_flags = {source.non_atomic(), source.finitely_atomic()};
  q.target_flags = {target.non_atomic(), target.finitely_atomic()};
  q.r = r;
  return q;
}

Verdict decide_constant(const Exponent& q, const Exponent& p, const Exponent& r) {
  Verdict v;
  v.interval = interval_ipq(p, q);
  if (q.is_one() || p.is_infinite()) {
    v.status = VerdictStatus::finite;
    v.rule = "q=1 or p=inf: k=1 for every r";
    v.bound = 1.0;
    return v;
  }
  if (v.interval.contains(r)) {
    v.status = VerdictStatus::finite;
    v.rule = "constant exponents: r in I(p,q)";
  } else {
    v.status = VerdictStatus::infinite;
    v.rule = "constant exponents: r outside I(p,q)";
  }
  return v;
}

namespace {

bool is_constant(const ExponentSummary& s) { return s.ess_inf == s.ess_sup; }

bool in_pb(const ExponentSummary& s) {
  return !s.ess_inf.is_one() && !s.ess_sup.is_infinite();
}

}  // namespace

Verdict decide_variable(const ExtensionQuery& query) {
  if (!query.source_flags.non_atomic || !query.target_flags.non_atomic)
    return decide_atomic(query);

  const ExponentSummary& qs = query.source_summary;
  const ExponentSummary& ps = query.target_summary;

  if (is_constant(qs) && is_constant(ps))
    return decide_constant(qs.ess_sup, ps.ess_inf, query.r);

  // Constant source endpoints stated alongside the main criterion.
  if (qs.ess_sup.is_one()) {
    Verdict v;
    v.interval = interval_ipq(ps.ess_inf, Exponent(1.0));
    if (!query.r.is_infinite()) {
      v.status = VerdictStatus::finite;
      v.rule = "q=1: finite for every finite r";
    } else {
      v.status = VerdictStatus::undetermined;
      v.rule = "q=1, variable target, r=inf: outside the stated results";
    }
    return v;
  }
  if (qs.ess_inf.is_infinite()) {
    if (!in_pb(ps))
      throw validation_error(
          "decide_variable: target exponent must satisfy 1 < p_- <= p_+ < inf");
    Verdict v;
    v.interval = interval_ipq(ps.ess_inf, Exponent::infinity());
    v.status = v.interval.contains(query.r) ? VerdictStatus::finite
                                            : VerdictStatus::infinite;
    v.rule = "q=inf: finite iff r in I(p_-, inf)";
    return v;
  }

  if (!in_pb(qs) || !in_pb(ps))
    throw validation_error(
        "decide_variable: exponents outside (1,inf) are only decided at the "
        "stated constant endpoints");

  Verdict v;
  v.interval = interval_ipq(ps.ess_inf, qs.ess_sup);
  if (v.interval.contains(query.r)) {
    v.status = VerdictStatus::finite;
    v.rule = "non-atomic spaces: r in I(p_-, q_+)";
  } else {
    v.status = VerdictStatus::infinite;
    v.rule = "non-atomic spaces: r outside I(p_-, q_+)";
  }
  return v;
}

Verdict decide_atomic(const ExtensionQuery& query) {
  if (query.source_flags.finitely_atomic || query.target_flags.finitely_atomic)
    throw validation_error(
        "decide_atomic: spaces must not be unions of finitely many atoms");
  const ExponentSummary& qs = query.source_summary;
  const ExponentSummary& ps = query.target_summary;
  if (!qs.tilde_defined || !ps.tilde_defined)
    throw validation_error("decide_atomic: tilde summaries undefined");
  if (!in_pb(qs) || !in_pb(ps))
    throw validation_error(
        "decide_atomic: exponents must satisfy 1 < ess_inf <= ess_sup < inf");

  Verdict v;
  v.interval = interval_ipq(ps.tilde_inf, qs.tilde_sup);
  if (!v.interval.contains(query.r)) {
    v.status = VerdictStatus::infinite;
    v.rule = "atomic spaces: r outside I(tilde p_-, tilde q_+)";
    return v;
  }
  if (v.interval.interior().contains(query.r) || query.r == Exponent(2.0)) {
    v.status = VerdictStatus::finite;
    v.rule = "atomic spaces: r in int(I(tilde p_-, tilde q_+)) or r=2";
    return v;
  }
  v.status = VerdictStatus::undetermined;
  v.rule =
      "atomic spaces: r on the boundary of I(tilde p_-, tilde q_+) away from 2; "
      "either outcome occurs";
  return v;
}

Verdict decide(const SpaceSpec& source, const SpaceSpec& target, const Exponent& r) {
  const ExtensionQuery q = make_query(source, target, r);
  if (q.source_flags.non_atomic && q.target_flags.non_atomic)
    return decide_variable(q);
  return decide_atomic(q);
}

// ---------------------------------------------------------------------------
// Bound propagation.

bool operator<(const BoundKey& a, const BoundKey& b) {
  if (a.q.as_double() != b.q.as_double()) return a.q.as_double() < b.q.as_double();
  if (a.p.as_double() != b.p.as_double()) return a.p.as_double() < b.p.as_double();
  if (a.r.as_double() != b.r.as_double()) return a.r.as_double() < b.r.as_double();
  return a.pair_id < b.pair_id;
}

std::string BoundKey::str() const {
  std::ostringstream os;
  os << "q=" << (q.is_infinite() ? "inf" : std::to_string(q.value()))
     << "|p=" << (p.is_infinite() ? "inf" : std::to_string(p.value()))
     << "|r=" << (r.is_infinite() ? "inf" : std::to_string(r.value()));
  if (!pair_id.empty()) os << "|pair=" << pair_id;
  return os.str();
}

const BoundFact* BoundLedger::find(const BoundKey& key) const {
  for (const BoundFact& f : facts)
    if (f.key == key) return &f;
  return nullptr;
}

double replay_derivation(const std::vector<DerivStep>& derivation) {
  double v = 1.0;
  for (const DerivStep& s : derivation) v *= s.factor;
  return v;
}

bool is_known_seed_rule(const std::string& rule) {
  return rule == "assumption" || rule == "literature" || rule == "unit" ||
         rule == "c-ratio";
}

namespace {

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  double factor = 1.0;
  std::string rule;
};

bool strictly_between_1_inf(const Exponent& e) {
  return !e.is_one() && !e.is_infinite();
}

BoundKey conjugate_key(const BoundKey& k) {
  // Duality swaps the roles: a bound at (q,p,r) controls (p',q',r').
  return BoundKey{conjugate(k.p), conjugate(k.q), conjugate(k.r), k.pair_id};
}

void auto_seed(BoundFact& fact) {
  const BoundKey& k = fact.key;
  if (k.q.is_one() || k.p.is_infinite()) {
    if (1.0 < fact.upper_bound) {
      fact.upper_bound = 1.0;
      fact.derivation = {{"q=1 or p=inf: k=1", 1.0, std::nullopt}};
    }
    return;
  }
  // Literature-seeded exact ratio for constants p <= q < 2 with q < r <= 2.
  if (!k.p.is_infinite() && !k.q.is_infinite() && !k.r.is_infinite()) {
    const double p = k.p.value(), q = k.q.value(), r = k.r.value();
    if (p <= q && q < 2.0 && q < r && r <= 2.0) {
      const double bound = moment_c(Exponent(r), q) / moment_c(Exponent(r), p);
      if (bound < fact.upper_bound) {
        fact.upper_bound = bound;
        fact.derivation = {{"c-ratio (literature-seeded)", bound, std::nullopt}};
      }
    }
  }
}

}  // namespace

BoundLedger propagate_bounds(const std::vector<BoundFact>& seeds,
                             const std::vector<BoundKey>& queries,
                             const std::vector<PairRelation>& pair_relations,
                             std::size_t max_steps,
                             std::uint64_t rule_order_seed) {
  // Working key set: seeds, queries, and closure under conjugation.
  std::set<BoundKey> key_set;
  for (const BoundFact& s : seeds) key_set.insert(s.key);
  for (const BoundKey& k : queries) key_set.insert(k);
  {
    std::vector<BoundKey> base(key_set.begin(), key_set.end());
    for (const BoundKey& k : base) key_set.insert(conjugate_key(k));
  }

  std::vector<BoundFact> facts;
  std::map<BoundKey, std::size_t> index;
  for (const BoundKey& k : key_set) {
    BoundFact f;
    f.key = k;
    f.upper_bound = std::numeric_limits<double>::infinity();
    index[k] = facts.size();
    facts.push_back(std::move(f));
  }

  for (const BoundFact& s : seeds) {
    if (s.derivation.empty() || !is_known_seed_rule(s.derivation.front().rule))
      throw validation_error(
          "seed carries unknown rule; expected one of: assumption, literature, "
          "unit, c-ratio");
    if (!(s.upper_bound > 0.0))
      throw validation_error("seed bound must be positive");
    BoundFact& f = facts[index.at(s.key)];
    if (s.upper_bound < f.upper_bound) {
      f.upper_bound = s.upper_bound;
      f.derivation = {{s.derivation.front().rule, s.upper_bound, std::nullopt}};
    }
  }
  for (BoundFact& f : facts) auto_seed(f);

  // Materialize rule applications between keys of the set.
  std::vector<Edge> edges;
  const std::vector<BoundKey> keys(key_set.begin(), key_set.end());
  auto idx = [&](const BoundKey& k) { return index.at(k); };
  for (const BoundKey& a : keys) {
    // Duality.
    if (strictly_between_1_inf(a.q) && strictly_between_1_inf(a.p)) {
      const BoundKey d = conjugate_key(a);
      if (key_set.count(d))
        edges.push_back({idx(a), idx(d), 4.0, "duality x4"});
    }
    for (const BoundKey& b : keys) {
      if (a == b) continue;
      if (a.pair_id == b.pair_id) {
        if (a.q == b.q && a.p == b.p && strictly_between_1_inf(a.p) &&
            !a.r.is_infinite() && !b.r.is_infinite()) {
          const double ra = a.r.value(), rb = b.r.value();
          if (ra < rb && rb <= 2.0)
            edges.push_back({idx(a), idx(b), 1.0, "r-monotone on [1,2] x1"});
          if (2.0 <= rb && rb < ra)
            edges.push_back({idx(a), idx(b), 16.0, "r-monotone on [2,inf) x16"});
        }
        if (a.q == b.q && a.r == b.r && !a.r.is_infinite() &&
            strictly_between_1_inf(a.p) && strictly_between_1_inf(b.p) &&
            a.p <= b.p)
          edges.push_back({idx(a), idx(b), 9.0, "target-exponent monotone x9"});
        if (a.p == b.p && a.r == b.r && !a.r.is_infinite() &&
            strictly_between_1_inf(a.p) && strictly_between_1_inf(a.q) &&
            strictly_between_1_inf(b.q) && b.q <= a.q)
          edges.push_back({idx(a), idx(b), 144.0, "source-exponent monotone x144"});
      } else if (a.q == b.q && a.p == b.p && a.r == b.r) {
        const bool universal_to_tagged = a.pair_id.empty();
        bool declared = false;
        for (const PairRelation& rel : pair_relations)
          if (rel.child == b.pair_id && rel.parent == a.pair_id) declared = true;
        if (universal_to_tagged || declared)
          edges.push_back({idx(a), idx(b), 1.0, "restriction x1"});
      }
    }
  }

  if (rule_order_seed != 0) {
    SplitMix64 rng(rule_order_seed);
    for (std::size_t i = edges.size(); i > 1; --i)
      std::swap(edges[i - 1], edges[rng.next_u64() % i]);
  }

  for (std::size_t step = 0; step < max_steps; ++step) {
    bool changed = false;
    for (const Edge& e : edges) {
      const BoundFact& src = facts[e.src];
      if (!std::isfinite(src.upper_bound)) continue;
      const double candidate = src.upper_bound * e.factor;
      BoundFact& dst = facts[e.dst];
      if (candidate < dst.upper_bound) {
        dst.upper_bound = candidate;
        dst.derivation = src.derivation;
        dst.derivation.push_back({e.rule, e.factor, src.key});
        changed = true;
      }
    }
    if (!changed) break;
  }

  BoundLedger ledger;
  ledger.facts = std::move(facts);
  return ledger;
}

}  // namespace varlex
