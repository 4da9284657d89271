#ifndef VARLEX_ORACLE_HPP
#define VARLEX_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varlex/interval.hpp"
#include "varlex/space.hpp"

namespace varlex {

struct SpaceFlags {
  bool non_atomic = false;
  bool finitely_atomic = false;
};

/// The decision input: summaries and atomicity flags of both spaces plus r.
/// Source carries the exponent q(.), target the exponent p(.).
struct ExtensionQuery {
  ExponentSummary source_summary;
  ExponentSummary target_summary;
  SpaceFlags source_flags;
  SpaceFlags target_flags;
  Exponent r;
};

ExtensionQuery make_query(const SpaceSpec& source, const SpaceSpec& target,
                          const Exponent& r);

enum class VerdictStatus { finite, infinite, undetermined };

struct Verdict {
  VerdictStatus status = VerdictStatus::undetermined;
  std::string rule;                     // which result decided it
  IntervalIpq interval;                 // the interval that was consulted
  std::optional<double> bound;          // numeric bound when one is known
};

std::string status_name(VerdictStatus s);

/// Constant-exponent decision: q=1 or p=inf give k=1 for every r; otherwise
/// finite exactly when r lies in I(p,q).
Verdict decide_constant(const Exponent& q, const Exponent& p, const Exponent& r);

/// Non-atomic variable-exponent decision: finite iff r in I(p_-, q_+), with
/// the constant endpoints q == 1 and q == inf handled separately. Queries
/// with atoms are routed to decide_atomic.
Verdict decide_variable(const ExtensionQuery& query);

/// Atomic decision via the tilde summaries: outside I(tilde p_-, tilde q_+)
/// the constant is infinite; on the interior or at r=2 it is finite; on the
/// remaining boundary the answer genuinely depends on the spaces.
Verdict decide_atomic(const ExtensionQuery& query);

/// Dispatch: both spaces non-atomic -> decide_variable, else decide_atomic.
Verdict decide(const SpaceSpec& source, const SpaceSpec& target, const Exponent& r);

// ---------------------------------------------------------------------------
// Bound propagation.

/// Key of a bound fact: constant-exponent descriptors (q, p, r) plus an
/// optional measure-space pair tag. The empty tag is the universal pair
/// (bounds valid over arbitrary spaces); a universal bound transfers to any
/// tagged pair with factor 1, and declared parent->child pair relations
/// transfer bounds to sub-space pairs the same way.
struct BoundKey {
  Exponent q;
  Exponent p;
  Exponent r;
  std::string pair_id;  // "" = universal

  friend bool operator==(const BoundKey& a, const BoundKey& b) {
    return a.q == b.q && a.p == b.p && a.r == b.r && a.pair_id == b.pair_id;
  }
  friend bool operator<(const BoundKey& a, const BoundKey& b);
  std::string str() const;
};

struct DerivStep {
  std::string rule;
  double factor = 1.0;                 // multiplicative constant of the rule
  std::optional<BoundKey> from;        // absent for the seed step
};

struct BoundFact {
  BoundKey key;
  double upper_bound = 0.0;            // +inf means "no bound derived"
  std::vector<DerivStep> derivation;   // seed first, then applied rules
};

struct PairRelation {
  std::string child;   // sub-space pair
  std::string parent;  // enclosing pair ("" = universal)
};

struct BoundLedger {
  std::vector<BoundFact> facts;  // sorted by key
  const BoundFact* find(const BoundKey& key) const;
};

/// Replays a derivation chain: seed value times the product of rule factors.
double replay_derivation(const std::vector<DerivStep>& derivation);

/// Known seed rule names accepted on user seeds.
bool is_known_seed_rule(const std::string& rule);

/// Fixpoint of the propagation rules over the finite key set formed by the
/// seeds, the queries and their conjugates. Bounds only decrease, so the
/// fixpoint exists and is order-independent; rule_order_seed shuffles the
/// application order (0 = canonical order) without changing the result.
BoundLedger propagate_bounds(const std::vector<BoundFact>& seeds,
                             const std::vector<BoundKey>& queries,
                             const std::vector<PairRelation>& pair_relations = {},
                             std::size_t max_steps = 64,
                             std::uint64_t rule_order_seed = 0);

}  // namespace varlex

#endif
