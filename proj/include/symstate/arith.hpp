#pragma once

#include <vector>

#include "symstate/interval.hpp"
#include "symstate/term.hpp"

namespace symstate {

// Result of a simplification attempt.  When fired is false the result is the
// unchanged input and there are no side conditions.  When fired, the rewrite
// is semantics-preserving in every concrete state satisfying all side
// conditions at their polarities.
struct SimplifyOutcome {
  Term result;
  std::vector<Hyp> side_conditions;
  bool fired = false;
};

inline SimplifyOutcome no_fire(Term t) { return {t, {}, false}; }

namespace arith_detail {

inline void flatten_sum(Term t, std::vector<Term>& out) {
  if (t.op() == Op::kAdd) {
    flatten_sum(t.arg(0), out);
    flatten_sum(t.arg(1), out);
  } else {
    out.push_back(t);
  }
}

inline Term rebuild_sum(TermStore& store, const std::vector<Term>& xs) {
  Term acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) {
    acc = store.app(Op::kAdd, {xs[i], acc});
  }
  return acc;
}

inline bool divides(const Integer& k, const Integer& j) {
  return floor_mod(j, k) == 0;
}

}  // namespace arith_detail

// Simplifies (MOD z k) for a constant natural modulus k.  The rules, tried
// in order (z ranges over terms, x over syntactic integers, i/j/k over
// natural constants):
//   1. (MOD x 0)                      -> x
//   2. (MOD i k)                      -> folded constant
//   3. (MOD (MOD z j) k)              -> (MOD z j)        if 1 <= j <= k
//   4. (MOD (MOD x j) k)              -> (MOD x k)        if k divides j
//   5. (MOD (R a i st) k)             -> (R a i st)       if 256^i <= k
//   6. (MOD (+ .. (MOD x j) ..) k)    -> (MOD (+ .. x ..) k)  if k divides j
//   7. (MOD x k)                      -> x                if the inferred
//      upper bound of x is below k; the inference hypotheses become side
//      conditions.  Rule 7 is re-tried on the output of rule 6.
inline SimplifyOutcome meta_mod(TermStore& store, Term t, const Context& ctx) {
  if (t.op() != Op::kMod) {
    return no_fire(t);
  }
  Term z = t.arg(0);
  Term kt = t.arg(1);
  if (!kt.is_const() || kt.value() < 0) {
    return no_fire(t);
  }
  const Integer& k = kt.value();

  Term result;
  std::vector<Hyp> conds;
  if (k == 0) {
    if (!z.syntactic_integer()) {
      return no_fire(t);
    }
    result = z;  // rule 1
  } else if (z.is_const()) {
    result = store.constant(floor_mod(z.value(), k));  // rule 2
  } else if (z.op() == Op::kMod && z.arg(1).is_const() &&
             z.arg(1).value() >= 1 && z.arg(1).value() <= k) {
    result = z;  // rule 3: the inner result already lies in [0, j) <= [0, k)
  } else if (z.op() == Op::kMod && z.arg(1).is_const() &&
             z.arg(1).value() >= 0 &&
             arith_detail::divides(k, z.arg(1).value()) &&
             z.arg(0).syntactic_integer()) {
    result = store.app(Op::kMod, {z.arg(0), kt});  // rule 4
  } else if (z.op() == Op::kR && z.arg(1).value() <= kMaxReasonedBytes &&
             pow256(z.arg(1).value()) <= k) {
    result = z;  // rule 5: an i-byte read is below 256^i
  } else {
    bool rule6 = false;
    if (z.op() == Op::kAdd) {
      std::vector<Term> xs;
      arith_detail::flatten_sum(z, xs);
      bool all_synt = true;
      for (const Term& x : xs) {
        all_synt &= x.syntactic_integer();
      }
      if (all_synt) {
        bool replaced = false;
        for (Term& x : xs) {
          if (x.op() == Op::kMod && x.arg(1).is_const() &&
              x.arg(1).value() >= 0 &&
              arith_detail::divides(k, x.arg(1).value()) &&
              x.arg(0).syntactic_integer()) {
            x = x.arg(0);
            replaced = true;
          }
        }
        if (replaced) {
          rule6 = true;
          Term sum = arith_detail::rebuild_sum(store, xs);
          InferenceResult r = ainni(store, sum, ctx);  // rule 7 on the output
          if (r.flag && r.interval->hi < k) {
            result = sum;
            conds = std::move(r.hyps);
          } else {
            result = store.app(Op::kMod, {sum, kt});
          }
        }
      }
    }
    if (!rule6) {
      InferenceResult r = ainni(store, z, ctx);  // rule 7
      if (!(r.flag && r.interval->hi < k)) {
        return no_fire(t);
      }
      result = z;
      conds = std::move(r.hyps);
    }
  }

  result = store.quote_normal(result);
  if (result == t) {
    return no_fire(t);
  }
  return {result, std::move(conds), true};
}

enum class Verdict { True, False, Unknown };

struct LessOutcome {
  Verdict verdict = Verdict::Unknown;
  std::vector<Hyp> hyps;
};

// Decides (< x y) by comparing inferred interval endpoints.  True/False are
// claimed only under the returned hypotheses.
inline LessOutcome meta_less(TermStore& store, Term x, Term y,
                             const Context& ctx) {
  if (x.is_const() && y.is_const()) {
    return {x.value() < y.value() ? Verdict::True : Verdict::False, {}};
  }
  InferenceResult rx = ainni(store, x, ctx);
  InferenceResult ry = ainni(store, y, ctx);
  if (!rx.flag || !ry.flag) {
    return {};
  }
  std::vector<Hyp> hyps = rx.hyps;
  for (const Hyp& h : ry.hyps) {
    add_hyp(hyps, h);
  }
  if (rx.interval->hi < ry.interval->lo) {
    return {Verdict::True, std::move(hyps)};
  }
  if (ry.interval->hi <= rx.interval->lo) {
    return {Verdict::False, std::move(hyps)};
  }
  return {};
}

}  // namespace symstate
