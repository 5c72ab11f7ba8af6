#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symstate/machine.hpp"
#include "symstate/sexpr.hpp"
#include "symstate/term.hpp"

namespace symstate {

// Contextual assumptions: inequalities between a subterm and a natural
// constant.  They stand in for whatever bound information the surrounding
// proof context has established, and are consulted only at read leaves.
enum class Rel { Lt, Le, Ge, Gt };

struct Assumption {
  Term subject;
  Rel rel;
  Integer bound;  // natural
};

using Context = std::vector<Assumption>;

struct Interval {
  Integer lo;
  Integer hi;
};

// A hypothesis justifying an inference step.  Always a strict-less-than
// application; expect_true = false asserts its negation, which renders as
// the non-strict form: !(x < y) is printed (<= y x).
struct Hyp {
  Term strict_less;
  bool expect_true = true;

  friend bool operator==(const Hyp&, const Hyp&) = default;
};

inline std::string render_hyp(const Hyp& h) {
  if (h.expect_true) {
    return print_term(h.strict_less);
  }
  return "(<= " + print_term(h.strict_less.arg(1)) + " " +
         print_term(h.strict_less.arg(0)) + ")";
}

inline bool hyp_holds(const Hyp& h, const ConcreteState& s) {
  return (eval_value(h.strict_less, s) == 1) == h.expect_true;
}

inline void add_hyp(std::vector<Hyp>& hyps, const Hyp& h) {
  for (const Hyp& e : hyps) {
    if (e == h) {
      return;
    }
  }
  hyps.push_back(h);
}

// flag=false means the term could not be confined to a natural interval;
// hyps and interval are then absent.
struct InferenceResult {
  bool flag = false;
  std::vector<Hyp> hyps;
  std::optional<Interval> interval;
};

namespace ainni_detail {

struct Walker {
  TermStore& store;
  const Context& ctx;
  std::unordered_map<std::uint32_t, InferenceResult> memo;

  static InferenceResult fail() { return {}; }

  static InferenceResult ok(Integer lo, Integer hi, std::vector<Hyp> hyps) {
    InferenceResult r;
    r.flag = true;
    r.hyps = std::move(hyps);
    r.interval = Interval{std::move(lo), std::move(hi)};
    return r;
  }

  Hyp make_hyp(Term subject, Rel rel, const Integer& bound) {
    Term b = store.constant(bound);
    switch (rel) {
      case Rel::Lt: return {store.app(Op::kLess, {subject, b}), true};
      case Rel::Le: return {store.app(Op::kLess, {b, subject}), false};
      case Rel::Ge: return {store.app(Op::kLess, {subject, b}), false};
      case Rel::Gt: return {store.app(Op::kLess, {b, subject}), true};
    }
    throw ContractError("unreachable");
  }

  InferenceResult read_leaf(Term t) {
    const Integer n = t.arg(1).value();
    if (n > kMaxReasonedBytes) {
      return fail();
    }
    Integer lo = 0;
    Integer hi = pow256(n) - 1;
    std::vector<Hyp> hyps;
    // Tightest applicable upper and lower assumptions on this exact subterm;
    // only assumptions that actually tighten the default bound are used
    // (and recorded as hypotheses).
    const Assumption* best_up = nullptr;
    Integer up;
    const Assumption* best_lo = nullptr;
    Integer low;
    for (const Assumption& a : ctx) {
      if (a.subject != t) {
        continue;
      }
      switch (a.rel) {
        case Rel::Lt:
        case Rel::Le: {
          Integer eff = a.rel == Rel::Lt ? a.bound - 1 : a.bound;
          if (eff < hi && (!best_up || eff < up)) {
            best_up = &a;
            up = eff;
          }
          break;
        }
        case Rel::Ge:
        case Rel::Gt: {
          Integer eff = a.rel == Rel::Gt ? a.bound + 1 : a.bound;
          if (eff > lo && (!best_lo || eff > low)) {
            best_lo = &a;
            low = eff;
          }
          break;
        }
      }
    }
    if (best_up) {
      hi = up;
      add_hyp(hyps, make_hyp(best_up->subject, best_up->rel, best_up->bound));
    }
    if (best_lo) {
      lo = low;
      add_hyp(hyps, make_hyp(best_lo->subject, best_lo->rel, best_lo->bound));
    }
    if (hi < lo) {
      hi = lo;  // contradictory assumptions; the hypotheses are unsatisfiable
    }
    return ok(std::move(lo), std::move(hi), std::move(hyps));
  }

  InferenceResult walk(Term t) {
    if (auto it = memo.find(t.id()); it != memo.end()) {
      return it->second;
    }
    InferenceResult r = compute(t);
    memo.emplace(t.id(), r);
    return r;
  }

  InferenceResult compute(Term t) {
    switch (t.op()) {
      case Op::kConst:
        if (t.value() < 0) {
          return fail();
        }
        return ok(t.value(), t.value(), {});
      case Op::kR:
        if (!t.arg(2).is_state_var()) {
          return fail();  // unresolved read-over-write
        }
        return read_leaf(t);
      case Op::kHide:
      case Op::kIfix:
        return walk(t.arg(0));
      case Op::kAdd:
      case Op::kMul: {
        InferenceResult a = walk(t.arg(0));
        InferenceResult b = walk(t.arg(1));
        if (!a.flag || !b.flag) {
          return fail();
        }
        std::vector<Hyp> hyps = a.hyps;
        for (const Hyp& h : b.hyps) {
          add_hyp(hyps, h);
        }
        if (t.op() == Op::kAdd) {
          return ok(a.interval->lo + b.interval->lo,
                    a.interval->hi + b.interval->hi, std::move(hyps));
        }
        return ok(a.interval->lo * b.interval->lo,
                  a.interval->hi * b.interval->hi, std::move(hyps));
      }
      case Op::kSub: {
        InferenceResult a = walk(t.arg(0));
        InferenceResult b = walk(t.arg(1));
        if (!a.flag || !b.flag) {
          return fail();
        }
        std::vector<Hyp> hyps = a.hyps;
        for (const Hyp& h : b.hyps) {
          add_hyp(hyps, h);
        }
        if (a.interval->lo < b.interval->hi) {
          // Not provably nonnegative: assume !(x < y) for (- x y).
          add_hyp(hyps, Hyp{store.app(Op::kLess, {t.arg(0), t.arg(1)}), false});
        }
        Integer lo = a.interval->lo - b.interval->hi;
        Integer hi = a.interval->hi - b.interval->lo;
        if (lo < 0) {
          lo = 0;
        }
        if (hi < 0) {
          hi = 0;
        }
        return ok(std::move(lo), std::move(hi), std::move(hyps));
      }
      case Op::kAsh: {
        if (!t.arg(1).is_const()) {
          return fail();
        }
        const Integer& c = t.arg(1).value();
        if (c > kMaxShiftBits || c < -kMaxShiftBits) {
          return fail();
        }
        InferenceResult a = walk(t.arg(0));
        if (!a.flag) {
          return fail();
        }
        return ok(arith_shift(a.interval->lo, c),
                  arith_shift(a.interval->hi, c), std::move(a.hyps));
      }
      case Op::kMod: {
        if (!t.arg(1).is_const()) {
          return fail();
        }
        const Integer& k = t.arg(1).value();
        if (k < 0) {
          return fail();
        }
        InferenceResult a = walk(t.arg(0));
        if (!a.flag) {
          return fail();
        }
        if (k == 0) {
          return a;
        }
        if (a.interval->hi < k) {
          return a;
        }
        return ok(0, k - 1, std::move(a.hyps));
      }
      case Op::kLogand: {
        InferenceResult a = walk(t.arg(0));
        InferenceResult b = walk(t.arg(1));
        if (!a.flag || !b.flag) {
          return fail();
        }
        std::vector<Hyp> hyps = a.hyps;
        for (const Hyp& h : b.hyps) {
          add_hyp(hyps, h);
        }
        Integer hi = a.interval->hi < b.interval->hi ? a.interval->hi
                                                     : b.interval->hi;
        return ok(0, std::move(hi), std::move(hyps));
      }
      case Op::kLogior:
      case Op::kLogxor: {
        InferenceResult a = walk(t.arg(0));
        InferenceResult b = walk(t.arg(1));
        if (!a.flag || !b.flag) {
          return fail();
        }
        std::vector<Hyp> hyps = a.hyps;
        for (const Hyp& h : b.hyps) {
          add_hyp(hyps, h);
        }
        std::size_t bits = std::max(bit_length(a.interval->hi),
                                    bit_length(b.interval->hi));
        return ok(0, pow2(Integer(bits)) - 1, std::move(hyps));
      }
      default:
        return fail();
    }
  }
};

}  // namespace ainni_detail

// Infers a closed natural interval containing the value of t under ctx.
// Every returned hypothesis is either a used context assumption or a
// nonnegativity assumption for a subtraction subterm.
inline InferenceResult ainni(TermStore& store, Term t, const Context& ctx) {
  ainni_detail::Walker w{store, ctx, {}};
  return w.walk(t);
}

// Interval of addresses touched by reading `count` bytes starting at `addr`:
// the address interval widened upward by count - 1.
inline InferenceResult bound_read_span(TermStore& store, Term addr,
                                       const Integer& count,
                                       const Context& ctx) {
  if (count < 1) {
    throw ContractError("bound_read_span: count must be positive");
  }
  InferenceResult r = ainni(store, addr, ctx);
  if (r.flag) {
    r.interval->hi += count - 1;
  }
  return r;
}

// Context file format: one assumption per line, each
// (< term N) | (<= term N) | (>= term N) | (> term N), N a decimal natural.
inline Context parse_context(TermStore& store, std::string_view text) {
  Context ctx;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    sexpr_detail::Lexer lex{line};
    auto tok = lex.next();
    if (!tok) {
      continue;  // blank
    }
    auto fail = [&](const std::string& msg) {
      throw ParseError("context line " + std::to_string(lineno) + ": " + msg);
    };
    if (*tok != "(") {
      fail("expected '('");
    }
    auto rel_tok = lex.next();
    if (!rel_tok) {
      fail("expected relation");
    }
    Rel rel;
    if (*rel_tok == "<") {
      rel = Rel::Lt;
    } else if (*rel_tok == "<=") {
      rel = Rel::Le;
    } else if (*rel_tok == ">=") {
      rel = Rel::Ge;
    } else if (*rel_tok == ">") {
      rel = Rel::Gt;
    } else {
      fail("unknown relation '" + std::string(*rel_tok) + "'");
      return ctx;  // unreachable
    }
    Term subject = sexpr_detail::parse_one(lex, store);
    auto bound_tok = lex.next();
    if (!bound_tok || !sexpr_detail::is_integer_literal(*bound_tok) ||
        (*bound_tok)[0] == '-') {
      fail("expected a natural bound");
    }
    Integer bound{std::string(*bound_tok)};
    auto close = lex.next();
    if (!close || *close != ")") {
      fail("expected ')'");
    }
    if (lex.next()) {
      fail("trailing input");
    }
    ctx.push_back(Assumption{subject, rel, bound});
  }
  return ctx;
}

}  // namespace symstate
