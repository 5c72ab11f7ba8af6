#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "symstate/arith.hpp"
#include "symstate/interval.hpp"
#include "symstate/term.hpp"

namespace symstate {

// A state expression decoded into its chain of updates, newest (outermost)
// first, over the base state ST.  Entries are never sorted by address, and
// a well-formed nest never holds two memory entries with the same
// (equivalent address, byte count): the newer write perfectly shadows the
// older one, which gets deleted when the nest is built.
struct WriteEntry {
  enum class Kind { Mem, Ictr, Stat };
  Kind kind;
  Term addr;      // Mem only
  Integer count;  // Mem only, >= 1
  Term value;
};

struct WriteNest {
  std::vector<WriteEntry> entries;
};

// True iff nothing in t is still waiting to be rewritten: no IF, no state
// updater, and every R/I/S takes ST directly (a read over a hidden state is
// an unresolved read-over-write).
inline bool settled(Term t) { return t.settled(); }

// Decodes a bare updater chain ending in ST.  Entry addresses and values
// must be settled and HIDE-free, which is how the metafunctions store them.
inline std::optional<WriteNest> decode_state_chain(Term t) {
  WriteNest nest;
  Term cur = t;
  for (;;) {
    if (cur.is_state_var()) {
      return nest;
    }
    switch (cur.op()) {
      case Op::kWriteR: {
        Term addr = cur.arg(0);
        Term value = cur.arg(2);
        if (addr.contains_hide() || !addr.settled() || value.contains_hide() ||
            !value.settled()) {
          return std::nullopt;
        }
        nest.entries.push_back(
            {WriteEntry::Kind::Mem, addr, cur.arg(1).value(), value});
        cur = cur.arg(3);
        break;
      }
      case Op::kWriteI:
      case Op::kWriteS: {
        Term value = cur.arg(0);
        if (value.contains_hide() || !value.settled()) {
          return std::nullopt;
        }
        nest.entries.push_back({cur.op() == Op::kWriteI
                                    ? WriteEntry::Kind::Ictr
                                    : WriteEntry::Kind::Stat,
                                Term{}, 0, value});
        cur = cur.arg(1);
        break;
      }
      default:
        return std::nullopt;
    }
  }
}

// Accepts the state argument of a metafunction: ST itself or a single HIDE
// around a well-formed chain.
inline std::optional<WriteNest> decode_state_arg(Term t) {
  if (t.is_state_var()) {
    return WriteNest{};
  }
  if (t.op() == Op::kHide) {
    return decode_state_chain(t.arg(0));
  }
  return std::nullopt;
}

inline Term encode_state_chain(TermStore& store, const WriteNest& nest) {
  Term acc = store.state_var();
  for (std::size_t i = nest.entries.size(); i-- > 0;) {
    const WriteEntry& e = nest.entries[i];
    switch (e.kind) {
      case WriteEntry::Kind::Mem:
        acc = store.app(Op::kWriteR,
                        {e.addr, store.constant(e.count), e.value, acc});
        break;
      case WriteEntry::Kind::Ictr:
        acc = store.app(Op::kWriteI, {e.value, acc});
        break;
      case WriteEntry::Kind::Stat:
        acc = store.app(Op::kWriteS, {e.value, acc});
        break;
    }
  }
  return acc;
}

namespace addr_detail {

// An address as a constant offset from a base term; a null base means the
// address is the constant `offset` itself.
struct Parts {
  Term base;
  Integer offset;
};

inline Parts decompose(Term a) {
  if (a.is_const()) {
    return {Term{}, a.value()};
  }
  if (a.op() == Op::kAdd) {
    if (a.arg(0).is_const()) {
      return {a.arg(1), a.arg(0).value()};
    }
    if (a.arg(1).is_const()) {
      return {a.arg(0), a.arg(1).value()};
    }
  }
  return {a, 0};
}

// Decomposition plus context-free point promotion: an address whose interval
// is a single point with no hypotheses needed is as good as that constant.
inline Parts resolve(TermStore& store, Term a) {
  Parts p = decompose(a);
  if (p.base.valid()) {
    InferenceResult r = ainni(store, a, Context{});
    if (r.flag && r.hyps.empty() && r.interval->lo == r.interval->hi) {
      return {Term{}, r.interval->lo};
    }
  }
  return p;
}

inline bool same_base(const Parts& x, const Parts& y) {
  if (x.base.valid() != y.base.valid()) {
    return false;
  }
  return !x.base.valid() || x.base == y.base;
}

// Address at a constant byte offset from a decomposed address.  For offset 0
// the original term is reused unchanged.
inline Term at_offset(TermStore& store, Term original, const Parts& p,
                      const Integer& off) {
  if (off == 0) {
    return original;
  }
  Integer c = p.offset + off;
  if (!p.base.valid()) {
    return store.constant(c);
  }
  if (c == 0) {
    return p.base;
  }
  return store.app(Op::kAdd, {store.constant(c), p.base});
}

}  // namespace addr_detail

// Two addresses denote the same location when they are the same interned
// term, equal constants, equal constant offsets from one syntactically
// identical base, or provably the same point without hypotheses.
// Undecidable equivalence is reported as "not equivalent".
inline bool addresses_equivalent(TermStore& store, Term a, Term b) {
  if (a == b) {
    return true;
  }
  addr_detail::Parts pa = addr_detail::resolve(store, a);
  addr_detail::Parts pb = addr_detail::resolve(store, b);
  return addr_detail::same_base(pa, pb) && pa.offset == pb.offset;
}

// Extracted values are hidden except constants and reads, so tests against
// them stay cheap while big value expressions are shielded from rewriting.
inline Term apply_hide_policy(TermStore& store, Term value) {
  if (value.is_const() || value.op() == Op::kR) {
    return value;
  }
  return store.app(Op::kHide, {value});
}

namespace state_detail {

inline SimplifyOutcome fire(TermStore& store, const WriteNest& nest) {
  Term chain = encode_state_chain(store, nest);
  Term hidden = store.quote_normal(store.app(Op::kHide, {chain}));
  return {hidden, {}, true};
}

inline SimplifyOutcome meta_set_field(TermStore& store, Term t,
                                      WriteEntry::Kind kind) {
  auto nest = decode_state_arg(t.arg(1));
  if (!nest) {
    return no_fire(t);
  }
  Term value = store.strip_hides(t.arg(0));
  if (!value.settled()) {
    return no_fire(t);
  }
  // The previous value of this field, if any, is perfectly shadowed.
  std::erase_if(nest->entries,
                [&](const WriteEntry& e) { return e.kind == kind; });
  nest->entries.insert(nest->entries.begin(),
                       {kind, Term{}, 0, value});
  return fire(store, *nest);
}

inline SimplifyOutcome meta_get_field(TermStore& store, Term t,
                                      WriteEntry::Kind kind) {
  Term sigma = t.arg(0);
  if (sigma.is_state_var()) {
    return no_fire(t);  // already in normal form
  }
  auto nest = decode_state_arg(sigma);
  if (!nest) {
    return no_fire(t);
  }
  for (const WriteEntry& e : nest->entries) {
    if (e.kind == kind) {
      Term v = store.quote_normal(e.value);
      return {apply_hide_policy(store, v), {}, true};
    }
  }
  // Never written in this nest: fall through to the base state.
  return {store.app(t.op(), {store.state_var()}), {}, true};
}

}  // namespace state_detail

inline SimplifyOutcome meta_bang_i(TermStore& store, Term t) {
  if (t.op() != Op::kWriteI) {
    return no_fire(t);
  }
  return state_detail::meta_set_field(store, t, WriteEntry::Kind::Ictr);
}

inline SimplifyOutcome meta_bang_s(TermStore& store, Term t) {
  if (t.op() != Op::kWriteS) {
    return no_fire(t);
  }
  return state_detail::meta_set_field(store, t, WriteEntry::Kind::Stat);
}

inline SimplifyOutcome meta_i(TermStore& store, Term t) {
  if (t.op() != Op::kI) {
    return no_fire(t);
  }
  return state_detail::meta_get_field(store, t, WriteEntry::Kind::Ictr);
}

inline SimplifyOutcome meta_s(TermStore& store, Term t) {
  if (t.op() != Op::kS) {
    return no_fire(t);
  }
  return state_detail::meta_get_field(store, t, WriteEntry::Kind::Stat);
}

// (!R a n v sigma): hide-strip a and v, refuse to fire while either still
// has pending rewrites, delete a perfectly shadowed older write (same byte
// count, equivalent address -- valid at any depth regardless of intervening
// writes), and push the new write on top of the nest.
inline SimplifyOutcome meta_bang_r(TermStore& store, Term t,
                                   const Context& /*ctx*/) {
  if (t.op() != Op::kWriteR) {
    return no_fire(t);
  }
  auto nest = decode_state_arg(t.arg(3));
  if (!nest) {
    return no_fire(t);
  }
  Term addr = store.strip_hides(t.arg(0));
  Term value = store.strip_hides(t.arg(2));
  if (!addr.settled() || !value.settled()) {
    return no_fire(t);
  }
  const Integer& count = t.arg(1).value();
  for (auto it = nest->entries.begin(); it != nest->entries.end(); ++it) {
    if (it->kind == WriteEntry::Kind::Mem && it->count == count &&
        addresses_equivalent(store, it->addr, addr)) {
      nest->entries.erase(it);
      break;  // shadow-free nests hold at most one such entry
    }
  }
  nest->entries.insert(nest->entries.begin(),
                       {WriteEntry::Kind::Mem, addr, count, value});
  return state_detail::fire(store, *nest);
}

namespace state_detail {

// A value expression fits m bytes when it provably lies in [0, 256^m):
// a constant in range, a read of at most m bytes, or anything the interval
// machinery confines below 256^m without needing hypotheses.  Context
// assumptions are deliberately not consulted, so results do not depend on
// bounds that were never recorded as side conditions.
inline bool fits_bytes(TermStore& store, Term e, const Integer& m) {
  if (e.is_const()) {
    return e.value() >= 0 && e.value() < pow256(m);
  }
  if (e.op() == Op::kR) {
    return e.arg(1).value() <= m;
  }
  InferenceResult r = ainni(store, e, Context{});
  return r.flag && r.hyps.empty() && r.interval->hi < pow256(m);
}

}  // namespace state_detail

// (R a n sigma): resolve the read against the nest, newest write first.
// Every byte of the target span is traced to the newest write covering it
// (or to the base state); maximal runs with one source become segments,
// which are shifted, truncated, and summed in little-endian order.  A write
// whose position relative to the read cannot be decided -- not by shared
// base-plus-offset arithmetic, not by interval separation -- blocks the
// whole resolution (no fire).  Interval-based separations contribute their
// hypotheses as side conditions.
inline SimplifyOutcome meta_r(TermStore& store, Term t, const Context& ctx) {
  if (t.op() != Op::kR) {
    return no_fire(t);
  }
  Term sigma = t.arg(2);
  if (sigma.is_state_var()) {
    return no_fire(t);  // already in normal form
  }
  auto nest = decode_state_arg(sigma);
  if (!nest) {
    return no_fire(t);
  }
  Term addr = store.strip_hides(t.arg(0));
  if (!addr.settled()) {
    return no_fire(t);
  }
  const Integer& count = t.arg(1).value();
  if (count > kMaxReasonedBytes) {
    return no_fire(t);
  }
  const auto n = static_cast<std::size_t>(count);

  const addr_detail::Parts pa = addr_detail::resolve(store, addr);

  constexpr int kUnset = -1;
  constexpr int kBase = -2;
  std::vector<int> source(n, kUnset);
  std::size_t unset = n;
  std::vector<Hyp> conds;
  std::optional<InferenceResult> read_span;  // computed at most once
  std::vector<addr_detail::Parts> entry_parts(nest->entries.size());

  for (std::size_t ei = 0; ei < nest->entries.size() && unset > 0; ++ei) {
    const WriteEntry& e = nest->entries[ei];
    if (e.kind != WriteEntry::Kind::Mem) {
      continue;  // field updates never touch memory
    }
    addr_detail::Parts pb = addr_detail::resolve(store, e.addr);
    entry_parts[ei] = pb;
    if (addr_detail::same_base(pa, pb)) {
      const Integer delta = pb.offset - pa.offset;
      Integer lo = delta < 0 ? Integer(0) : delta;
      Integer hi = delta + e.count;
      if (hi > count) {
        hi = count;
      }
      if (lo >= hi) {
        continue;  // disjoint by offset arithmetic alone
      }
      for (auto o = static_cast<std::size_t>(lo);
           o < static_cast<std::size_t>(hi); ++o) {
        if (source[o] == kUnset) {
          source[o] = static_cast<int>(ei);
          --unset;
        }
      }
    } else {
      if (!read_span) {
        read_span = bound_read_span(store, addr, count, ctx);
      }
      InferenceResult wspan = bound_read_span(store, e.addr, e.count, ctx);
      if (read_span->flag && wspan.flag &&
          (read_span->interval->hi < wspan.interval->lo ||
           wspan.interval->hi < read_span->interval->lo)) {
        for (const Hyp& h : read_span->hyps) {
          add_hyp(conds, h);
        }
        for (const Hyp& h : wspan.hyps) {
          add_hyp(conds, h);
        }
        continue;
      }
      return no_fire(t);
    }
  }

  // Assemble segments: maximal runs of bytes with the same source.
  std::vector<Term> summands;
  std::size_t o = 0;
  while (o < n) {
    std::size_t end = o + 1;
    while (end < n && source[end] == source[o]) {
      ++end;
    }
    const Integer m = end - o;
    const int src = source[o] == kUnset ? kBase : source[o];
    Term seg;
    if (src == kBase) {
      seg = store.app(
          Op::kR, {addr_detail::at_offset(store, addr, pa, Integer(o)),
                   store.constant(m), store.state_var()});
    } else {
      const WriteEntry& e = nest->entries[static_cast<std::size_t>(src)];
      const addr_detail::Parts& pb = entry_parts[static_cast<std::size_t>(src)];
      const Integer shift = pa.offset + o - pb.offset;  // bytes into the write
      seg = e.value;
      if (!seg.syntactic_integer()) {
        seg = store.app(Op::kIfix, {seg});
      }
      if (shift > 0) {
        seg = store.app(Op::kAsh, {seg, store.constant(-8 * shift)});
      }
      seg = store.quote_normal(seg);
      if (!state_detail::fits_bytes(store, seg, m)) {
        seg = store.quote_normal(
            store.app(Op::kMod, {seg, store.constant(pow256(m))}));
      }
    }
    summands.push_back(
        o == 0 ? seg
               : store.app(Op::kAsh, {seg, store.constant(Integer(8 * o))}));
    o = end;
  }

  std::sort(summands.begin(), summands.end(), [](Term a, Term b) {
    return term_order(a, b) == Ordering::LT;
  });
  Term value = summands.back();
  for (std::size_t i = summands.size() - 1; i-- > 0;) {
    value = store.app(Op::kAdd, {summands[i], value});
  }
  value = store.quote_normal(value);
  return {apply_hide_policy(store, value), std::move(conds), true};
}

}  // namespace symstate
