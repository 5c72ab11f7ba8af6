#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symstate/integer.hpp"

namespace symstate {

// Operator set of the term grammar.  kConst and kStateVar are leaf kinds,
// not operators; everything else is applied with the arity in kOps.
enum class Op : std::uint8_t {
  kConst,
  kStateVar,
  kR,       // (R a n st)       read n bytes at address a
  kWriteR,  // (!R a n v st)    write n bytes of v at address a
  kI,       // (I st)           instruction counter
  kWriteI,  // (!I v st)
  kS,       // (S st)           status word
  kWriteS,  // (!S v st)
  kHide,    // identity wrapper shielding finished terms
  kAdd,
  kSub,
  kMul,
  kMod,
  kAsh,
  kLogand,
  kLogior,
  kLogxor,
  kIfix,
  kIf,
  kLess,
};

inline constexpr std::size_t kOpCount = 20;

struct OpInfo {
  std::string_view name;
  std::uint8_t arity;
};

inline constexpr std::array<OpInfo, kOpCount> kOps{{
    {"<const>", 0}, {"ST", 0},     {"R", 3},      {"!R", 4},     {"I", 1},
    {"!I", 2},      {"S", 1},      {"!S", 2},     {"HIDE", 1},   {"+", 2},
    {"-", 2},       {"*", 2},      {"MOD", 2},    {"ASH", 2},    {"LOGAND", 2},
    {"LOGIOR", 2},  {"LOGXOR", 2}, {"IFIX", 1},   {"IF", 3},     {"<", 2},
}};

inline const OpInfo& op_info(Op op) {
  return kOps[static_cast<std::size_t>(op)];
}

// Operator lookup by (already upper-cased) name; leaf kinds are excluded.
inline std::optional<Op> op_from_name(std::string_view upper) {
  for (std::size_t i = 2; i < kOpCount; ++i) {
    if (kOps[i].name == upper) {
      return static_cast<Op>(i);
    }
  }
  return std::nullopt;
}

// Index of the state-typed argument, or -1 for operators without one.
inline int state_arg_index(Op op) {
  switch (op) {
    case Op::kR: return 2;
    case Op::kWriteR: return 3;
    case Op::kI:
    case Op::kS: return 0;
    case Op::kWriteI:
    case Op::kWriteS: return 1;
    default: return -1;
  }
}

// Constant folding for the arithmetic/logical operators; shared by the
// concrete evaluator and quote normalization so the two always agree.
inline Integer fold_constant(Op op, std::span<const Integer> a) {
  switch (op) {
    case Op::kAdd: return a[0] + a[1];
    case Op::kSub: return a[0] - a[1];
    case Op::kMul: return a[0] * a[1];
    case Op::kMod: return floor_mod(a[0], a[1]);
    case Op::kAsh: return arith_shift(a[0], a[1]);
    case Op::kLogand: return a[0] & a[1];
    case Op::kLogior: return a[0] | a[1];
    case Op::kLogxor: return a[0] ^ a[1];
    case Op::kIfix: return a[0];
    case Op::kLess: return a[0] < a[1] ? 1 : 0;
    default: throw ContractError("fold_constant: not a foldable operator");
  }
}

inline bool foldable_op(Op op) {
  switch (op) {
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kMod:
    case Op::kAsh:
    case Op::kLogand:
    case Op::kLogior:
    case Op::kLogxor:
    case Op::kIfix:
    case Op::kLess: return true;
    default: return false;
  }
}

enum class Ordering { LT, EQ, GT };

class TermStore;

// Lightweight handle into a TermStore.  Structural equality coincides with
// identifier equality because every node is interned.
class Term {
 public:
  Term() = default;

  bool valid() const { return store_ != nullptr; }
  Op op() const;
  std::size_t arity() const { return op_info(op()).arity; }
  Term arg(std::size_t i) const;
  const Integer& value() const;  // kConst only
  bool is_const() const { return op() == Op::kConst; }
  bool is_state_var() const { return op() == Op::kStateVar; }

  // Total tree size (sharing expanded), saturating; used by term_order.
  std::uint64_t tree_size() const;

  // Cached structural facts, all computed at intern time.
  bool settled() const;            // no IF, no updater, all reads directly on ST
  bool syntactic_integer() const;  // obviously integer-valued by shape
  bool contains_hide() const;
  bool is_state_term() const;      // ST, an updater nest, or HIDE of one

  std::uint32_t id() const { return id_; }
  const TermStore* store() const { return store_; }

  friend bool operator==(const Term& a, const Term& b) {
    assert(a.store_ == nullptr || b.store_ == nullptr || a.store_ == b.store_);
    return a.store_ == b.store_ && a.id_ == b.id_;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  friend class TermStore;
  Term(const TermStore* s, std::uint32_t id) : store_(s), id_(id) {}

  const TermStore* store_ = nullptr;
  std::uint32_t id_ = 0;
};

// Hash-consing store.  Interning the same shape twice returns the same
// identifier, so identical subterms are physically shared.  A store plus all
// terms created from it form one isolation unit: use from one thread at a
// time; the whole unit may move between threads.
class TermStore {
 public:
  TermStore() = default;
  TermStore(const TermStore&) = delete;
  TermStore& operator=(const TermStore&) = delete;

  Term constant(Integer v) {
    const std::uint32_t slot = intern_const(std::move(v));
    return intern(Key{Op::kConst, {slot, kNoArg, kNoArg, kNoArg}});
  }
  Term constant(long long v) { return constant(Integer(v)); }

  Term state_var() {
    return intern(Key{Op::kStateVar, {kNoArg, kNoArg, kNoArg, kNoArg}});
  }

  Term app(Op op, std::span<const Term> args) {
    const OpInfo& info = op_info(op);
    if (op == Op::kConst || op == Op::kStateVar) {
      throw ContractError("app: not an operator");
    }
    if (args.size() != info.arity) {
      throw ContractError("arity mismatch for " + std::string(info.name) +
                          ": expected " + std::to_string(info.arity) +
                          ", got " + std::to_string(args.size()));
    }
    for (const Term& a : args) {
      if (a.store() != this) {
        throw ContractError("argument term belongs to a different store");
      }
    }
    if (op == Op::kR || op == Op::kWriteR) {
      const Term& n = args[1];
      if (!n.is_const() || n.value() < 1) {
        throw ContractError("byte count of " + std::string(info.name) +
                            " must be a positive constant");
      }
    }
    const int state_slot = state_arg_index(op);
    if (state_slot >= 0 &&
        !args[static_cast<std::size_t>(state_slot)].is_state_term()) {
      throw ContractError("state argument of " + std::string(info.name) +
                          " must be a state expression");
    }
    Key key{op, {kNoArg, kNoArg, kNoArg, kNoArg}};
    for (std::size_t i = 0; i < args.size(); ++i) {
      key.args[i] = args[i].id();
    }
    return intern(key);
  }

  Term app(Op op, std::initializer_list<Term> args) {
    return app(op, std::span<const Term>(args.begin(), args.size()));
  }

  // Removes every HIDE wrapper in t.  Subtrees without a HIDE are returned
  // as-is (shared), so only the paths down to the deepest HIDE are rebuilt.
  Term strip_hides(Term t) {
    check_owned(t);
    if (!t.contains_hide()) {
      return t;
    }
    if (auto it = strip_cache_.find(t.id()); it != strip_cache_.end()) {
      return Term(this, it->second);
    }
    Term out;
    if (t.op() == Op::kHide) {
      out = strip_hides(t.arg(0));
    } else {
      std::vector<Term> kids;
      kids.reserve(t.arity());
      for (std::size_t i = 0; i < t.arity(); ++i) {
        kids.push_back(strip_hides(t.arg(i)));
      }
      out = app(t.op(), kids);
    }
    strip_cache_.emplace(t.id(), out.id());
    return out;
  }

  // Quote normal form: every arithmetic/logical operator applied to
  // all-constant arguments is folded, recursively (HIDE is descended into).
  // Idempotent; results are cached per store.
  Term quote_normal(Term t) {
    check_owned(t);
    if (t.is_const() || t.is_state_var()) {
      return t;
    }
    if (auto it = qn_cache_.find(t.id()); it != qn_cache_.end()) {
      return Term(this, it->second);
    }
    std::vector<Term> kids;
    kids.reserve(t.arity());
    bool changed = false;
    bool all_const = true;
    for (std::size_t i = 0; i < t.arity(); ++i) {
      Term k = quote_normal(t.arg(i));
      changed |= (k != t.arg(i));
      all_const &= k.is_const();
      kids.push_back(k);
    }
    Term out;
    if (foldable_op(t.op()) && all_const) {
      std::vector<Integer> vals;
      vals.reserve(kids.size());
      for (const Term& k : kids) {
        vals.push_back(k.value());
      }
      out = constant(fold_constant(t.op(), vals));
    } else {
      out = changed ? app(t.op(), kids) : t;
    }
    qn_cache_.emplace(t.id(), out.id());
    return out;
  }

  std::uint64_t nodes_created() const { return nodes_.size(); }
  std::uint64_t intern_hits() const { return intern_hits_; }

 private:
  friend class Term;

  static constexpr std::uint32_t kNoArg =
      std::numeric_limits<std::uint32_t>::max();

  struct Key {
    Op op;
    std::array<std::uint32_t, 4> args;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(k.op) + 1);
      for (std::uint32_t a : k.args) {
        h ^= a + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };

  enum : std::uint8_t {
    kFlagHasIf = 1,
    kFlagHasUpdater = 2,
    kFlagHasHide = 4,
    kFlagReadsResolved = 8,
    kFlagSyntInt = 16,
    kFlagStateTerm = 32,
  };

  struct Node {
    Op op;
    std::uint8_t flags;
    std::array<std::uint32_t, 4> args;
    std::uint64_t tree_size;
  };

  void check_owned(const Term& t) const {
    if (t.store() != this) {
      throw ContractError("term belongs to a different store");
    }
  }

  std::uint32_t intern_const(Integer v) {
    if (auto it = const_ids_.find(v); it != const_ids_.end()) {
      return it->second;
    }
    auto slot = static_cast<std::uint32_t>(const_pool_.size());
    const_ids_.emplace(v, slot);
    const_pool_.push_back(std::move(v));
    return slot;
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }

  Term intern(const Key& key) {
    if (auto it = intern_.find(key); it != intern_.end()) {
      ++intern_hits_;
      return Term(this, it->second);
    }
    Node n{key.op, 0, key.args, 1};
    switch (key.op) {
      case Op::kConst:
        n.flags = kFlagReadsResolved | kFlagSyntInt;
        break;
      case Op::kStateVar:
        n.flags = kFlagReadsResolved | kFlagStateTerm;
        break;
      default: {
        const std::size_t arity = op_info(key.op).arity;
        bool has_if = key.op == Op::kIf;
        bool has_upd = key.op == Op::kWriteR || key.op == Op::kWriteI ||
                       key.op == Op::kWriteS;
        bool has_hide = key.op == Op::kHide;
        bool resolved = true;
        for (std::size_t i = 0; i < arity; ++i) {
          const Node& c = nodes_[key.args[i]];
          has_if |= (c.flags & kFlagHasIf) != 0;
          has_upd |= (c.flags & kFlagHasUpdater) != 0;
          has_hide |= (c.flags & kFlagHasHide) != 0;
          resolved &= (c.flags & kFlagReadsResolved) != 0;
          n.tree_size += c.tree_size;
          if (n.tree_size < c.tree_size) {  // saturate
            n.tree_size = std::numeric_limits<std::uint64_t>::max();
          }
        }
        if (key.op == Op::kR || key.op == Op::kI || key.op == Op::kS) {
          const int slot = state_arg_index(key.op);
          resolved &= nodes_[key.args[slot]].op == Op::kStateVar;
        }
        bool synt = false;
        switch (key.op) {
          case Op::kR:
          case Op::kI:
          case Op::kMod:
          case Op::kLogand:
          case Op::kLogior:
          case Op::kLogxor:
          case Op::kIfix:
            synt = true;
            break;
          case Op::kAdd:
          case Op::kSub:
          case Op::kMul:
            synt = (nodes_[key.args[0]].flags & kFlagSyntInt) &&
                   (nodes_[key.args[1]].flags & kFlagSyntInt);
            break;
          case Op::kAsh:
          case Op::kHide:
            synt = (nodes_[key.args[0]].flags & kFlagSyntInt) != 0;
            break;
          default:
            break;
        }
        bool state_term = key.op == Op::kWriteR || key.op == Op::kWriteI ||
                          key.op == Op::kWriteS ||
                          (key.op == Op::kHide &&
                           (nodes_[key.args[0]].flags & kFlagStateTerm) != 0);
        n.flags = static_cast<std::uint8_t>(
            (has_if ? kFlagHasIf : 0) | (has_upd ? kFlagHasUpdater : 0) |
            (has_hide ? kFlagHasHide : 0) |
            (resolved ? kFlagReadsResolved : 0) | (synt ? kFlagSyntInt : 0) |
            (state_term ? kFlagStateTerm : 0));
        break;
      }
    }
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(n);
    intern_.emplace(key, id);
    return Term(this, id);
  }

  std::vector<Node> nodes_;
  std::vector<Integer> const_pool_;
  std::map<Integer, std::uint32_t> const_ids_;
  std::unordered_map<Key, std::uint32_t, KeyHash> intern_;
  std::unordered_map<std::uint32_t, std::uint32_t> strip_cache_;
  std::unordered_map<std::uint32_t, std::uint32_t> qn_cache_;
  std::uint64_t intern_hits_ = 0;
};

inline Op Term::op() const { return store_->node(id_).op; }

inline Term Term::arg(std::size_t i) const {
  assert(i < arity());
  return Term(store_, store_->node(id_).args[i]);
}

inline const Integer& Term::value() const {
  assert(is_const());
  return store_->const_pool_[store_->node(id_).args[0]];
}

inline std::uint64_t Term::tree_size() const {
  return store_->node(id_).tree_size;
}

inline bool Term::settled() const {
  const auto f = store_->node(id_).flags;
  return !(f & TermStore::kFlagHasIf) && !(f & TermStore::kFlagHasUpdater) &&
         (f & TermStore::kFlagReadsResolved);
}

inline bool Term::syntactic_integer() const {
  return (store_->node(id_).flags & TermStore::kFlagSyntInt) != 0;
}

inline bool Term::contains_hide() const {
  return (store_->node(id_).flags & TermStore::kFlagHasHide) != 0;
}

inline bool Term::is_state_term() const {
  return (store_->node(id_).flags & TermStore::kFlagStateTerm) != 0;
}

// Deterministic total order: tree size first, then leaf kind / operator,
// then constant value, then arguments left to right.  EQ iff identical.
inline Ordering term_order(Term a, Term b) {
  if (a == b) {
    return Ordering::EQ;
  }
  if (a.tree_size() != b.tree_size()) {
    return a.tree_size() < b.tree_size() ? Ordering::LT : Ordering::GT;
  }
  if (a.op() != b.op()) {
    return static_cast<int>(a.op()) < static_cast<int>(b.op()) ? Ordering::LT
                                                               : Ordering::GT;
  }
  if (a.is_const()) {
    return a.value() < b.value() ? Ordering::LT : Ordering::GT;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Ordering o = term_order(a.arg(i), b.arg(i));
    if (o != Ordering::EQ) {
      return o;
    }
  }
  return Ordering::EQ;  // unreachable for distinct interned ids
}

}  // namespace symstate
