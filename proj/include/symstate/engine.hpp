#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "symstate/arith.hpp"
#include "symstate/state.hpp"
#include "symstate/term.hpp"

namespace symstate {

// Owns one term store plus the memo tables for the expensive metafunctions.
// Because every input is interned in this store, structurally equal inputs
// have identical identifiers and cache keys compare by identity.  Contexts
// get the same treatment: they are canonicalized and interned so a context
// has one stable id per engine.
//
// An engine is one isolation unit: exclusive use by one thread at a time;
// the whole unit may be handed to another thread.
class Engine {
 public:
  using ContextId = std::uint32_t;

  struct FnStats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t evals = 0;  // underlying executions
  };

  explicit Engine(bool memoize = true) : memoize_(memoize) {
    contexts_.emplace_back();  // id 0: the empty context
    context_ids_.emplace("", 0);
  }

  TermStore& store() { return store_; }
  bool memoize() const { return memoize_; }
  void set_memoize(bool on) { memoize_ = on; }

  static ContextId empty_context() { return 0; }

  ContextId intern_context(const Context& ctx) {
    Context canon = ctx;
    std::sort(canon.begin(), canon.end(),
              [](const Assumption& a, const Assumption& b) {
                if (a.subject.id() != b.subject.id()) {
                  return a.subject.id() < b.subject.id();
                }
                if (a.rel != b.rel) {
                  return static_cast<int>(a.rel) < static_cast<int>(b.rel);
                }
                return a.bound < b.bound;
              });
    canon.erase(std::unique(canon.begin(), canon.end(),
                            [](const Assumption& a, const Assumption& b) {
                              return a.subject == b.subject &&
                                     a.rel == b.rel && a.bound == b.bound;
                            }),
                canon.end());
    std::string key;
    for (const Assumption& a : canon) {
      key += std::to_string(a.subject.id()) + ":" +
             std::to_string(static_cast<int>(a.rel)) + ":" + a.bound.str() +
             ";";
    }
    if (auto it = context_ids_.find(key); it != context_ids_.end()) {
      return it->second;
    }
    auto id = static_cast<ContextId>(contexts_.size());
    contexts_.push_back(std::move(canon));
    context_ids_.emplace(std::move(key), id);
    return id;
  }

  const Context& context(ContextId id) const { return contexts_.at(id); }

  SimplifyOutcome memoizable_meta_r(Term t, ContextId ctx) {
    return memoized(r_cache_, r_stats_, t, ctx, [&] {
      return meta_r(store_, t, context(ctx));
    });
  }

  SimplifyOutcome memoizable_meta_bang_r(Term t, ContextId ctx) {
    return memoized(bang_r_cache_, bang_r_stats_, t, ctx, [&] {
      return meta_bang_r(store_, t, context(ctx));
    });
  }

  SimplifyOutcome memoizable_meta_mod(Term t, ContextId ctx) {
    return memoized(mod_cache_, mod_stats_, t, ctx, [&] {
      return meta_mod(store_, t, context(ctx));
    });
  }

  LessOutcome memoizable_meta_less(Term x, Term y, ContextId ctx) {
    const LessKey key{x.id(), y.id(), ctx};
    if (memoize_) {
      if (auto it = less_cache_.find(key); it != less_cache_.end()) {
        ++less_stats_.hits;
        return it->second;
      }
      ++less_stats_.misses;
    }
    ++less_stats_.evals;
    LessOutcome out = meta_less(store_, x, y, context(ctx));
    if (memoize_) {
      less_cache_.emplace(key, out);
    }
    return out;
  }

  // The field metafunctions are too cheap to be worth memoizing.
  SimplifyOutcome run_meta_i(Term t) { return meta_i(store_, t); }
  SimplifyOutcome run_meta_s(Term t) { return meta_s(store_, t); }
  SimplifyOutcome run_meta_bang_i(Term t) { return meta_bang_i(store_, t); }
  SimplifyOutcome run_meta_bang_s(Term t) { return meta_bang_s(store_, t); }

  // Dispatch on the top operator, the way the surrounding rewriter would.
  SimplifyOutcome simplify(Term t, ContextId ctx) {
    switch (t.op()) {
      case Op::kR: return memoizable_meta_r(t, ctx);
      case Op::kWriteR: return memoizable_meta_bang_r(t, ctx);
      case Op::kI: return run_meta_i(t);
      case Op::kS: return run_meta_s(t);
      case Op::kWriteI: return run_meta_bang_i(t);
      case Op::kWriteS: return run_meta_bang_s(t);
      case Op::kMod: return memoizable_meta_mod(t, ctx);
      case Op::kLess: {
        LessOutcome lo = memoizable_meta_less(t.arg(0), t.arg(1), ctx);
        switch (lo.verdict) {
          case Verdict::True: return {store_.constant(1), lo.hyps, true};
          case Verdict::False: return {store_.constant(0), lo.hyps, true};
          case Verdict::Unknown: return no_fire(t);
        }
        return no_fire(t);
      }
      default: {
        Term qn = store_.quote_normal(t);
        if (qn != t) {
          return {qn, {}, true};
        }
        return no_fire(t);
      }
    }
  }

  const FnStats& stats_meta_r() const { return r_stats_; }
  const FnStats& stats_meta_bang_r() const { return bang_r_stats_; }
  const FnStats& stats_meta_mod() const { return mod_stats_; }
  const FnStats& stats_meta_less() const { return less_stats_; }

  std::uint64_t memo_hits() const {
    return r_stats_.hits + bang_r_stats_.hits + mod_stats_.hits +
           less_stats_.hits;
  }
  std::uint64_t memo_misses() const {
    return r_stats_.misses + bang_r_stats_.misses + mod_stats_.misses +
           less_stats_.misses;
  }

 private:
  using Key = std::uint64_t;  // (term id << 32) | context id

  static Key make_key(Term t, ContextId ctx) {
    return (static_cast<std::uint64_t>(t.id()) << 32) | ctx;
  }

  struct LessKey {
    std::uint32_t x, y, ctx;
    bool operator==(const LessKey&) const = default;
  };
  struct LessKeyHash {
    std::size_t operator()(const LessKey& k) const {
      std::uint64_t h = k.x;
      h = h * 0x9E3779B97F4A7C15ull + k.y;
      h = h * 0x9E3779B97F4A7C15ull + k.ctx;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };

  template <typename Fn>
  SimplifyOutcome memoized(std::unordered_map<Key, SimplifyOutcome>& cache,
                           FnStats& stats, Term t, ContextId ctx, Fn&& fn) {
    if (t.store() != &store_) {
      throw ContractError("input term is not interned in this engine's store");
    }
    const Key key = make_key(t, ctx);
    if (memoize_) {
      if (auto it = cache.find(key); it != cache.end()) {
        ++stats.hits;
        return it->second;
      }
      ++stats.misses;
    }
    ++stats.evals;
    SimplifyOutcome out = fn();
    if (memoize_) {
      cache.emplace(key, out);
    }
    return out;
  }

  TermStore store_;
  bool memoize_;
  std::vector<Context> contexts_;
  std::unordered_map<std::string, ContextId> context_ids_;
  std::unordered_map<Key, SimplifyOutcome> r_cache_;
  std::unordered_map<Key, SimplifyOutcome> bang_r_cache_;
  std::unordered_map<Key, SimplifyOutcome> mod_cache_;
  std::unordered_map<LessKey, LessOutcome, LessKeyHash> less_cache_;
  FnStats r_stats_, bang_r_stats_, mod_stats_, less_stats_;
};

}  // namespace symstate
