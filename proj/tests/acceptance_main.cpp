// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria hold.  Thresholds and tolerances are fixed here, in code.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "symstate/symstate.hpp"
#include "test_util.hpp"

using namespace symstate;
using testutil::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Checker {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Term P(TermStore& st, const std::string& s) { return parse_term(st, s); }

// ---- 1. Golden examples, exact term match ---------------------------------

bool golden_syntactic(Checker& c) {
  const auto t0 = Clock::now();
  Engine eng;
  TermStore& st = eng.store();
  auto E = Engine::empty_context();

  auto expect_term = [&](const SimplifyOutcome& out, const std::string& want,
                         const std::string& tag) {
    c.expect(out.fired, tag + ": did not fire");
    c.expect(out.result == P(st, want),
             tag + ": got " + print_term(out.result) + ", want " + want);
  };

  // (1)..(3): field write, memory write over a hidden state, field read
  expect_term(eng.run_meta_bang_i(P(st, "(!I 123 ST)")), "(HIDE (!I 123 ST))",
              "ex1");
  expect_term(
      eng.memoizable_meta_bang_r(
          P(st, "(!R 0 4 (R 16 4 ST) (HIDE (!I 123 ST)))"), E),
      "(HIDE (!R 0 4 (R 16 4 ST) (!I 123 ST)))", "ex2");
  {
    auto out = eng.run_meta_i(P(st, "(I (HIDE (!R 0 4 (R 16 4 ST) (!I 123 ST))))"));
    c.expect(out.fired && out.result == st.constant(123),
             "ex3: got " + print_term(out.result));
  }

  // (4)..(6): exact hit, upper partial hit, clean miss
  const std::string stp = "(HIDE (!R 0 4 (R 16 4 ST) (!I 123 ST)))";
  expect_term(eng.memoizable_meta_r(P(st, "(R 0 4 " + stp + ")"), E),
              "(R 16 4 ST)", "ex4");
  expect_term(eng.memoizable_meta_r(P(st, "(R 2 2 " + stp + ")"), E),
              "(HIDE (ASH (R 16 4 ST) -16))", "ex5");
  expect_term(eng.memoizable_meta_r(P(st, "(R 8 4 " + stp + ")"), E),
              "(R 8 4 ST)", "ex6");

  // (8)/(9): writes are not truncated, reads truncate instead
  expect_term(eng.memoizable_meta_bang_r(P(st, "(!R 8 4 (S ST) ST)"), E),
              "(HIDE (!R 8 4 (S ST) ST))", "ex8");
  expect_term(
      eng.memoizable_meta_r(P(st, "(R 8 4 (HIDE (!R 8 4 (S ST) ST)))"), E),
      "(HIDE (MOD (IFIX (S ST)) 4294967296))", "ex9");

  // (10): symbolic read over irrelevant writes, with its side condition
  Context ctx{{P(st, "(R 16 4 ST)"), Rel::Le, Integer(15)}};
  auto cid = eng.intern_context(ctx);
  auto o10 = eng.memoizable_meta_r(
      P(st, "(R (+ 3200 (* 8 (R 16 4 ST))) 8 "
            "(HIDE (!R 3600 4 (S ST) (!R 8 4 (I ST) ST))))"),
      cid);
  c.expect(o10.fired, "ex10: did not fire");
  c.expect(o10.result == P(st, "(R (+ 3200 (* 8 (R 16 4 ST))) 8 ST)"),
           "ex10: got " + print_term(o10.result));
  c.expect(o10.side_conditions.size() == 1,
           "ex10: expected exactly one side condition");
  if (!o10.side_conditions.empty()) {
    c.expect(render_hyp(o10.side_conditions[0]) == "(<= (R 16 4 ST) 15)",
             "ex10: side condition rendered as " +
                 render_hyp(o10.side_conditions[0]));
  }

  // (11): deep perfect shadow of a symbolic address, no side conditions
  auto o11 = eng.memoizable_meta_bang_r(
      P(st,
        "(!R (+ 3200 (* 8 (R 16 4 ST))) 8 201 (HIDE (!R 3600 4 202 "
        "(!R 8 4 203 (!R (+ 3200 (* 8 (R 16 4 ST))) 8 204 ST)))))"),
      cid);
  c.expect(o11.fired && o11.side_conditions.empty(),
           "ex11: fire without side conditions expected");
  c.expect(o11.result == P(st,
                           "(HIDE (!R (+ 3200 (* 8 (R 16 4 ST))) 8 201 "
                           "(!R 3600 4 202 (!R 8 4 203 ST))))"),
           "ex11: got " + print_term(o11.result));

  const double dt = seconds_since(t0);
  c.expect(dt < 1.0, "golden block took " + std::to_string(dt) + " s");
  c.detail += c.detail.empty() ? "10 examples exact" : "";
  return c.ok;
}

// ---- 2. Golden examples, semantic match ------------------------------------

bool golden_semantic(Checker& c) {
  Engine eng;
  TermStore& st = eng.store();
  auto E = Engine::empty_context();
  Rng rng(20240917);

  // (7): mixed read of one write plus base bytes
  Term in7 = P(st, "(R 2 4 (HIDE (!R 0 4 (R 16 4 ST) (!I 123 ST))))");
  Term want7 = P(st, "(HIDE (+ (ASH (R 4 2 ST) 16) (ASH (R 16 4 ST) -16)))");
  auto o7 = eng.memoizable_meta_r(in7, E);
  c.expect(o7.fired, "ex7: did not fire");
  for (int i = 0; i < 1000 && c.ok; ++i) {
    ConcreteState s = testutil::random_state(rng);
    c.expect(eval_value(o7.result, s) == eval_value(want7, s),
             "ex7: mismatch vs expected output");
    c.expect(eval_value(in7, s) == eval_value(o7.result, s),
             "ex7: mismatch vs input");
  }

  // (12): mixed read across five writes with opaque values u,v,w,x,y,
  // instantiated with fresh random constants every trial.
  for (int i = 0; i < 1000 && c.ok; ++i) {
    Term u = st.constant(testutil::random_integer(rng));
    Term v = st.constant(testutil::random_integer(rng));
    Term w = st.constant(testutil::random_integer(rng));
    Term x = st.constant(testutil::random_integer(rng));
    Term y = st.constant(testutil::random_integer(rng));
    Term base = st.state_var();
    Term nest = st.app(
        Op::kWriteR,
        {st.constant(14), st.constant(5), x,
         st.app(Op::kWriteR,
                {st.constant(0), st.constant(4), u,
                 st.app(Op::kWriteR,
                        {st.constant(19), st.constant(8), y,
                         st.app(Op::kWriteR,
                                {st.constant(9), st.constant(2), w,
                                 st.app(Op::kWriteR,
                                        {st.constant(2), st.constant(4), v,
                                         base})})})})});
    Term in12 = st.app(Op::kR, {st.constant(3), st.constant(8),
                                st.app(Op::kHide, {nest})});
    auto o12 = eng.memoizable_meta_r(in12, E);
    c.expect(o12.fired && o12.side_conditions.empty(),
             "ex12: unconditional fire expected");
    // the published little-endian assembly of the same read
    Term want12 = st.app(
        Op::kHide,
        {st.app(
            Op::kAdd,
            {st.app(Op::kAsh, {st.app(Op::kR, {st.constant(6), st.constant(3),
                                               base}),
                               st.constant(24)}),
             st.app(
                 Op::kAdd,
                 {st.app(Op::kMod,
                         {st.app(Op::kAsh, {st.app(Op::kIfix, {u}),
                                            st.constant(-24)}),
                          st.constant(256)}),
                  st.app(
                      Op::kAdd,
                      {st.app(Op::kAsh,
                              {st.app(Op::kMod, {st.app(Op::kIfix, {w}),
                                                 st.constant(65536)}),
                               st.constant(48)}),
                       st.app(Op::kAsh,
                              {st.app(Op::kMod,
                                      {st.app(Op::kAsh,
                                              {st.app(Op::kIfix, {v}),
                                               st.constant(-16)}),
                                       st.constant(65536)}),
                               st.constant(8)})})})})});
    ConcreteState s = testutil::random_state(rng);
    c.expect(eval_value(o12.result, s) == eval_value(want12, s),
             "ex12: mismatch vs expected output");
    c.expect(eval_value(in12, s) == eval_value(o12.result, s),
             "ex12: mismatch vs input");
  }
  c.detail = "examples 7 and 12, 1000 trials each";
  return c.ok;
}

// ---- 3. Interval exactness and latency -------------------------------------

Term build_wide_arith_term(TermStore& st, int pieces) {
  Rng rng(424242);
  std::vector<Term> parts;
  for (int i = 0; i < pieces; ++i) {
    Term x = st.app(Op::kR, {st.constant(4520), st.constant(8),
                             st.state_var()});
    x = st.app(Op::kAsh, {x, st.constant(-(long long)rng(31))});
    x = st.app(Op::kMod, {x, st.constant(1ll << (1 + rng(16)))});
    x = st.app(Op::kLogand,
               {st.constant(static_cast<long long>(rng(1u << 20))), x});
    x = st.app(Op::kMul, {st.constant(static_cast<long long>(1 + rng(16))), x});
    x = st.app(Op::kAdd, {st.constant(static_cast<long long>(rng(1000))), x});
    x = st.app(Op::kAsh, {x, st.constant(static_cast<long long>(rng(5)))});
    parts.push_back(x);
  }
  Term acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    acc = st.app(rng(2) != 0 ? Op::kLogior : Op::kLogxor, {acc, parts[i]});
  }
  return acc;
}

bool ainni_exactness(Checker& c) {
  TermStore st;
  Term t = P(st, "(+ 288 (* 8 (LOGAND 31 (ASH (R 4520 8 ST) -3))))");

  auto t0 = Clock::now();
  InferenceResult r = ainni(st, t, {});
  double dt1 = seconds_since(t0);
  c.expect(r.flag && r.interval->lo == 288 && r.interval->hi == 536,
           "empty-context interval is not [288, 536]");

  Context ctx{{P(st, "(R 4520 8 ST)"), Rel::Lt, Integer(24)}};
  t0 = Clock::now();
  InferenceResult r2 = ainni(st, t, ctx);
  double dt2 = seconds_since(t0);
  c.expect(r2.flag && r2.interval->lo == 288 && r2.interval->hi == 304,
           "refined interval is not [288, 304]");

  Context ctx10{{P(st, "(R 16 4 ST)"), Rel::Le, Integer(15)}};
  InferenceResult span = bound_read_span(
      st, P(st, "(+ 3200 (* 8 (R 16 4 ST)))"), 8, ctx10);
  c.expect(span.flag && span.interval->lo == 3200 &&
               span.interval->hi == 3327,
           "read span is not [3200, 3327]");

  // latency on a wide nest comparable to a machine-generated index term
  Term wide = build_wide_arith_term(st, 24);
  InferenceResult rw = ainni(st, wide, {});  // warm the interning side
  c.expect(rw.flag, "wide term did not flag");
  double best = 1e9;
  for (int i = 0; i < 3; ++i) {
    t0 = Clock::now();
    ainni(st, wide, {});
    best = std::min(best, seconds_since(t0));
  }
  c.expect(dt1 < 0.010 && dt2 < 0.010,
           "flagship inferences exceeded 10 ms");
  c.expect(best < 0.010, "wide-term inference took " + std::to_string(best) +
                             " s (limit 0.010)");
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "[288,536]/[288,304]/[3200,3327]; %zu-node term in %.2f ms",
                static_cast<std::size_t>(wide.tree_size()), best * 1e3);
  c.detail = buf;
  return c.ok;
}

// ---- 4. Differential soundness ---------------------------------------------

bool differential_soundness(Checker& c) {
  const auto t0 = Clock::now();
  std::uint64_t total_vacuous = 0, total_cases = 0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Engine eng;
    FuzzConfig cfg;
    cfg.seed = seed;
    cfg.cases = 10000;
    cfg.mixed = true;
    FuzzReport rep = run_differential_fuzz(eng, cfg);
    c.expect(rep.failed == 0, "seed " + std::to_string(seed) + ": " +
                                  std::to_string(rep.failed) + " failures\n" +
                                  rep.first_counterexample);
    total_vacuous += rep.vacuous;
    total_cases += cfg.cases;
    c.expect(rep.vacuous * 10 < cfg.cases,
             "seed " + std::to_string(seed) + ": vacuous rate not below 10%");
  }
  const double dt = seconds_since(t0);
  c.expect(dt < 60.0, "fuzzing took " + std::to_string(dt) + " s (limit 60)");
  char buf[96];
  std::snprintf(buf, sizeof buf, "30000 cases, 0 failures, %.1f%% vacuous, %.1f s",
                100.0 * total_vacuous / total_cases, dt);
  c.detail = buf;
  return c.ok;
}

// ---- 5. Interval soundness property ----------------------------------------

bool ainni_soundness(Checker& c) {
  const auto t0 = Clock::now();
  TermStore st;
  Rng rng(515151);
  std::uint64_t accepted = 0, attempts = 0;
  while (accepted < 10000 && attempts < 80000) {
    ++attempts;
    Term t = testutil::interval_friendly_term(st, rng, 4);
    std::vector<Term> leaves;
    testutil::collect_reads(t, leaves);
    Context ctx;
    for (const Term& leaf : leaves) {
      if (rng(2) == 0) {
        ctx.push_back({leaf, rng(2) == 0 ? Rel::Le : Rel::Lt,
                       Integer(1 + rng(1u << 12))});
      }
    }
    InferenceResult r = ainni(st, t, ctx);
    if (!r.flag) {
      continue;
    }
    c.expect(r.interval->lo <= r.interval->hi, "lo > hi");
    ConcreteState s = testutil::random_state(rng);
    bool hold = true;
    for (const Hyp& h : r.hyps) {
      hold &= hyp_holds(h, s);
    }
    if (!hold) {
      continue;  // rejection sampling on the hypotheses
    }
    Integer v = eval_value(t, s);
    if (!(r.interval->lo <= v && v <= r.interval->hi)) {
      c.expect(false, "value " + v.str() + " outside [" +
                          r.interval->lo.str() + ", " + r.interval->hi.str() +
                          "] for " + print_term(t));
      break;
    }
    ++accepted;
  }
  c.expect(accepted >= 10000, "only " + std::to_string(accepted) +
                                  " accepted triples");
  const double dt = seconds_since(t0);
  c.expect(dt < 60.0, "took " + std::to_string(dt) + " s (limit 60)");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%llu triples in bounds, %.1f s",
                static_cast<unsigned long long>(accepted), dt);
  c.detail = buf;
  return c.ok;
}

// ---- 6. MOD rule suite -------------------------------------------------------

bool mod_rule_suite(Checker& c) {
  TermStore st;
  Context empty;
  Rng rng(606060);

  struct Case {
    const char* input;
    const char* want;
  };
  const Case cases[] = {
      // rule 1: zero modulus on a syntactic integer
      {"(MOD (R 0 1 ST) 0)", "(R 0 1 ST)"},
      // rule 2: constant folding
      {"(MOD 10 4)", "2"},
      // rule 3: inner modulus at most the outer one
      {"(MOD (MOD (R 0 1 ST) 8) 16)", "(MOD (R 0 1 ST) 8)"},
      // rule 4: outer modulus divides the inner one
      {"(MOD (MOD (R 0 2 ST) 16) 8)", "(MOD (R 0 2 ST) 8)"},
      // rule 5: a read below the modulus
      {"(MOD (R 4 1 ST) 256)", "(R 4 1 ST)"},
      // rule 6: a summand sheds its divisible inner mod
      {"(MOD (+ (R 0 1 ST) (MOD (R 4 4 ST) 16)) 8)",
       "(MOD (+ (R 0 1 ST) (R 4 4 ST)) 8)"},
      // rule 6 then rule 7 on its output
      {"(MOD (+ (LOGAND 7 (R 0 8 ST)) (MOD (LOGAND 15 (R 8 8 ST)) 2048)) "
       "1024)",
       "(+ (LOGAND 7 (R 0 8 ST)) (LOGAND 15 (R 8 8 ST)))"},
      // rule 7: inferred bound discharges the mod
      {"(MOD (+ 288 (* 8 (LOGAND 31 (ASH (R 4520 8 ST) -3)))) 1024)",
       "(+ 288 (* 8 (LOGAND 31 (ASH (R 4520 8 ST) -3))))"},
  };
  for (const Case& k : cases) {
    Term in = P(st, k.input);
    auto out = meta_mod(st, in, empty);
    c.expect(out.fired, std::string(k.input) + ": did not fire");
    c.expect(out.result == P(st, k.want),
             std::string(k.input) + ": got " + print_term(out.result));
    for (int i = 0; i < 50 && c.ok; ++i) {
      ConcreteState s = testutil::random_state(rng);
      bool hold = true;
      for (const Hyp& h : out.side_conditions) {
        hold &= hyp_holds(h, s);
      }
      if (hold) {
        c.expect(eval_value(in, s) == eval_value(out.result, s),
                 std::string(k.input) + ": oracle mismatch");
      }
    }
  }
  c.detail = "8 cases, syntactic and oracle-checked";
  return c.ok;
}

// ---- 7. Fixpoint and shadow-freedom ----------------------------------------

bool fixpoint_shadow_freedom(Checker& c) {
  Engine eng;
  TermStore& st = eng.store();
  auto E = Engine::empty_context();
  Rng rng(707070);
  for (int chain = 0; chain < 1000 && c.ok; ++chain) {
    Term state = st.state_var();
    const std::uint64_t writes = 1 + rng(8);
    for (std::uint64_t w = 0; w < writes; ++w) {
      const long long cnt = 1ll << rng(4);
      Term in = st.app(
          Op::kWriteR,
          {st.constant(static_cast<long long>(rng(5000 - cnt))),
           st.constant(cnt), testutil::oracle_value_term(st, rng, 2), state});
      auto out = eng.memoizable_meta_bang_r(in, E);
      if (out.fired) {
        state = out.result;
      }
    }
    auto nest = decode_state_arg(state);
    if (!nest) {
      continue;  // chain stayed at ST
    }
    for (std::size_t x = 0; x < nest->entries.size() && c.ok; ++x) {
      for (std::size_t y = x + 1; y < nest->entries.size(); ++y) {
        const auto& ex = nest->entries[x];
        const auto& ey = nest->entries[y];
        if (ex.kind == WriteEntry::Kind::Mem &&
            ey.kind == WriteEntry::Kind::Mem && ex.count == ey.count &&
            addresses_equivalent(st, ex.addr, ey.addr)) {
          c.expect(false, "duplicate (address, count) in a produced nest: " +
                              print_term(state));
        }
      }
    }
    c.expect(!eng.simplify(state, E).fired,
             "re-simplifying a produced state fired: " + print_term(state));
    if (!nest->entries.empty() &&
        nest->entries.front().kind == WriteEntry::Kind::Mem) {
      const WriteEntry& top = nest->entries.front();
      WriteNest rest{{nest->entries.begin() + 1, nest->entries.end()}};
      Term again =
          st.app(Op::kWriteR,
                 {top.addr, st.constant(top.count), top.value,
                  st.app(Op::kHide, {encode_state_chain(st, rest)})});
      c.expect(eng.memoizable_meta_bang_r(again, E).result == state,
               "re-issuing the outermost write changed the state");
    }
  }
  c.detail = "1000 chains shadow-free; re-simplification is a no-op";
  return c.ok;
}

// ---- 8. Memoization payoff ---------------------------------------------------

bool memoization_payoff(Checker& c) {
  BenchConfig on;
  on.writes = 1000;
  on.reads = 1000;
  on.memoize = true;
  BenchReport with = run_bench(on);

  BenchConfig off = on;
  off.memoize = false;
  BenchReport without = run_bench(off);

  c.expect(with.pass2_hit_rate() >= 0.90,
           "second-pass hit rate " + std::to_string(with.pass2_hit_rate()));
  c.expect(without.pass2_ms > 0, "unmemoized pass2 measured as zero");
  const double reduction = 1.0 - with.pass2_ms / without.pass2_ms;
  c.expect(reduction >= 0.20,
           "wall-time reduction " + std::to_string(reduction));
  c.expect(with.reparse_new_nodes == 0,
           "re-parsing the state allocated " +
               std::to_string(with.reparse_new_nodes) + " nodes");
  c.expect(without.pass2_hits == 0, "no-memo run reported cache hits");
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "hit rate %.0f%%, pass2 %.2f ms vs %.2f ms (%.0f%% faster), "
                "0 nodes on reparse",
                100.0 * with.pass2_hit_rate(), with.pass2_ms, without.pass2_ms,
                100.0 * reduction);
  c.detail = buf;
  return c.ok;
}

// ---- 9. Deep shadow deletion is observationally sound -----------------------

bool deep_shadow_deletion(Checker& c) {
  Engine eng;
  TermStore& st = eng.store();
  auto E = Engine::empty_context();
  Rng rng(909090);
  for (int i = 0; i < 2000 && c.ok; ++i) {
    const long long n = 1ll << rng(4);
    const long long a = static_cast<long long>(rng(5000 - n));
    Term at = st.constant(a);
    Term nt = st.constant(n);
    Term v1 = st.constant(testutil::random_integer(rng));
    Term v2 = st.constant(testutil::random_integer(rng));

    // 1..3 intervening writes, overlap with [a, a+n) allowed and common
    Term inner = st.app(Op::kWriteR, {at, nt, v2, st.state_var()});
    Term mid = inner;
    const std::uint64_t between = 1 + rng(3);
    for (std::uint64_t b = 0; b < between; ++b) {
      const long long k = 1ll << rng(4);
      const long long baddr = std::max(
          0ll, a - 8 + static_cast<long long>(rng(16)));  // near the target
      Term w = st.constant(testutil::random_integer(rng));
      mid = st.app(Op::kWriteR,
                   {st.constant(std::min(baddr, 5304 - k)), st.constant(k), w,
                    mid});
    }
    Term undeleted = st.app(Op::kHide,
                            {st.app(Op::kWriteR, {at, nt, v1, mid})});
    auto built = eng.memoizable_meta_bang_r(
        st.app(Op::kWriteR, {at, nt, v1, st.app(Op::kHide, {mid})}), E);
    c.expect(built.fired, "write did not fire");
    auto nest = decode_state_arg(built.result);
    c.expect(nest.has_value() && nest->entries.size() == between + 1,
             "shadowed write was not deleted");

    ConcreteState s0 = testutil::random_state(rng);
    ConcreteState su = eval_state(undeleted, s0);
    ConcreteState sd = eval_state(built.result, s0);
    c.expect(su.ictr == sd.ictr && su.status == sd.status,
             "field mismatch after deletion");
    for (int p = 0; p < 64 && c.ok; ++p) {
      const long long len = 1 + static_cast<long long>(rng(8));
      const long long addr = static_cast<long long>(rng(5305 - len));
      c.expect(read_bytes(su, addr, len) == read_bytes(sd, addr, len),
               "memory probe mismatch at " + std::to_string(addr));
    }
  }
  c.detail = "2000 deletions, 64 probes each";
  return c.ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(Checker&);
  };
  const Criterion criteria[] = {
      {"golden examples (syntactic)", golden_syntactic},
      {"golden examples (semantic)", golden_semantic},
      {"interval exactness and latency", ainni_exactness},
      {"differential soundness", differential_soundness},
      {"interval soundness property", ainni_soundness},
      {"MOD rule suite", mod_rule_suite},
      {"fixpoint and shadow-freedom", fixpoint_shadow_freedom},
      {"memoization payoff", memoization_payoff},
      {"deep shadow deletion", deep_shadow_deletion},
  };

  bool all_ok = true;
  int idx = 0;
  for (const Criterion& cr : criteria) {
    ++idx;
    Checker c;
    const auto t0 = Clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = cr.run(c);
    } catch (const std::exception& e) {
      ok = false;
      error = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    char line[512];
    std::snprintf(line, sizeof line, "[%s] %d. %s — %s (%.2f s)",
                  ok ? "PASS" : "FAIL", idx, cr.name,
                  ok ? c.detail.c_str()
                     : (error.empty() ? c.detail.c_str() : error.c_str()),
                  dt);
    std::cout << line << std::endl;
    all_ok &= ok;
  }
  return all_ok ? 0 : 1;
}
