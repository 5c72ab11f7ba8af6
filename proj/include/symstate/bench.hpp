#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "symstate/engine.hpp"
#include "symstate/sexpr.hpp"

namespace symstate {

// Desk-scale benchmark: build one long write nest, then run the same read
// stream over it twice.  With memoization on, the second pass should be
// nearly free; the intern counters show that re-parsing the final state
// allocates nothing new.
struct BenchConfig {
  std::uint32_t writes = 1000;
  std::uint32_t reads = 1000;
  bool memoize = true;
  std::uint64_t seed = 42;
};

struct BenchReport {
  BenchConfig config;
  double build_ms = 0;
  double pass1_ms = 0;
  double pass2_ms = 0;
  std::uint64_t pass1_hits = 0, pass1_misses = 0;
  std::uint64_t pass2_hits = 0, pass2_misses = 0;
  std::uint64_t meta_r_evals = 0;
  std::uint64_t nodes_created = 0;
  std::uint64_t intern_hits = 0;
  std::uint64_t reparse_new_nodes = 0;
  std::size_t nest_entries = 0;

  double pass2_hit_rate() const {
    const std::uint64_t total = pass2_hits + pass2_misses;
    return total == 0 ? 0.0 : static_cast<double>(pass2_hits) / total;
  }

  std::string to_text() const {
    auto ms = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", v);
      return std::string(buf);
    };
    std::string out;
    out += "writes: " + std::to_string(config.writes) + "\n";
    out += "reads: " + std::to_string(config.reads) + "\n";
    out += std::string("memo: ") + (config.memoize ? "on" : "off") + "\n";
    out += "nest entries: " + std::to_string(nest_entries) + "\n";
    out += "build: " + ms(build_ms) + " ms\n";
    out += "pass1: " + ms(pass1_ms) + " ms (memo hits " +
           std::to_string(pass1_hits) + ", misses " +
           std::to_string(pass1_misses) + ")\n";
    out += "pass2: " + ms(pass2_ms) + " ms (memo hits " +
           std::to_string(pass2_hits) + ", misses " +
           std::to_string(pass2_misses) + ")\n";
    out += "meta-R evaluations: " + std::to_string(meta_r_evals) + "\n";
    out += "intern: " + std::to_string(nodes_created) + " nodes created, " +
           std::to_string(intern_hits) + " hits\n";
    out += "reparse new nodes: " + std::to_string(reparse_new_nodes) + "\n";
    return out;
  }
};

inline BenchReport run_bench(const BenchConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0)
        .count();
  };

  BenchReport rep;
  rep.config = cfg;
  Engine eng(cfg.memoize);
  TermStore& st = eng.store();
  std::mt19937_64 rng(cfg.seed);
  auto rnd = [&](std::uint64_t n) { return n == 0 ? 0 : rng() % n; };

  // 8-byte slots 0..662 keep everything inside the default memory.
  constexpr std::uint64_t kSlots = 663;

  auto t0 = Clock::now();
  Term state_term = st.state_var();
  for (std::uint32_t w = 0; w < cfg.writes; ++w) {
    const std::uint64_t slot = (static_cast<std::uint64_t>(w) * 97) % kSlots;
    Term value;
    switch (w % 3) {
      case 0:
        value = st.constant(Integer(rng()));
        break;
      case 1:
        value = st.app(Op::kAdd,
                       {st.constant(Integer(rnd(1u << 20))),
                        st.app(Op::kR, {st.constant(Integer(8 * rnd(kSlots))),
                                        st.constant(4), st.state_var()})});
        break;
      default:
        value = st.app(
            Op::kLogand,
            {st.constant(Integer((Integer(1) << 48) - 1)),
             st.app(Op::kR, {st.constant(Integer(8 * rnd(kSlots))),
                             st.constant(8), st.state_var()})});
        break;
    }
    Term input = st.app(Op::kWriteR, {st.constant(Integer(8 * slot)),
                                      st.constant(8), value, state_term});
    SimplifyOutcome out =
        eng.memoizable_meta_bang_r(input, Engine::empty_context());
    state_term = out.result;
  }
  rep.build_ms = ms_since(t0);
  if (auto nest = decode_state_arg(state_term)) {
    rep.nest_entries = nest->entries.size();
  }

  // One fixed read stream, replayed identically in both passes.
  std::vector<Term> reads;
  reads.reserve(cfg.reads);
  for (std::uint32_t r = 0; r < cfg.reads; ++r) {
    if (r % 4 == 0) {
      // Unaligned reads exercise the mixed-read assembly.
      const std::uint32_t cnt = 1u << rnd(4);
      reads.push_back(st.app(Op::kR, {st.constant(Integer(rnd(5304 - cnt))),
                                      st.constant(Integer(cnt)), state_term}));
    } else {
      reads.push_back(st.app(Op::kR, {st.constant(Integer(8 * rnd(kSlots))),
                                      st.constant(8), state_term}));
    }
  }

  const auto& stats = eng.stats_meta_r();
  std::uint64_t h0 = stats.hits, m0 = stats.misses;
  t0 = Clock::now();
  for (Term rt : reads) {
    eng.memoizable_meta_r(rt, Engine::empty_context());
  }
  rep.pass1_ms = ms_since(t0);
  rep.pass1_hits = stats.hits - h0;
  rep.pass1_misses = stats.misses - m0;

  h0 = stats.hits;
  m0 = stats.misses;
  t0 = Clock::now();
  for (Term rt : reads) {
    eng.memoizable_meta_r(rt, Engine::empty_context());
  }
  rep.pass2_ms = ms_since(t0);
  rep.pass2_hits = stats.hits - h0;
  rep.pass2_misses = stats.misses - m0;
  rep.meta_r_evals = stats.evals;

  // Unique representation: re-reading the printed state allocates nothing.
  const std::uint64_t nodes_before = st.nodes_created();
  Term reparsed = parse_term(st, print_term(state_term));
  rep.reparse_new_nodes = st.nodes_created() - nodes_before;
  (void)reparsed;

  rep.nodes_created = st.nodes_created();
  rep.intern_hits = st.intern_hits();
  return rep;
}

}  // namespace symstate
