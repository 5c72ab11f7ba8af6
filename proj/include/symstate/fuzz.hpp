#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "symstate/engine.hpp"
#include "symstate/machine.hpp"
#include "symstate/sexpr.hpp"

namespace symstate {

// Differential fuzzing: build random write nests through the metafunctions,
// read them back symbolically, and let the concrete machine arbitrate.  A
// case passes when every fired simplification evaluates to the same result
// as its input on a random state satisfying the side conditions; when the
// conditions come out false the comparison proves nothing and the case is
// counted as vacuous instead.
struct FuzzConfig {
  std::uint64_t seed = 1;
  std::uint64_t cases = 100;
  std::uint32_t max_writes = 8;
  bool mixed = true;  // allow reads that straddle or partially overlap writes
  std::uint32_t max_value_depth = 3;
};

struct FuzzReport {
  FuzzConfig config;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t vacuous = 0;
  std::uint64_t fired_reads = 0;
  std::uint64_t no_fire_reads = 0;
  std::string first_counterexample;

  std::string to_text() const {
    std::string out = std::to_string(passed) + " passed, " +
                      std::to_string(failed) + " failed\n";
    out += "vacuous: " + std::to_string(vacuous) + "\n";
    out += "reads fired: " + std::to_string(fired_reads) +
           ", unresolved: " + std::to_string(no_fire_reads) + "\n";
    if (!first_counterexample.empty()) {
      out += "counterexample:\n" + first_counterexample;
    }
    return out;
  }
};

namespace fuzz_detail {

// Const writes live in [0, 2800); the symbolic family lives in
// [3000, 3700); [4000, 5304] is never written, so reads there are always
// resolvable as misses.
inline constexpr std::uint32_t kConstRegion = 2800;
inline constexpr std::uint32_t kSymBase = 3000;
inline constexpr std::uint32_t kFreeRegion = 4000;

struct CaseGen {
  Engine& eng;
  const FuzzConfig& cfg;
  std::mt19937_64& rng;

  std::uint64_t rnd(std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

  Term gen_value(std::uint32_t depth) {
    TermStore& st = eng.store();
    if (depth == 0 || rnd(3) == 0) {
      switch (rnd(6)) {
        case 0: return st.constant(Integer(rnd(256)));
        case 1: return st.constant(Integer(rng()) * Integer(rng()));
        case 2: return st.constant(-Integer(rnd(2) ? rng() : rnd(1000)) - 1);
        case 3: {
          std::uint32_t cnt = 1u << rnd(4);
          std::uint64_t a = rnd(kConstRegion - cnt + 1);
          return st.app(Op::kR, {st.constant(Integer(a)),
                                 st.constant(Integer(cnt)), st.state_var()});
        }
        case 4: return st.app(Op::kI, {st.state_var()});
        default: return st.app(Op::kS, {st.state_var()});
      }
    }
    switch (rnd(10)) {
      case 0: return st.app(Op::kAdd, {gen_value(depth - 1), gen_value(depth - 1)});
      case 1: return st.app(Op::kSub, {gen_value(depth - 1), gen_value(depth - 1)});
      case 2: return st.app(Op::kMul, {gen_value(depth - 1), gen_value(depth - 1)});
      case 3: return st.app(Op::kLogand, {gen_value(depth - 1), gen_value(depth - 1)});
      case 4: return st.app(Op::kLogior, {gen_value(depth - 1), gen_value(depth - 1)});
      case 5: return st.app(Op::kLogxor, {gen_value(depth - 1), gen_value(depth - 1)});
      case 6:
        return st.app(Op::kAsh, {gen_value(depth - 1),
                                 st.constant(Integer(rnd(33)) - 16)});
      case 7:
        return st.app(Op::kMod, {gen_value(depth - 1),
                                 st.constant(Integer(rnd(1u << 17)))});
      case 8: return st.app(Op::kIfix, {gen_value(depth - 1)});
      default: return st.app(Op::kHide, {gen_value(depth - 1)});
    }
  }
};

}  // namespace fuzz_detail

template <typename RecordFailure>
inline void check_read(Engine& eng, Term read_term, Engine::ContextId ctx_id,
                       const ConcreteState& s0, std::uint64_t case_idx,
                       FuzzReport& rep, bool& case_failed, bool& case_vacuous,
                       RecordFailure&& record_failure) {
  SimplifyOutcome out = eng.memoizable_meta_r(read_term, ctx_id);
  if (!out.fired) {
    ++rep.no_fire_reads;
    if (out.result != read_term) {
      record_failure(case_idx, "no-fire returned a different term", read_term,
                     out.result);
      case_failed = true;
    }
    return;
  }
  ++rep.fired_reads;
  bool conds_hold = true;
  for (const Hyp& h : out.side_conditions) {
    conds_hold &= hyp_holds(h, s0);
  }
  if (!conds_hold) {
    case_vacuous = true;
    return;
  }
  if (eval_value(read_term, s0) != eval_value(out.result, s0)) {
    record_failure(case_idx, "read simplification changed the value",
                   read_term, out.result);
    case_failed = true;
  }
}

inline FuzzReport run_differential_fuzz(Engine& eng, const FuzzConfig& cfg) {
  using fuzz_detail::kConstRegion;
  using fuzz_detail::kFreeRegion;
  using fuzz_detail::kSymBase;

  if (cfg.cases < 1 || cfg.max_writes < 1) {
    throw ContractError("fuzz config requires cases >= 1 and max_writes >= 1");
  }
  FuzzReport rep;
  rep.config = cfg;
  std::mt19937_64 rng(cfg.seed);
  fuzz_detail::CaseGen gen{eng, cfg, rng};
  TermStore& st = eng.store();
  Term state_var = st.state_var();

  auto record_failure = [&](std::uint64_t case_idx, const std::string& what,
                            Term input, Term output) {
    ++rep.failed;
    if (rep.first_counterexample.empty()) {
      rep.first_counterexample = "seed " + std::to_string(cfg.seed) +
                                 ", case " + std::to_string(case_idx) + ": " +
                                 what + "\n  input:  " + print_term(input) +
                                 "\n  output: " + print_term(output) + "\n";
    }
  };

  for (std::uint64_t case_idx = 0; case_idx < cfg.cases; ++case_idx) {
    // Random concrete state.
    ConcreteState s0;
    const std::uint64_t fills = 16 + gen.rnd(49);
    for (std::uint64_t j = 0; j < fills; ++j) {
      s0.mem[gen.rnd(s0.mem_size())] =
          static_cast<std::uint8_t>(gen.rnd(256));
    }
    s0.ictr = Integer(gen.rnd(1u << 16));
    s0.status = Integer(gen.rnd(1u << 20)) - (1 << 19);

    // Symbolic index cell: (R r 4 ST) <= B.  The assumption is derived from
    // the generated state, so it holds; long runs mix in a small share of
    // deliberately false assumptions (after a clean first batch) to keep the
    // vacuity accounting exercised.
    const std::uint64_t r_cell = 16 + 8 * gen.rnd(4);
    static constexpr std::uint32_t kBounds[3] = {7, 15, 31};
    const std::uint32_t index_bound = kBounds[gen.rnd(3)];
    const bool engineered_vacuous = gen.rnd(100) < 2 && case_idx >= 128;
    const std::uint64_t index_value = engineered_vacuous
                                          ? index_bound + 1 + gen.rnd(8)
                                          : gen.rnd(index_bound + 1);
    for (std::size_t b = 0; b < 4; ++b) {
      s0.mem[r_cell + b] =
          static_cast<std::uint8_t>((index_value >> (8 * b)) & 0xFF);
    }
    Term index_read =
        st.app(Op::kR, {st.constant(Integer(r_cell)), st.constant(4),
                        state_var});
    Context ctx{{index_read, Rel::Le, Integer(index_bound)}};
    const Engine::ContextId ctx_id = eng.intern_context(ctx);
    Term index_scaled = st.app(Op::kMul, {st.constant(8), index_read});
    auto sym_addr_at = [&](std::int64_t base) {
      return st.app(Op::kAdd, {st.constant(Integer(base)), index_scaled});
    };
    auto sym_addr = [&](std::uint64_t family) {
      return sym_addr_at(static_cast<std::int64_t>(kSymBase + 8 * family));
    };

    bool case_failed = false;
    bool case_vacuous = false;

    struct RecordedWrite {
      bool symbolic;
      std::uint64_t addr_or_family;
      std::uint32_t count;
    };
    std::vector<RecordedWrite> mem_writes;

    // Build the nest through the metafunctions, checking each step against
    // the machine.
    Term state_term = state_var;
    const std::uint64_t n_writes = 1 + gen.rnd(cfg.max_writes);
    for (std::uint64_t w = 0; w < n_writes && !case_failed; ++w) {
      const std::uint64_t kind = gen.rnd(10);
      Term input;
      SimplifyOutcome out;
      if (kind == 0) {
        input = st.app(Op::kWriteI,
                       {gen.gen_value(cfg.max_value_depth), state_term});
        out = eng.run_meta_bang_i(input);
      } else if (kind == 1) {
        input = st.app(Op::kWriteS,
                       {gen.gen_value(cfg.max_value_depth), state_term});
        out = eng.run_meta_bang_s(input);
      } else {
        const std::uint32_t cnt = 1u << gen.rnd(4);
        Term addr_term;
        RecordedWrite rec{};
        rec.count = cnt;
        if (gen.rnd(10) < 3) {
          rec.symbolic = true;
          rec.addr_or_family = gen.rnd(32);
          addr_term = sym_addr(rec.addr_or_family);
        } else {
          rec.symbolic = false;
          rec.addr_or_family = gen.rnd(kConstRegion - cnt + 1);
          addr_term = st.constant(Integer(rec.addr_or_family));
        }
        mem_writes.push_back(rec);
        input = st.app(Op::kWriteR,
                       {addr_term, st.constant(Integer(cnt)),
                        gen.gen_value(cfg.max_value_depth), state_term});
        out = eng.memoizable_meta_bang_r(input, ctx_id);
      }
      if (!out.fired) {
        record_failure(case_idx, "write simplification refused to fire",
                       input, out.result);
        case_failed = true;
        break;
      }
      if (!(eval_state(input, s0) == eval_state(out.result, s0))) {
        record_failure(case_idx, "write simplification changed the state",
                       input, out.result);
        case_failed = true;
        break;
      }
      state_term = out.result;
    }

    std::vector<std::size_t> sym_writes;
    for (std::size_t wi = 0; wi < mem_writes.size(); ++wi) {
      if (mem_writes[wi].symbolic) {
        sym_writes.push_back(wi);
      }
    }

    // Random reads against the final nest.
    const std::uint64_t n_reads = 1 + gen.rnd(3);
    for (std::uint64_t r = 0; r < n_reads && !case_failed; ++r) {
      const std::uint32_t cnt = 1u << gen.rnd(4);
      Term addr_term;
      if (cfg.mixed) {
        switch (gen.rnd(7)) {
          case 0:  // exact replay of a recorded write span
            if (!mem_writes.empty()) {
              const auto& rec = mem_writes[gen.rnd(mem_writes.size())];
              Term a = rec.symbolic
                           ? sym_addr(rec.addr_or_family)
                           : st.constant(Integer(rec.addr_or_family));
              Term rt = st.app(Op::kR, {a, st.constant(Integer(rec.count)),
                                        state_term});
              check_read(eng, rt, ctx_id, s0, case_idx, rep, case_failed,
                         case_vacuous, record_failure);
              continue;
            }
            [[fallthrough]];
          case 1:  // anywhere in the written const region
            addr_term = st.constant(Integer(gen.rnd(kConstRegion + 16 - cnt)));
            break;
          case 2:  // never-written region: always a clean miss
            addr_term = st.constant(
                Integer(kFreeRegion + gen.rnd(s0.mem_size() - kFreeRegion - cnt + 1)));
            break;
          case 3:  // symbolic, same family arithmetic as the writes
            addr_term = sym_addr(gen.rnd(32));
            break;
          case 4:  // const read inside the symbolic family's span:
                   // usually undecidable against symbolic writes
            addr_term = st.constant(Integer(kSymBase + gen.rnd(600)));
            break;
          case 5:  // const read abutting a symbolic write's span boundary,
                   // one byte on either side of disjointness
            if (!sym_writes.empty()) {
              const auto& rec = mem_writes[sym_writes[gen.rnd(sym_writes.size())]];
              const std::int64_t span_lo =
                  static_cast<std::int64_t>(kSymBase + 8 * rec.addr_or_family);
              const std::int64_t span_hi =
                  span_lo + 8 * index_bound + rec.count - 1;
              const std::int64_t off = static_cast<std::int64_t>(gen.rnd(2));
              const std::int64_t a =
                  gen.rnd(2) == 0 ? span_lo - static_cast<std::int64_t>(cnt) + off
                                  : span_hi + 1 - off;
              addr_term = st.constant(Integer(a));
              break;
            }
            [[fallthrough]];
          default:  // symbolic read misaligned against the write families
            if (!sym_writes.empty()) {
              const auto& rec = mem_writes[sym_writes[gen.rnd(sym_writes.size())]];
              const std::int64_t jitter = static_cast<std::int64_t>(gen.rnd(7)) - 3;
              addr_term = sym_addr_at(
                  static_cast<std::int64_t>(kSymBase + 8 * rec.addr_or_family) +
                  jitter);
            } else {
              addr_term = st.constant(Integer(gen.rnd(kConstRegion + 16 - cnt)));
            }
            break;
        }
      } else {
        // Unmixed mode: reads either replay a write exactly or miss
        // everything from the reserved region.
        if (!mem_writes.empty() && gen.rnd(2) == 0) {
          const auto& rec = mem_writes[gen.rnd(mem_writes.size())];
          Term a = rec.symbolic ? sym_addr(rec.addr_or_family)
                                : st.constant(Integer(rec.addr_or_family));
          Term rt = st.app(Op::kR, {a, st.constant(Integer(rec.count)),
                                    state_term});
          check_read(eng, rt, ctx_id, s0, case_idx, rep, case_failed,
                     case_vacuous, record_failure);
          continue;
        }
        addr_term = st.constant(
            Integer(kFreeRegion + gen.rnd(s0.mem_size() - kFreeRegion - cnt + 1)));
      }
      Term rt = st.app(Op::kR, {addr_term, st.constant(Integer(cnt)),
                                state_term});
      check_read(eng, rt, ctx_id, s0, case_idx, rep, case_failed,
                 case_vacuous, record_failure);
    }

    if (case_failed) {
      continue;  // already counted
    }
    if (case_vacuous) {
      ++rep.vacuous;
    } else {
      ++rep.passed;
    }
  }
  return rep;
}

}  // namespace symstate
