// Command line front end: simplify terms under assumption files, query
// intervals, evaluate against a concrete memory image, run the differential
// fuzzer, and benchmark memoization.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "symstate/symstate.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitContract = 3;
constexpr int kExitBounds = 4;

// An --expr/--context argument names a file, is '-' for stdin, or is the
// text itself.
std::string read_input(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw symstate::ParseError("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SimplifyArgs {
  std::string expr;
  std::string context_file;
  bool trace = false;
};

int cmd_simplify(const SimplifyArgs& a) {
  symstate::Engine eng;
  symstate::Term t = symstate::parse_term(eng.store(), read_input(a.expr));
  symstate::Engine::ContextId ctx = symstate::Engine::empty_context();
  if (!a.context_file.empty()) {
    ctx = eng.intern_context(
        symstate::parse_context(eng.store(), read_file(a.context_file)));
  }
  symstate::SimplifyOutcome out = eng.simplify(t, ctx);
  if (a.trace) {
    std::cerr << ";; trace: input " << symstate::print_term(t) << "\n";
    std::cerr << ";; trace: fired " << (out.fired ? "yes" : "no")
              << ", side conditions " << out.side_conditions.size() << "\n";
  }
  std::cout << symstate::print_term(out.result) << "\n";
  for (const symstate::Hyp& h : out.side_conditions) {
    std::cout << ";; side: " << symstate::render_hyp(h) << "\n";
  }
  return 0;
}

struct IntervalArgs {
  std::string expr;
  std::string context_file;
};

int cmd_interval(const IntervalArgs& a) {
  symstate::TermStore store;
  symstate::Term t = symstate::parse_term(store, read_input(a.expr));
  symstate::Context ctx;
  if (!a.context_file.empty()) {
    ctx = symstate::parse_context(store, read_file(a.context_file));
  }
  symstate::InferenceResult r = symstate::ainni(store, t, ctx);
  if (!r.flag) {
    std::cout << "unbounded\n";
    return 0;
  }
  std::cout << "[" << r.interval->lo << ", " << r.interval->hi << "]\n";
  for (const symstate::Hyp& h : r.hyps) {
    std::cout << ";; hyp: " << symstate::render_hyp(h) << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string expr;
  std::string memory_file;
  std::string ictr;
  std::string status;
};

int cmd_eval(const EvalArgs& a) {
  symstate::TermStore store;
  symstate::Term t = symstate::parse_term(store, read_input(a.expr));
  symstate::ConcreteState s;
  if (!a.memory_file.empty()) {
    s = symstate::load_memory_image(read_file(a.memory_file));
  }
  if (!a.ictr.empty()) {
    s.ictr = symstate::Integer(a.ictr);
  }
  if (!a.status.empty()) {
    s.status = symstate::Integer(a.status);
  }
  if (t.is_state_term()) {
    std::cout << symstate::dump_memory_image(symstate::eval_state(t, s));
  } else {
    std::cout << symstate::eval_value(t, s) << "\n";
  }
  return 0;
}

struct FuzzArgs {
  symstate::FuzzConfig cfg;
  std::string mixed = "on";
};

int cmd_fuzz(const FuzzArgs& a) {
  symstate::FuzzConfig cfg = a.cfg;
  if (a.mixed == "on" || a.mixed == "true" || a.mixed == "1") {
    cfg.mixed = true;
  } else if (a.mixed == "off" || a.mixed == "false" || a.mixed == "0") {
    cfg.mixed = false;
  } else {
    std::cerr << "--mixed expects on|off\n";
    return kExitParse;
  }
  symstate::Engine eng;
  symstate::FuzzReport rep = symstate::run_differential_fuzz(eng, cfg);
  std::cout << rep.to_text();
  return rep.failed == 0 ? 0 : 1;
}

struct BenchArgs {
  symstate::BenchConfig cfg;
  bool no_memo = false;
};

int cmd_bench(const BenchArgs& a) {
  symstate::BenchConfig cfg = a.cfg;
  cfg.memoize = !a.no_memo;
  symstate::BenchReport rep = symstate::run_bench(cfg);
  std::cout << rep.to_text();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic machine-state simplifier"};
  app.require_subcommand(1);

  SimplifyArgs sa;
  auto* simplify = app.add_subcommand(
      "simplify", "simplify a read/write term under optional assumptions");
  simplify->add_option("--expr", sa.expr, "expression (file, '-', or text)")
      ->required();
  simplify->add_option("--context", sa.context_file, "assumption file");
  simplify->add_flag("--trace", sa.trace, "print dispatch details to stderr");

  IntervalArgs ia;
  auto* interval =
      app.add_subcommand("interval", "infer a natural interval for a term");
  interval->add_option("--expr", ia.expr, "expression (file, '-', or text)")
      ->required();
  interval->add_option("--context", ia.context_file, "assumption file");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate against a memory image");
  eval->add_option("--expr", ea.expr, "expression (file, '-', or text)")
      ->required();
  eval->add_option("--memory", ea.memory_file, "memory image file");
  eval->add_option("--i", ea.ictr, "initial instruction counter");
  eval->add_option("--s", ea.status, "initial status value");

  FuzzArgs fa;
  auto* fuzz = app.add_subcommand("fuzz", "differential fuzzing vs the oracle");
  fuzz->add_option("--seed", fa.cfg.seed, "rng seed");
  fuzz->add_option("--cases", fa.cfg.cases, "number of cases");
  fuzz->add_option("--max-writes", fa.cfg.max_writes, "writes per case");
  fuzz->add_option("--mixed", fa.mixed, "allow overlapping reads (on|off)");
  fuzz->add_option("--max-value-depth", fa.cfg.max_value_depth,
                   "value term depth");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "hash-consing/memoization bench");
  bench->add_option("--writes", ba.cfg.writes, "number of writes");
  bench->add_option("--reads", ba.cfg.reads, "number of reads per pass");
  bench->add_option("--seed", ba.cfg.seed, "rng seed");
  bench->add_flag("--no-memo", ba.no_memo, "disable memoization");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simplify->parsed()) {
      return cmd_simplify(sa);
    }
    if (interval->parsed()) {
      return cmd_interval(ia);
    }
    if (eval->parsed()) {
      return cmd_eval(ea);
    }
    if (fuzz->parsed()) {
      return cmd_fuzz(fa);
    }
    if (bench->parsed()) {
      return cmd_bench(ba);
    }
  } catch (const symstate::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const symstate::BoundsError& e) {
    std::cerr << "bounds error: " << e.what() << "\n";
    return kExitBounds;
  } catch (const symstate::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  }
  return 0;
}
