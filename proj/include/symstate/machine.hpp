#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "symstate/term.hpp"

namespace symstate {

inline constexpr std::size_t kDefaultMemSize = 5312;

// The brute-force oracle state: instruction counter, status word, and a
// fixed-size byte memory.  A plain value type; the evaluator is pure.
class ConcreteState {
 public:
  explicit ConcreteState(std::size_t mem_size = kDefaultMemSize)
      : mem(mem_size, 0) {}

  Integer ictr = 0;
  Integer status = 0;
  std::vector<std::uint8_t> mem;

  std::size_t mem_size() const { return mem.size(); }

  friend bool operator==(const ConcreteState&, const ConcreteState&) = default;
};

inline std::size_t checked_base(const ConcreteState& s, const Integer& addr,
                                const Integer& count) {
  if (count < 1) {
    throw BoundsError("byte count must be positive, got " + count.str());
  }
  if (addr < 0 || addr + count > Integer(s.mem_size())) {
    throw BoundsError("memory access out of bounds: address " + addr.str() +
                      ", count " + count.str());
  }
  return static_cast<std::size_t>(addr);
}

// Little-endian: the byte at the lowest address is least significant.
inline Integer read_bytes(const ConcreteState& s, const Integer& addr,
                          const Integer& count) {
  const std::size_t a = checked_base(s, addr, count);
  const auto n = static_cast<std::size_t>(count);
  Integer v = 0;
  for (std::size_t i = n; i-- > 0;) {
    v = (v << 8) + s.mem[a + i];
  }
  return v;
}

inline void write_bytes(ConcreteState& s, const Integer& addr,
                        const Integer& count, Integer v) {
  const std::size_t a = checked_base(s, addr, count);
  const auto n = static_cast<std::size_t>(count);
  for (std::size_t i = 0; i < n; ++i) {
    s.mem[a + i] = static_cast<std::uint8_t>(floor_mod(v, 256));
    v = floor_div(v, 256);
  }
}

inline Integer eval_value(Term t, const ConcreteState& s0);
inline ConcreteState eval_state(Term t, const ConcreteState& s0);

// State expressions coerce to 0 when they appear in a numeric position,
// mirroring an untyped logic where non-numbers are fixed to 0.
inline Integer eval_numeric(Term t, const ConcreteState& s0) {
  if (t.is_state_term()) {
    return 0;
  }
  return eval_value(t, s0);
}

inline Integer eval_value(Term t, const ConcreteState& s0) {
  switch (t.op()) {
    case Op::kConst:
      return t.value();
    case Op::kStateVar:
      return 0;
    case Op::kR: {
      ConcreteState s = eval_state(t.arg(2), s0);
      return read_bytes(s, eval_numeric(t.arg(0), s0), t.arg(1).value());
    }
    case Op::kI:
      return eval_state(t.arg(0), s0).ictr;
    case Op::kS:
      return eval_state(t.arg(0), s0).status;
    case Op::kHide:
    case Op::kIfix:
      return eval_numeric(t.arg(0), s0);
    case Op::kIf:
      return eval_numeric(t.arg(0), s0) != 0 ? eval_numeric(t.arg(1), s0)
                                             : eval_numeric(t.arg(2), s0);
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kMod:
    case Op::kAsh:
    case Op::kLogand:
    case Op::kLogior:
    case Op::kLogxor:
    case Op::kLess: {
      std::vector<Integer> args;
      args.reserve(t.arity());
      for (std::size_t i = 0; i < t.arity(); ++i) {
        args.push_back(eval_numeric(t.arg(i), s0));
      }
      return fold_constant(t.op(), args);
    }
    default:
      throw ContractError("eval_value: state expression where a value was expected");
  }
}

inline ConcreteState eval_state(Term t, const ConcreteState& s0) {
  switch (t.op()) {
    case Op::kStateVar:
      return s0;
    case Op::kHide:
      return eval_state(t.arg(0), s0);
    case Op::kWriteR: {
      ConcreteState s = eval_state(t.arg(3), s0);
      write_bytes(s, eval_numeric(t.arg(0), s0), t.arg(1).value(),
                  eval_numeric(t.arg(2), s0));
      return s;
    }
    case Op::kWriteI: {
      ConcreteState s = eval_state(t.arg(1), s0);
      s.ictr = eval_numeric(t.arg(0), s0);
      return s;
    }
    case Op::kWriteS: {
      ConcreteState s = eval_state(t.arg(1), s0);
      s.status = eval_numeric(t.arg(0), s0);
      return s;
    }
    default:
      throw ContractError("eval_state: value expression where a state was expected");
  }
}

// Memory image text: one entry per line, `ADDR BYTE` in decimal, with
// optional `I N` / `S N` header lines.  Unlisted cells are zero.

namespace image_detail {

inline bool is_naturals(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

inline bool is_integer(std::string_view s) {
  if (!s.empty() && s[0] == '-') {
    return is_naturals(s.substr(1));
  }
  return is_naturals(s);
}

}  // namespace image_detail

inline ConcreteState load_memory_image(std::string_view text,
                                       std::size_t mem_size = kDefaultMemSize) {
  ConcreteState s(mem_size);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::istringstream ls(line);
    std::string key, val, extra;
    if (!(ls >> key)) {
      continue;  // blank line
    }
    if (!(ls >> val) || (ls >> extra)) {
      throw ParseError("memory image line " + std::to_string(lineno) +
                       ": expected 'ADDR BYTE'");
    }
    if (!image_detail::is_integer(val)) {
      throw ParseError("memory image line " + std::to_string(lineno) +
                       ": bad value '" + val + "'");
    }
    Integer v{val};
    if (key == "I") {
      s.ictr = v;
    } else if (key == "S") {
      s.status = v;
    } else if (image_detail::is_naturals(key)) {
      Integer addr{key};
      if (addr >= Integer(mem_size)) {
        throw BoundsError("memory image line " + std::to_string(lineno) +
                          ": address " + key + " out of range");
      }
      if (v < 0 || v > 255) {
        throw ParseError("memory image line " + std::to_string(lineno) +
                         ": byte value out of range");
      }
      s.mem[static_cast<std::size_t>(addr)] = static_cast<std::uint8_t>(v);
    } else {
      throw ParseError("memory image line " + std::to_string(lineno) +
                       ": bad address '" + key + "'");
    }
  }
  return s;
}

inline std::string dump_memory_image(const ConcreteState& s) {
  std::string out;
  if (s.ictr != 0) {
    out += "I " + s.ictr.str() + "\n";
  }
  if (s.status != 0) {
    out += "S " + s.status.str() + "\n";
  }
  for (std::size_t a = 0; a < s.mem_size(); ++a) {
    if (s.mem[a] != 0) {
      out += std::to_string(a) + " " + std::to_string(s.mem[a]) + "\n";
    }
  }
  return out;
}

}  // namespace symstate
