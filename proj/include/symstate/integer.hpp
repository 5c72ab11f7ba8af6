#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symstate {

// All machine values are unbounded signed integers.  Bitwise operators on
// cpp_int follow two's-complement semantics for negative operands, which is
// exactly the convention the evaluator needs.
using Integer = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed textual input (terms, context files, memory images).
struct ParseError : Error {
  using Error::Error;
};
// Violated library contract: bad arity, non-constant byte count, value in a
// state slot, cross-store terms, and the like.
struct ContractError : Error {
  using Error::Error;
};
// Concrete memory access outside [0, mem_size).
struct BoundsError : Error {
  using Error::Error;
};

// Floor division/modulus.  floor_mod(x, 0) = x by convention, so MOD is total.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

inline Integer floor_mod(const Integer& a, const Integer& b) {
  if (b == 0) {
    return a;
  }
  return a - floor_div(a, b) * b;
}

// Shift amounts beyond this would allocate absurd bignums; reject instead.
inline constexpr long kMaxShiftBits = 1 << 20;

// Byte counts beyond this are left unanalyzed by the simplifiers and the
// interval machinery (no machine this models gets near it); the concrete
// evaluator still bounds-checks every access against the actual memory size.
inline constexpr long kMaxReasonedBytes = 65536;

inline Integer pow2(const Integer& n) {
  if (n < 0 || n > kMaxShiftBits) {
    throw ContractError("pow2: exponent out of range: " + n.str());
  }
  return Integer(1) << static_cast<unsigned>(n);
}

inline Integer pow256(const Integer& n) { return pow2(8 * n); }

// ASH: floor(x * 2^c), i.e. an arithmetic shift in either direction.
inline Integer arith_shift(const Integer& x, const Integer& c) {
  if (c >= 0) {
    return x * pow2(c);
  }
  return floor_div(x, pow2(-c));
}

// Number of bits needed to represent a nonnegative value; bit_length(0) = 0.
inline std::size_t bit_length(const Integer& x) {
  if (x == 0) {
    return 0;
  }
  return static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

}  // namespace symstate
