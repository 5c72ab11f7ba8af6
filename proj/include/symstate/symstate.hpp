#pragma once

// Umbrella header for the whole library: hash-consed terms over a byte
// addressed machine state, a concrete evaluator as ground truth, interval
// inference for address arithmetic, and the read/write simplifiers with
// their memoization layer.

#include "symstate/integer.hpp"
#include "symstate/term.hpp"
#include "symstate/sexpr.hpp"
#include "symstate/machine.hpp"
#include "symstate/interval.hpp"
#include "symstate/arith.hpp"
#include "symstate/state.hpp"
#include "symstate/engine.hpp"
#include "symstate/fuzz.hpp"
#include "symstate/bench.hpp"
