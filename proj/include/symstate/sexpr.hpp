#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symstate/term.hpp"

namespace symstate {

// Concrete syntax: term := INT | ST | ( OP term* ).  Operator names and ST
// are case-insensitive on input; output is upper-case, single-space
// separated, constants in decimal.

namespace sexpr_detail {

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  std::optional<std::string_view> next() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos]))) {
      ++pos;
    }
    if (pos >= src.size()) {
      return std::nullopt;
    }
    if (src[pos] == '(' || src[pos] == ')') {
      return src.substr(pos++, 1);
    }
    std::size_t start = pos;
    while (pos < src.size() && src[pos] != '(' && src[pos] != ')' &&
           !std::isspace(static_cast<unsigned char>(src[pos]))) {
      ++pos;
    }
    return src.substr(start, pos - start);
  }
};

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

inline bool is_integer_literal(std::string_view s) {
  std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) {
    return false;
  }
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      return false;
    }
  }
  return true;
}

inline Term parse_one(Lexer& lex, TermStore& store) {
  auto tok = lex.next();
  if (!tok) {
    throw ParseError("unexpected end of input");
  }
  if (*tok == ")") {
    throw ParseError("unbalanced ')'");
  }
  if (*tok == "(") {
    auto head = lex.next();
    if (!head || *head == ")") {
      throw ParseError("empty application");
    }
    if (*head == "(") {
      throw ParseError("operator expected after '('");
    }
    auto op = op_from_name(to_upper(*head));
    if (!op) {
      throw ParseError("unknown operator '" + std::string(*head) + "'");
    }
    std::vector<Term> args;
    for (;;) {
      Lexer probe = lex;
      auto t = probe.next();
      if (!t) {
        throw ParseError("unexpected end of input inside application");
      }
      if (*t == ")") {
        lex = probe;
        break;
      }
      args.push_back(parse_one(lex, store));
    }
    try {
      return store.app(*op, args);
    } catch (const ContractError& e) {
      throw ParseError(e.what());
    }
  }
  if (is_integer_literal(*tok)) {
    return store.constant(Integer(std::string(*tok)));
  }
  if (to_upper(*tok) == "ST") {
    return store.state_var();
  }
  throw ParseError("unknown symbol '" + std::string(*tok) + "'");
}

}  // namespace sexpr_detail

inline Term parse_term(TermStore& store, std::string_view text) {
  sexpr_detail::Lexer lex{text};
  Term t = sexpr_detail::parse_one(lex, store);
  if (lex.next()) {
    throw ParseError("trailing input after term");
  }
  return t;
}

inline void print_term(Term t, std::string& out) {
  switch (t.op()) {
    case Op::kConst:
      out += t.value().str();
      return;
    case Op::kStateVar:
      out += "ST";
      return;
    default: {
      out += '(';
      out += op_info(t.op()).name;
      for (std::size_t i = 0; i < t.arity(); ++i) {
        out += ' ';
        print_term(t.arg(i), out);
      }
      out += ')';
      return;
    }
  }
}

inline std::string print_term(Term t) {
  std::string out;
  print_term(t, out);
  return out;
}

}  // namespace symstate
