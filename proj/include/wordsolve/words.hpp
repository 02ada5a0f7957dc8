#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wordsolve {

/// Base class for errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when word text does not conform to the grammar. Carries the
/// character offset of the offending token.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// One occurrence of a coefficient symbol. Symbols are opaque free letters;
/// the inverted flag marks a formal inverse.
struct CoefficientRef {
  std::string symbol;
  bool inverted = false;

  bool operator==(const CoefficientRef&) const = default;
};

/// A variable raised to a nonzero power, x_index^exponent. Indices are
/// 1-based.
struct VariablePower {
  int index = 0;
  std::int64_t exponent = 0;

  bool operator==(const VariablePower&) const = default;
};

using Token = std::variant<CoefficientRef, VariablePower>;

namespace detail {

// g . g^-1 cancels; g . g stays (distinct occurrences of a free letter).
inline bool tokens_cancel(const CoefficientRef& a, const CoefficientRef& b) {
  return a.symbol == b.symbol && a.inverted != b.inverted;
}

inline void push_reduced(std::vector<Token>& stack, const Token& t) {
  if (const auto* vp = std::get_if<VariablePower>(&t)) {
    if (vp->exponent == 0) return;
    if (!stack.empty()) {
      if (auto* top = std::get_if<VariablePower>(&stack.back());
          top && top->index == vp->index) {
        top->exponent += vp->exponent;
        if (top->exponent == 0) stack.pop_back();
        return;
      }
    }
    stack.push_back(t);
    return;
  }
  const auto& cr = std::get<CoefficientRef>(t);
  if (!stack.empty()) {
    if (auto* top = std::get_if<CoefficientRef>(&stack.back());
        top && tokens_cancel(*top, cr)) {
      stack.pop_back();
      return;
    }
  }
  stack.push_back(t);
}

inline bool looks_like_variable_name(std::string_view s) {
  if (s.size() < 2 || s[0] != 'x') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace detail

/// A freely reduced element of G * F_n: coefficient symbols interleaved with
/// variable powers. The empty token sequence is the identity.
class Word {
public:
  Word() = default;

  /// Reduce an arbitrary token sequence. Reduction merges adjacent powers of
  /// the same variable, drops zero exponents, and cancels g·g^-1 pairs of the
  /// same symbol.
  static Word reduced(int n, std::vector<Token> tokens) {
    if (n < 0) throw std::invalid_argument("negative variable count");
    Word w;
    w.n_ = n;
    w.tokens_.reserve(tokens.size());
    for (auto& t : tokens) {
      if (const auto* vp = std::get_if<VariablePower>(&t)) {
        if (vp->index < 1 || vp->index > n)
          throw std::invalid_argument("variable index out of range");
      }
      detail::push_reduced(w.tokens_, t);
    }
    return w;
  }

  static Word identity(int n) { return reduced(n, {}); }

  int variable_count() const { return n_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  bool empty() const { return tokens_.empty(); }

  bool operator==(const Word&) const = default;

private:
  int n_ = 0;
  std::vector<Token> tokens_;
};

/// A single letter x_index^exponent of a free-group word.
struct Letter {
  int index = 0;
  std::int64_t exponent = 0;

  bool operator==(const Letter&) const = default;
};

/// A freely reduced element of F_n (the content side: no coefficients).
class ContentWord {
public:
  ContentWord() = default;

  static ContentWord reduced(int n, std::vector<Letter> letters) {
    if (n < 0) throw std::invalid_argument("negative variable count");
    ContentWord c;
    c.n_ = n;
    c.letters_.reserve(letters.size());
    for (const Letter& l : letters) {
      if (l.exponent == 0) continue;
      if (l.index < 1 || l.index > n)
        throw std::invalid_argument("variable index out of range");
      if (!c.letters_.empty() && c.letters_.back().index == l.index) {
        c.letters_.back().exponent += l.exponent;
        if (c.letters_.back().exponent == 0) c.letters_.pop_back();
      } else {
        c.letters_.push_back(l);
      }
    }
    return c;
  }

  static ContentWord identity(int n) { return reduced(n, {}); }

  int variable_count() const { return n_; }
  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }

  bool operator==(const ContentWord&) const = default;

private:
  int n_ = 0;
  std::vector<Letter> letters_;
};

/// Parse whitespace-separated tokens: either a known symbol name or `x<k>`,
/// each optionally followed by `^<signed integer>`. Returns the freely
/// reduced word.
inline Word parse_word(std::string_view text, int n,
                       const std::set<std::string>& known_symbols) {
  if (n < 1) throw std::invalid_argument("variable count must be >= 1");
  for (const std::string& s : known_symbols) {
    if (!detail::is_identifier(s) || detail::looks_like_variable_name(s))
      throw std::invalid_argument("invalid coefficient symbol: " + s);
  }

  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::string_view tok = text.substr(start, i - start);

    std::string_view base = tok;
    std::int64_t exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      base = tok.substr(0, caret);
      std::string_view es = tok.substr(caret + 1);
      const char* first = es.data();
      const char* last = es.data() + es.size();
      if (first != last && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (ec != std::errc{} || ptr != last)
        throw ParseError("malformed exponent in token '" + std::string(tok) + "'",
                         start);
    }
    if (exponent == 0)
      throw ParseError("zero exponent in token '" + std::string(tok) + "'", start);

    if (detail::looks_like_variable_name(base)) {
      int index = 0;
      auto digits = base.substr(1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (ec != std::errc{} || ptr != digits.data() + digits.size())
        throw ParseError("malformed token '" + std::string(tok) + "'", start);
      if (index < 1 || index > n)
        throw ParseError("variable index out of range in '" + std::string(tok) +
                             "' (n = " + std::to_string(n) + ")",
                         start);
      detail::push_reduced(tokens, VariablePower{index, exponent});
    } else if (detail::is_identifier(base)) {
      std::string name(base);
      if (!known_symbols.count(name))
        throw ParseError("unknown symbol '" + name + "'", start);
      CoefficientRef ref{std::move(name), exponent < 0};
      for (std::int64_t k = 0; k < (exponent < 0 ? -exponent : exponent); ++k)
        detail::push_reduced(tokens, ref);
    } else {
      throw ParseError("malformed token '" + std::string(tok) + "'", start);
    }
  }
  return Word::reduced(n, std::move(tokens));
}

inline Word multiply(const Word& u, const Word& v) {
  if (u.variable_count() != v.variable_count())
    throw std::invalid_argument("mismatched variable counts");
  std::vector<Token> tokens = u.tokens();
  tokens.insert(tokens.end(), v.tokens().begin(), v.tokens().end());
  return Word::reduced(u.variable_count(), std::move(tokens));
}

inline Word invert(const Word& u) {
  std::vector<Token> tokens;
  tokens.reserve(u.tokens().size());
  for (auto it = u.tokens().rbegin(); it != u.tokens().rend(); ++it) {
    if (const auto* vp = std::get_if<VariablePower>(&*it)) {
      tokens.push_back(VariablePower{vp->index, -vp->exponent});
    } else {
      const auto& cr = std::get<CoefficientRef>(*it);
      tokens.push_back(CoefficientRef{cr.symbol, !cr.inverted});
    }
  }
  return Word::reduced(u.variable_count(), std::move(tokens));
}

inline ContentWord multiply(const ContentWord& u, const ContentWord& v) {
  if (u.variable_count() != v.variable_count())
    throw std::invalid_argument("mismatched variable counts");
  std::vector<Letter> letters = u.letters();
  letters.insert(letters.end(), v.letters().begin(), v.letters().end());
  return ContentWord::reduced(u.variable_count(), std::move(letters));
}

inline ContentWord invert(const ContentWord& u) {
  std::vector<Letter> letters;
  letters.reserve(u.letters().size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it)
    letters.push_back(Letter{it->index, -it->exponent});
  return ContentWord::reduced(u.variable_count(), std::move(letters));
}

/// The augmentation G * F_n -> F_n: delete all coefficient tokens and reduce.
inline ContentWord content(const Word& w) {
  std::vector<Letter> letters;
  for (const Token& t : w.tokens())
    if (const auto* vp = std::get_if<VariablePower>(&t))
      letters.push_back(Letter{vp->index, vp->exponent});
  return ContentWord::reduced(w.variable_count(), std::move(letters));
}

/// Image in F_n^ab = Z^n: component k-1 is the exponent sum of x_k.
inline std::vector<std::int64_t> exponent_sums(const ContentWord& c) {
  std::vector<std::int64_t> sums(static_cast<std::size_t>(c.variable_count()), 0);
  for (const Letter& l : c.letters())
    sums[static_cast<std::size_t>(l.index - 1)] += l.exponent;
  return sums;
}

/// c_1 = x_1, c_n = [x_n, c_{n-1}], freely reduced in F_n.
inline ContentWord iterated_commutator(int n) {
  if (n < 1) throw std::invalid_argument("iterated_commutator requires n >= 1");
  ContentWord c = ContentWord::reduced(n, {Letter{1, 1}});
  for (int k = 2; k <= n; ++k) {
    ContentWord xk = ContentWord::reduced(n, {Letter{k, 1}});
    c = multiply(multiply(xk, c), multiply(invert(xk), invert(c)));
  }
  return c;
}

struct CommutatorTerm {
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t l = 0;
};

/// Product over k of [x1^{n_k}, x2^{m_k}]^{l_k} in F_2.
inline ContentWord commutator_basis_word(const std::vector<CommutatorTerm>& terms) {
  ContentWord result = ContentWord::identity(2);
  for (const CommutatorTerm& t : terms) {
    if (t.n == 0 || t.m == 0)
      throw std::invalid_argument("commutator_basis_word: zero exponent");
    ContentWord a = ContentWord::reduced(2, {Letter{1, t.n}});
    ContentWord b = ContentWord::reduced(2, {Letter{2, t.m}});
    ContentWord comm = multiply(multiply(a, b), multiply(invert(a), invert(b)));
    ContentWord factor = t.l >= 0 ? comm : invert(comm);
    std::int64_t reps = t.l >= 0 ? t.l : -t.l;
    for (std::int64_t r = 0; r < reps; ++r) result = multiply(result, factor);
  }
  return result;
}

/// Canonical rendering: tokens joined by single spaces, exponent omitted when
/// +1, inverted coefficients rendered like `g1^-1`.
inline std::string render(const Word& w) {
  std::string out;
  for (const Token& t : w.tokens()) {
    if (!out.empty()) out += ' ';
    if (const auto* vp = std::get_if<VariablePower>(&t)) {
      out += 'x';
      out += std::to_string(vp->index);
      if (vp->exponent != 1) {
        out += '^';
        out += std::to_string(vp->exponent);
      }
    } else {
      const auto& cr = std::get<CoefficientRef>(t);
      out += cr.symbol;
      if (cr.inverted) out += "^-1";
    }
  }
  return out;
}

inline std::string render(const ContentWord& c) {
  std::string out;
  for (const Letter& l : c.letters()) {
    if (!out.empty()) out += ' ';
    out += 'x';
    out += std::to_string(l.index);
    if (l.exponent != 1) {
      out += '^';
      out += std::to_string(l.exponent);
    }
  }
  return out;
}

/// View a free-group word as a coefficient-free Word.
inline Word lift(const ContentWord& c) {
  std::vector<Token> tokens;
  tokens.reserve(c.letters().size());
  for (const Letter& l : c.letters()) tokens.push_back(VariablePower{l.index, l.exponent});
  return Word::reduced(c.variable_count(), std::move(tokens));
}

}  // namespace wordsolve
