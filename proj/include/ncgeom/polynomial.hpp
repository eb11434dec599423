#pragma once

// Free (noncommutative) polynomials in d letters with complex coefficients,
// their text format, and evaluation on matrix tuples.
//
// Text format: a sum of terms `coeff*w`, where w is a word over x1..xd,
// e.g. `0.5*x1x2 - 1*x2`. A bare coefficient is the constant term; complex
// coefficients are written `(re+imi)`.

#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ncgeom/core.hpp"

namespace ncgeom {

/// A word over {0..d-1}; the empty word is the identity.
using Word = std::vector<int>;

/// Products X_w for words w, memoized by prefix. One cache serves every
/// polynomial evaluated at the same point.
template <class Real>
class WordCache {
 public:
  explicit WordCache(const MatrixTuple<Real>& x) : x_(&x) {}

  const CMatrix<Real>& product(const Word& w) {
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    if (w.empty()) {
      return cache_.emplace(w, linalg::identity<Real>(x_->level())).first->second;
    }
    Word prefix(w.begin(), w.end() - 1);
    CMatrix<Real> p = product(prefix) * (*x_)[w.back()];
    return cache_.emplace(w, std::move(p)).first->second;
  }

 private:
  const MatrixTuple<Real>* x_;
  std::map<Word, CMatrix<Real>> cache_;
};

template <class Real = double>
class FreePolynomial {
 public:
  static constexpr int max_degree_cap = 12;

  FreePolynomial() = default;
  explicit FreePolynomial(int d) : d_(d) {
    if (d < 1) throw invalid_input("polynomial alphabet size must be positive");
  }

  FreePolynomial(int d, std::map<Word, Complex<Real>> terms) : FreePolynomial(d) {
    for (auto& [w, c] : terms) add_term(w, c);
  }

  static FreePolynomial constant(int d, Complex<Real> c) {
    FreePolynomial p(d);
    p.add_term({}, c);
    return p;
  }

  /// c * x_{j+1} (0-based letter j).
  static FreePolynomial coordinate(int d, int j, Complex<Real> c = Complex<Real>(1)) {
    FreePolynomial p(d);
    p.add_term({j}, c);
    return p;
  }

  void add_term(const Word& w, Complex<Real> c) {
    if (static_cast<int>(w.size()) > max_degree_cap)
      throw invalid_input("polynomial degree exceeds cap " + std::to_string(max_degree_cap));
    for (int letter : w)
      if (letter < 0 || letter >= d_) throw invalid_input("polynomial letter out of range");
    auto& slot = terms_[w];
    slot += c;
    if (slot == Complex<Real>(0)) terms_.erase(w);
  }

  int alphabet() const { return d_; }
  const std::map<Word, Complex<Real>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int deg = 0;
    for (const auto& [w, c] : terms_) deg = std::max(deg, static_cast<int>(w.size()));
    return deg;
  }

  Complex<Real> constant_term() const {
    auto it = terms_.find(Word{});
    return it == terms_.end() ? Complex<Real>(0) : it->second;
  }

  /// Same polynomial over a larger alphabet.
  FreePolynomial widen(int d) const {
    if (d < d_) throw invalid_input("cannot narrow a polynomial alphabet");
    return FreePolynomial(d, terms_);
  }

  CMatrix<Real> evaluate(const MatrixTuple<Real>& x) const {
    WordCache<Real> cache(x);
    return evaluate(x, cache);
  }

  CMatrix<Real> evaluate(const MatrixTuple<Real>& x, WordCache<Real>& cache) const {
    if (x.dim() != d_) throw invalid_input("polynomial alphabet does not match the tuple");
    CMatrix<Real> out = CMatrix<Real>::Zero(x.level(), x.level());
    for (const auto& [w, c] : terms_) out.noalias() += c * cache.product(w);
    return out;
  }

  template <class To>
  FreePolynomial<To> cast() const {
    std::map<Word, Complex<To>> t;
    for (const auto& [w, c] : terms_) t.emplace(w, Complex<To>(To(c.real()), To(c.imag())));
    return FreePolynomial<To>(d_, std::move(t));
  }

  friend bool operator==(const FreePolynomial& a, const FreePolynomial& b) {
    return a.d_ == b.d_ && a.terms_ == b.terms_;
  }

 private:
  int d_ = 1;
  std::map<Word, Complex<Real>> terms_;
};

// ---------------------------------------------------------------------------
// Text format

namespace detail {

template <class Real>
std::string format_number(Real v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class PolyParser {
 public:
  PolyParser(std::string_view text, int d) : s_(text), d_(d) {}

  FreePolynomial<double> parse() {
    FreePolynomial<double> p(d_);
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      double sign = 1.0;
      if (!at_end() && (peek() == '+' || peek() == '-')) {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      auto [coeff, word] = term();
      p.add_term(word, sign * coeff);
      first = false;
      skip_ws();
      if (at_end()) break;
    }
    return p;
  }

 private:
  std::pair<std::complex<double>, Word> term() {
    std::complex<double> coeff(1.0);
    Word word;
    if (!at_end() && peek() == 'x') {
      word = parse_word();
      return {coeff, word};
    }
    coeff = parse_coeff();
    skip_ws();
    if (!at_end() && peek() == '*') {
      ++pos_;
      skip_ws();
      word = parse_word();
      if (word.empty()) fail("expected a word after '*'");
    }
    return {coeff, word};
  }

  std::complex<double> parse_coeff() {
    if (!at_end() && peek() == '(') {
      ++pos_;
      skip_ws();
      double re = number();
      skip_ws();
      std::complex<double> c;
      if (!at_end() && peek() == 'i') {
        ++pos_;
        c = {0.0, re};
      } else if (!at_end() && (peek() == '+' || peek() == '-')) {
        const double sgn = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip_ws();
        double im = number();
        skip_ws();
        expect('i');
        c = {re, sgn * im};
      } else {
        c = {re, 0.0};
      }
      skip_ws();
      expect(')');
      return c;
    }
    double v = number();
    if (!at_end() && peek() == 'i') {
      ++pos_;
      return {0.0, v};
    }
    return {v, 0.0};
  }

  double number() {
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double v = 0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return v;
  }

  Word parse_word() {
    Word w;
    while (!at_end() && peek() == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (start == pos_) fail("expected a letter index after 'x'");
      const int idx = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (idx < 1 || idx > d_) fail("letter x" + std::to_string(idx) + " outside x1..x" + std::to_string(d_));
      w.push_back(idx - 1);
    }
    return w;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw invalid_input("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + why +
                        " in \"" + std::string(s_) + "\"");
  }

  std::string_view s_;
  int d_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse the text format into a polynomial over x1..xd.
inline FreePolynomial<double> parse_polynomial(std::string_view text, int d) {
  return detail::PolyParser(text, d).parse();
}

template <class Real>
std::string to_string(const FreePolynomial<Real>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (c.imag() == 0) {
      const bool neg = std::signbit(c.real());
      if (first) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      out += detail::format_number(neg ? -c.real() : c.real());
    } else {
      if (!first) out += " + ";
      out += "(" + detail::format_number(c.real());
      out += std::signbit(c.imag()) ? "-" : "+";
      out += detail::format_number(std::abs(c.imag())) + "i)";
    }
    if (!w.empty()) {
      out += "*";
      for (int letter : w) out += "x" + std::to_string(letter + 1);
    }
    first = false;
  }
  return out;
}

}  // namespace ncgeom
