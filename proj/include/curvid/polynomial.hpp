#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvid/errors.hpp"
#include "curvid/monomial.hpp"
#include "curvid/rational.hpp"

namespace curvid {

/// Rational linear combination of canonical monomials of one valence and
/// one weight. Terms are kept in canonical-key order and never hold a zero
/// coefficient.
class InvariantPolynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  InvariantPolynomial(Valence valence, int weight) : valence_(valence), weight_(weight) {}

  /// Single-term polynomial coeff * m (m need not be canonical).
  static InvariantPolynomial from_monomial(const Monomial& m, const Rational& coeff = 1) {
    InvariantPolynomial p(m.valence(), m.weight());
    p.add_term(m, coeff);
    return p;
  }

  static InvariantPolynomial one() { return from_monomial(Monomial{}); }

  Valence valence() const { return valence_; }
  int weight() const { return weight_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of the canonical form of m, sign included.
  Rational coefficient(const Monomial& m) const {
    auto [key, sign] = canonicalize(m);
    if (sign == 0) return 0;
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : Rational(sign * it->second);
  }

  /// Adds coeff * m after canonicalizing m.
  void add_term(const Monomial& m, const Rational& coeff) {
    if (m.valence() != valence_ || m.weight() != weight_)
      throw ArithmeticError("term " + to_string(m) + " does not match polynomial valence/weight");
    auto [key, sign] = canonicalize(m);
    if (sign == 0 || curvid::is_zero(coeff)) return;
    accumulate(std::move(key), sign * coeff);
  }

  InvariantPolynomial& operator+=(const InvariantPolynomial& q) {
    check_compatible(q);
    for (const auto& [k, c] : q.terms_) accumulate(k, c);
    return *this;
  }

  InvariantPolynomial& operator-=(const InvariantPolynomial& q) {
    check_compatible(q);
    for (const auto& [k, c] : q.terms_) accumulate(k, -c);
    return *this;
  }

  InvariantPolynomial& operator*=(const Rational& s) {
    if (curvid::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend InvariantPolynomial operator+(InvariantPolynomial p, const InvariantPolynomial& q) { return p += q; }
  friend InvariantPolynomial operator-(InvariantPolynomial p, const InvariantPolynomial& q) { return p -= q; }
  friend InvariantPolynomial operator*(InvariantPolynomial p, const Rational& s) { return p *= s; }
  friend InvariantPolynomial operator*(const Rational& s, InvariantPolynomial p) { return p *= s; }

  friend bool operator==(const InvariantPolynomial& a, const InvariantPolynomial& b) {
    return a.valence_ == b.valence_ && a.weight_ == b.weight_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const InvariantPolynomial& q) const {
    if (q.valence_ != valence_ || q.weight_ != weight_)
      throw ArithmeticError("cannot add polynomials of different valence or weight");
  }

  void accumulate(Monomial key, const Rational& c) {
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (curvid::is_zero(it->second)) terms_.erase(it);
    }
  }

  Valence valence_;
  int weight_;
  Terms terms_;
};

inline InvariantPolynomial poly_add(const InvariantPolynomial& p, const InvariantPolynomial& q) { return p + q; }
inline InvariantPolynomial poly_scale(const InvariantPolynomial& p, const Rational& s) { return p * s; }

/// Juxtaposes two monomials, renaming labels of the second apart.
inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  int shift = 0;
  for (const auto& f : a.factors)
    for (int l : f.labels) shift = std::max(shift, l + 1);
  Monomial out = a;
  for (Factor f : b.factors) {
    for (int& l : f.labels) l += shift;
    out.factors.push_back(std::move(f));
  }
  return out;
}

/// Product of invariants; weights add. At most one operand may be 2-form
/// valued (scalar * sym2 gives sym2).
inline InvariantPolynomial poly_mul(const InvariantPolynomial& p, const InvariantPolynomial& q) {
  if (p.valence() == Valence::sym2 && q.valence() == Valence::sym2)
    throw ArithmeticError("product of two 2-form valued invariants is not a 2-form");
  const Valence v = (p.valence() == Valence::sym2 || q.valence() == Valence::sym2) ? Valence::sym2 : Valence::scalar;
  InvariantPolynomial out(v, p.weight() + q.weight());
  for (const auto& [ka, ca] : p.terms())
    for (const auto& [kb, cb] : q.terms()) out.add_term(monomial_product(ka, kb), ca * cb);
  return out;
}

inline InvariantPolynomial operator*(const InvariantPolynomial& p, const InvariantPolynomial& q) { return poly_mul(p, q); }

/// Number of slots carrying index value k once every contraction label is
/// assigned an explicit index (assignment[label]). Free-pair slots count.
inline int degree_profile(const Monomial& m, int k, const std::vector<int>& assignment) {
  int d = 0;
  for (const auto& f : m.factors)
    for (int l : f.labels) d += assignment.at(static_cast<std::size_t>(l)) == k ? 1 : 0;
  return d;
}

/// Number of distinct contraction labels (labels assumed compact 0..L-1,
/// as produced by canonicalize).
inline int label_count(const Monomial& m) {
  int n = 0;
  for (const auto& f : m.factors)
    for (int l : f.labels) n = std::max(n, l + 1);
  return n;
}

// ---------------------------------------------------------------------------
// Text form: "2 R[a,b,b,a] - 4 R[a,b,c,a] R[d,b,c,d] + 1/2 s2[a,a]".

inline std::string to_string(const InvariantPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : p.terms()) {
    Rational a = abs(c);
    if (first) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    out += a.get_str() + " " + to_string(k);
    first = false;
  }
  return out;
}

/// Parses a signed sum of optionally-coefficiented monomials. Index names are
/// scoped per term. The valence and weight are taken from the first term.
inline InvariantPolynomial parse_polynomial(std::string_view text) {
  std::vector<std::pair<Rational, Monomial>> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  int sign = +1;
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : +1;
      ++pos;
      skip_ws();
    }
    Rational coeff = 1;
    std::size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
    std::string num(text.substr(start, pos - start));
    // A bare "1" is the constant monomial, not a coefficient.
    skip_ws();
    const bool bare_one = num == "1" && (pos >= text.size() || text[pos] == '+' || text[pos] == '-');
    if (!num.empty() && !bare_one) {
      try {
        coeff = Rational(num);
        coeff.canonicalize();
      } catch (const std::exception&) {
        throw ParseError("bad coefficient '" + num + "'");
      }
    } else if (bare_one) {
      pos = start;
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
    if (end == pos && !num.empty() && !bare_one) {
      terms.emplace_back(sign * coeff, Monomial{});
    } else {
      terms.emplace_back(sign * coeff, parse_monomial(text.substr(pos, end - pos)));
    }
    pos = end;
    sign = +1;
    skip_ws();
  }
  if (terms.empty()) throw ParseError("empty polynomial");
  InvariantPolynomial p(terms.front().second.valence(), terms.front().second.weight());
  for (const auto& [c, m] : terms) p.add_term(m, c);
  return p;
}

}  // namespace curvid
