#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvid/errors.hpp"

namespace curvid {

/// Whether an invariant is a scalar or a symmetric 2-form.
enum class Valence { scalar, sym2 };

inline std::string_view to_string(Valence v) { return v == Valence::scalar ? "scalar" : "sym2"; }

inline Valence parse_valence(std::string_view s) {
  if (s == "scalar") return Valence::scalar;
  if (s == "sym2") return Valence::sym2;
  throw ParseError("unknown valence '" + std::string(s) + "'");
}

/// One factor of a contraction monomial.
///
/// A curvature factor R_{ijkl;a...} has four base slots followed by
/// `derivs` ordered covariant-derivative slots. The free-slot marker
/// (derivs == kFreeMarker) is a symmetric two-slot factor standing for the
/// symmetric product e^i o e^j of a 2-form valued invariant; contracting its
/// two slots with each other gives the metric g.
struct Factor {
  static constexpr int kFreeMarker = -1;

  int derivs = 0;
  std::vector<int> labels;

  static Factor curvature(std::vector<int> labels) {
    Factor f{0, std::move(labels)};
    f.derivs = static_cast<int>(f.labels.size()) - 4;
    return f;
  }
  static Factor free_pair(int a, int b) { return Factor{kFreeMarker, {a, b}}; }

  bool is_free_marker() const { return derivs == kFreeMarker; }
  std::size_t slot_count() const { return is_free_marker() ? 2 : 4 + static_cast<std::size_t>(derivs); }
  int weight() const { return is_free_marker() ? 0 : 2 + derivs; }

  // Sort rank: R, R;a, R;ab, ... and the free marker last.
  int kind_rank() const { return is_free_marker() ? 1000 : derivs; }

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Product of curvature factors with every slot contracted in pairs.
///
/// Labels are arbitrary integers; each must occur exactly twice across all
/// slots. A 2-form valued monomial carries exactly one free-pair marker.
struct Monomial {
  std::vector<Factor> factors;

  Monomial() = default;
  explicit Monomial(std::vector<Factor> fs) : factors(std::move(fs)) {}

  Valence valence() const {
    for (const auto& f : factors)
      if (f.is_free_marker()) return Valence::sym2;
    return Valence::scalar;
  }

  int weight() const {
    int w = 0;
    for (const auto& f : factors) w += f.weight();
    return w;
  }

  int curvature_factor_count() const {
    int c = 0;
    for (const auto& f : factors) c += f.is_free_marker() ? 0 : 1;
    return c;
  }

  int max_derivs() const {
    int d = 0;
    for (const auto& f : factors)
      if (!f.is_free_marker()) d = std::max(d, f.derivs);
    return d;
  }

  std::size_t slot_count() const {
    std::size_t s = 0;
    for (const auto& f : factors) s += f.slot_count();
    return s;
  }

  /// Flat code used for ordering canonical keys: kind then labels per factor.
  std::vector<int> encode() const {
    std::vector<int> code;
    code.reserve(slot_count() + factors.size());
    for (const auto& f : factors) {
      code.push_back(f.kind_rank());
      code.insert(code.end(), f.labels.begin(), f.labels.end());
    }
    return code;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors == b.factors; }
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.encode() < b.encode(); }
};

/// Throws StructuralError unless every label occurs exactly twice, factor
/// arities are consistent, and there is at most one free-pair marker.
inline void validate(const Monomial& m) {
  std::map<int, int> count;
  int markers = 0;
  for (const auto& f : m.factors) {
    if (f.is_free_marker()) {
      ++markers;
      if (f.labels.size() != 2) throw StructuralError("free-pair marker must have two slots");
    } else {
      if (f.derivs < 0 || f.labels.size() != 4 + static_cast<std::size_t>(f.derivs))
        throw StructuralError("curvature factor must have 4 base slots plus derivative slots");
    }
    for (int l : f.labels) ++count[l];
  }
  if (markers > 1) throw StructuralError("a monomial may carry at most one free pair");
  for (const auto& [label, c] : count) {
    if (c != 2)
      throw StructuralError("label " + std::to_string(label) + " occurs " + std::to_string(c) +
                            " times; every slot must be paired exactly once");
  }
}

namespace detail {

struct SlotSymmetry {
  std::array<int, 4> perm;  // new slot s takes old slot perm[s]
  int sign;
};

// Mono-term symmetry group of R_{ijkl}: antisymmetry in each pair and
// symmetry under pair exchange.
inline constexpr std::array<SlotSymmetry, 8> kCurvatureSymmetries{{
    {{0, 1, 2, 3}, +1},
    {{1, 0, 2, 3}, -1},
    {{0, 1, 3, 2}, -1},
    {{1, 0, 3, 2}, +1},
    {{2, 3, 0, 1}, +1},
    {{3, 2, 0, 1}, -1},
    {{2, 3, 1, 0}, -1},
    {{3, 2, 1, 0}, +1},
}};

inline constexpr std::array<SlotSymmetry, 2> kFreePairSymmetries{{
    {{0, 1, 2, 3}, +1},
    {{1, 0, 2, 3}, +1},
}};

// Ordered backtracking over factor placements and slot symmetries, keeping
// the lexicographically largest first-occurrence-relabelled code. Branches
// whose prefix is already smaller than the incumbent are cut.
class Canonicalizer {
 public:
  explicit Canonicalizer(const Monomial& m) : src_(m) {
    // Compact labels to 0..L-1 so the relabel table is a flat vector.
    std::map<int, int> compact;
    for (const auto& f : src_.factors)
      for (int l : f.labels) compact.emplace(l, static_cast<int>(compact.size()));
    for (auto& f : src_.factors)
      for (int& l : f.labels) l = compact.at(l);
    label_count_ = static_cast<int>(compact.size());

    std::stable_sort(src_.factors.begin(), src_.factors.end(),
                     [](const Factor& a, const Factor& b) { return a.kind_rank() < b.kind_rank(); });
    used_.assign(src_.factors.size(), false);
    relabel_.assign(static_cast<std::size_t>(label_count_), -1);
    current_.resize(src_.factors.size());
  }

  std::pair<Monomial, int> run() {
    search(0, 0, +1);
    Monomial out;
    out.factors = best_;
    return {out, zero_ ? 0 : best_sign_};
  }

 private:
  // Lexicographic comparison of placed factors 0..pos against the incumbent:
  // -1 smaller, 0 equal, +1 larger.
  int compare_prefix(std::size_t pos) const {
    if (!have_best_) return +1;
    for (std::size_t p = 0; p <= pos; ++p) {
      const auto& a = current_[p].labels;
      const auto& b = best_[p].labels;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : +1;
      }
    }
    return 0;
  }

  void search(std::size_t pos, int next_label, int sign) {
    if (pos == src_.factors.size()) {
      const int cmp = pos == 0 ? (have_best_ ? 0 : +1) : compare_prefix(pos - 1);
      if (cmp > 0) {
        best_ = current_;
        best_sign_ = sign;
        have_best_ = true;
        zero_ = false;
      } else if (cmp == 0 && sign != best_sign_) {
        zero_ = true;
      }
      return;
    }
    const int rank = src_.factors[pos].kind_rank();
    for (std::size_t fi = 0; fi < src_.factors.size(); ++fi) {
      const Factor& f = src_.factors[fi];
      if (used_[fi] || f.kind_rank() != rank) continue;
      used_[fi] = true;
      const bool marker = f.is_free_marker();
      const std::size_t nsym = marker ? kFreePairSymmetries.size() : kCurvatureSymmetries.size();
      for (std::size_t s = 0; s < nsym; ++s) {
        const SlotSymmetry& sym = marker ? kFreePairSymmetries[s] : kCurvatureSymmetries[s];
        Factor placed{f.derivs, f.labels};
        const std::size_t base = marker ? 2 : 4;
        for (std::size_t k = 0; k < base; ++k) placed.labels[k] = f.labels[static_cast<std::size_t>(sym.perm[k])];

        int nl = next_label;
        std::vector<int> fresh;
        for (int& l : placed.labels) {
          auto& r = relabel_[static_cast<std::size_t>(l)];
          if (r < 0) {
            r = nl++;
            fresh.push_back(l);
          }
          l = r;
        }
        current_[pos] = std::move(placed);

        if (compare_prefix(pos) >= 0) search(pos + 1, nl, sign * sym.sign);

        for (int l : fresh) relabel_[static_cast<std::size_t>(l)] = -1;
      }
      used_[fi] = false;
    }
  }

  Monomial src_;
  int label_count_ = 0;
  std::vector<bool> used_;
  std::vector<int> relabel_;
  std::vector<Factor> current_;
  std::vector<Factor> best_;
  int best_sign_ = +1;
  bool have_best_ = false;
  bool zero_ = false;
};

}  // namespace detail

/// Canonical representative of a monomial under relabelling, reordering of
/// factors and the mono-term slot symmetries of R.
///
/// Returns the canonical monomial and the sign relating it to the input
/// (m = sign * key). A sign of 0 means the monomial vanishes identically by
/// those symmetries alone (for example R_{aabc}).
inline std::pair<Monomial, int> canonicalize(const Monomial& m) {
  validate(m);
  return detail::Canonicalizer(m).run();
}

// ---------------------------------------------------------------------------
// Text grammar: R[a,b,c,d;e] R[...] s2[i,j], or "1" for the empty product.

inline std::string label_name(int l) {
  std::string s(1, static_cast<char>('a' + l % 26));
  if (l >= 26) s += std::to_string(l / 26);
  return s;
}

inline std::string to_string(const Monomial& m) {
  if (m.factors.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < m.factors.size(); ++i) {
    const auto& f = m.factors[i];
    if (i) out += ' ';
    out += f.is_free_marker() ? "s2[" : "R[";
    for (std::size_t k = 0; k < f.labels.size(); ++k) {
      if (k) out += (!f.is_free_marker() && k == 4) ? ';' : ',';
      out += label_name(f.labels[k]);
    }
    out += ']';
  }
  return out;
}

namespace detail {

class MonomialParser {
 public:
  explicit MonomialParser(std::string_view text) : text_(text) {}

  Monomial parse_all() {
    Monomial m = parse_product();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return m;
  }

  // Parses factors until something that cannot start a factor.
  Monomial parse_product() {
    Monomial m;
    bool any = false;
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      if (text_.compare(pos_, 3, "s2[") == 0) {
        pos_ += 3;
        auto [base, deriv] = parse_slots();
        if (base.size() != 2 || !deriv.empty()) fail("s2 takes exactly two slots");
        m.factors.push_back(Factor::free_pair(base[0], base[1]));
      } else if (text_.compare(pos_, 2, "R[") == 0) {
        pos_ += 2;
        auto [base, deriv] = parse_slots();
        if (base.size() != 4) fail("R takes four base slots");
        base.insert(base.end(), deriv.begin(), deriv.end());
        m.factors.push_back(Factor::curvature(std::move(base)));
      } else if (text_[pos_] == '1' && !any &&
                 (pos_ + 1 == text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
        ++pos_;
      } else {
        break;
      }
      any = true;
    }
    if (!any) fail("expected a monomial");
    return m;
  }

  std::size_t position() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  int label_id(const std::string& name) {
    auto it = names_.find(name);
    if (it != names_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.emplace(name, id);
    return id;
  }

  std::pair<std::vector<int>, std::vector<int>> parse_slots() {
    std::vector<int> base, deriv;
    bool in_deriv = false;
    for (;;) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      if (start == pos_) fail("expected an index name");
      (in_deriv ? deriv : base).push_back(label_id(std::string(text_.substr(start, pos_ - start))));
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated factor");
      char c = text_[pos_++];
      if (c == ']') break;
      if (c == ';') {
        if (in_deriv) fail("second ';' in factor");
        in_deriv = true;
      } else if (c != ',') {
        fail(std::string("unexpected '") + c + "'");
      }
    }
    return {base, deriv};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, int> names_;
};

}  // namespace detail

/// Parses the text grammar. Index names are arbitrary identifiers; a name
/// used twice is a contraction.
inline Monomial parse_monomial(std::string_view text) {
  Monomial m = detail::MonomialParser(text).parse_all();
  try {
    validate(m);
  } catch (const StructuralError& e) {
    throw StructuralError(std::string(e.what()) + " in '" + std::string(text) + "'");
  }
  return m;
}

}  // namespace curvid
