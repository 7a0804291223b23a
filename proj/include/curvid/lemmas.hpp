#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvid/enumerate.hpp"
#include "curvid/errors.hpp"
#include "curvid/polynomial.hpp"

namespace curvid {

/// A dimension-specific universal identity 0 = P in its critical dimension.
///
/// When `columns` is non-empty the identity is also pinned as a kernel
/// vector over that spanning set (primitive integers, RREF order).
struct LemmaIdentity {
  std::string id;
  std::string statement;
  int dim = 0;
  InvariantPolynomial polynomial;
  std::vector<Monomial> columns;
  std::vector<long> kernel_vector;
};

namespace detail {

inline LemmaIdentity make_lemma(std::string id, std::string statement, int dim, std::string_view poly,
                                std::vector<std::string_view> columns = {}, std::vector<long> kernel = {}) {
  LemmaIdentity l{std::move(id), std::move(statement), dim, parse_polynomial(poly), {}, std::move(kernel)};
  for (auto c : columns) l.columns.push_back(parse_monomial(c));
  return l;
}

}  // namespace detail

inline const std::vector<LemmaIdentity>& lemma_catalog() {
  static const std::vector<LemmaIdentity> catalog = [] {
    std::vector<LemmaIdentity> v;
    v.push_back(detail::make_lemma("1.2.1", "tau vanishes in dimension 1", 1, "R[i,j,j,i]"));
    v.push_back(detail::make_lemma("1.2.2", "tau^2 - 4|rho|^2 + |R|^2 vanishes in dimension 3", 3,
                                   "R[i,j,j,i] R[k,l,l,k] - 4 R[a,i,j,a] R[b,i,j,b] + R[i,j,k,l] R[i,j,k,l]",
                                   {"R[i,j,j,i] R[k,l,l,k]", "R[a,i,j,a] R[b,i,j,b]", "R[i,j,k,l] R[i,j,k,l]"},
                                   {1, -4, 1}));
    v.push_back(detail::make_lemma(
        "1.2.3", "eight-term cubic identity in dimension 5", 5,
        "R[i,j,j,i] R[k,l,l,k] R[a,b,b,a]"
        " - 12 R[i,j,j,i] R[a,k,l,a] R[b,k,l,b]"
        " + 3 R[a,b,b,a] R[i,j,k,l] R[i,j,k,l]"
        " + 24 R[a,i,j,a] R[b,k,l,b] R[j,l,k,i]"
        " + 16 R[a,i,j,a] R[b,j,k,b] R[c,i,k,c]"
        " - 24 R[a,i,j,a] R[j,k,l,n] R[l,n,i,k]"
        " + 2 R[i,j,k,l] R[k,l,a,n] R[a,n,j,i]"
        " - 8 R[k,a,i,j] R[i,n,k,l] R[j,l,n,a]"));
    v.push_back(detail::make_lemma("1.4.1", "tau g - 2 rho vanishes in dimension 2", 2,
                                   "R[i,j,j,i] s2[k,k] - 2 R[i,j,k,i] s2[j,k]",
                                   {"R[i,j,j,i] s2[k,k]", "R[i,j,k,i] s2[j,k]"}, {1, -2}));
    v.push_back(detail::make_lemma(
        "1.4.2", "quadratic 2-tensor identity in dimension 4", 4,
        "-1/4 R[i,j,j,i] R[k,l,l,k] s2[n,n] + R[i,j,k,i] R[l,j,k,l] s2[n,n] - 1/4 R[i,j,k,l] R[i,j,k,l] s2[n,n]"
        " + R[k,l,n,i] R[k,l,n,j] s2[i,j] - 2 R[k,n,i,k] R[l,n,j,l] s2[i,j]"
        " - 2 R[i,k,l,j] R[n,k,l,n] s2[i,j] + R[k,l,l,k] R[n,i,j,n] s2[i,j]"));
    return v;
  }();
  return catalog;
}

inline const LemmaIdentity& find_lemma(std::string_view id) {
  for (const auto& l : lemma_catalog())
    if (l.id == id) return l;
  throw DomainError("unknown lemma '" + std::string(id) + "'");
}

}  // namespace curvid
