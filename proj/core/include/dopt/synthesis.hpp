#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dopt/certify.hpp"
#include "dopt/stability.hpp"
#include "dopt/tfmatrix.hpp"

namespace dopt {

// H = G_con [G_opt 0; 0 I_m]. The converse-theorem side conditions are
// not enforced here; the certifier checks them separately.
template <class K>
PartitionedMatrix<K> compose(const RationalFunction<K>& g_opt,
                             const PartitionedMatrix<K>& g_con,
                             std::string label = {}) {
  g_con.validate();
  PartitionedMatrix<K> H(g_con.m, std::move(label));
  H.b11 = g_con.b11 * g_opt;
  H.b12 = g_con.b12;
  H.b21 = RfMatrix<K>(g_con.m, 1);
  for (int i = 0; i < g_con.m; ++i) H.b21(i, 0) = g_con.b21(i, 0) * g_opt;
  H.b22 = g_con.b22;
  return H;
}

// Cascade of two estimators sharing the gradient channel: inputs
// (u, v1, v2), outputs (y, z1, z2).
template <class K>
PartitionedMatrix<K> compose_factors(const PartitionedMatrix<K>& g1,
                                     const PartitionedMatrix<K>& g2,
                                     std::string label = {}) {
  g1.validate();
  g2.validate();
  const int m1 = g1.m, m2 = g2.m;
  PartitionedMatrix<K> G(m1 + m2, std::move(label));
  G.b11 = g1.b11 * g2.b11;
  for (int j = 0; j < m1; ++j) G.b12(0, j) = g1.b12(0, j);
  for (int j = 0; j < m2; ++j) G.b12(0, m1 + j) = g1.b11 * g2.b12(0, j);
  for (int i = 0; i < m1; ++i) G.b21(i, 0) = g1.b21(i, 0) * g2.b11;
  for (int i = 0; i < m2; ++i) G.b21(m1 + i, 0) = g2.b21(i, 0);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m1; ++j) G.b22(i, j) = g1.b22(i, j);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j) G.b22(i, m1 + j) = g1.b21(i, 0) * g2.b12(0, j);
  for (int i = 0; i < m2; ++i)
    for (int j = 0; j < m2; ++j) G.b22(m1 + i, m1 + j) = g2.b22(i, j);
  return G;
}

template <class K>
struct Decomposition {
  RationalFunction<K> g_opt;
  PartitionedMatrix<K> g_con;
  RationalFunction<K> phi;  // all-pass correction, 1 when H11 minimum-phase
  int p = 0;
  int q = 0;
  std::optional<RfMatrix<K>> f_applied;
};

// Universal decomposition: G_opt = z^p Phi H11 and
//   G_con = [ z^{-p} Phi^{-1}        z^q H12
//             z^{-p-q} H21 H11^{-1} Phi^{-1}   H22 ].
// p is the relative degree of H11 reduced by one when H11 is strictly
// proper (which keeps G_opt strictly proper); q is the minimal entrywise
// relative degree of H12.
template <class K>
Decomposition<K> decompose(const PartitionedMatrix<K>& H) {
  H.validate();
  if (H.b11.is_zero())
    throw RefusalError(
        "decompose refused: H11 is identically zero, so H cannot have a pole "
        "of H_0 at z=1");
  if (!H.b11.is_proper())
    throw ImproperError("decompose: H11 is improper");

  AllpassResult<K> ap = allpass_correction(H.b11);  // refuses circle zeros

  const int rel = H.b11.relative_degree();
  const int p = rel >= 1 ? rel - 1 : 0;

  int q = RationalFunction<K>::kInfiniteRelDegree;
  for (int j = 0; j < H.m; ++j)
    if (!H.b12(0, j).is_zero())
      q = std::min(q, H.b12(0, j).relative_degree());
  if (q == RationalFunction<K>::kInfiniteRelDegree) q = 0;

  Decomposition<K> d;
  d.p = p;
  d.q = q;
  d.phi = ap.phi;
  d.g_opt = RationalFunction<K>::z_power(p) * ap.corrected;

  RationalFunction<K> phi_inv = ap.phi.inverse();
  RationalFunction<K> zp_inv = RationalFunction<K>::z_power(-p);
  RationalFunction<K> zq = RationalFunction<K>::z_power(q);
  RationalFunction<K> h11_inv = H.b11.inverse();

  PartitionedMatrix<K> g_con(H.m, H.label.empty() ? "" : H.label + "_estimator");
  g_con.b11 = zp_inv * phi_inv;
  for (int j = 0; j < H.m; ++j) g_con.b12(0, j) = zq * H.b12(0, j);
  RationalFunction<K> scale =
      RationalFunction<K>::z_power(-p - q) * h11_inv * phi_inv;
  for (int i = 0; i < H.m; ++i) g_con.b21(i, 0) = scale * H.b21(i, 0);
  g_con.b22 = H.b22;

  if (!g_con.b11.is_proper() || !g_con.b21(0, 0).is_proper())
    throw Error("decompose produced an improper estimator entry");
  for (int i = 0; i < H.m; ++i) {
    if (!g_con.b21(i, 0).is_proper())
      throw Error("decompose produced an improper estimator entry (b21 row " +
                  std::to_string(i) + ")");
    if (!g_con.b12(0, i).is_proper())
      throw Error("decompose produced an improper estimator entry (b12 col " +
                  std::to_string(i) + ")");
  }
  d.g_con = std::move(g_con);
  return d;
}

template <class K>
struct Factoring {
  PartitionedMatrix<K> g_con1;
  PartitionedMatrix<K> g_con2;
  int m1 = 1;
  int m2 = 1;
  Certificate cert1;  // order-1 estimator certificates for the factors
  Certificate cert2;
};

struct FactorFailure {
  std::string reason;
  std::string residual;  // nonzero determinant/block, when applicable
};

template <class K>
using FactorResult = std::variant<Factoring<K>, FactorFailure>;

namespace detail {

template <class K>
std::string rf_brief(const RationalFunction<K>& r) {
  std::ostringstream os;
  os << "num deg " << r.num().degree() << ", den deg " << r.den().degree();
  return os.str();
}

}  // namespace detail

// Factors a second-order estimator into two first-order estimators over
// the channel split (m1, m2), normalized with G_con1^{11} = G_con2^{11}
// = 1. Requires the zero lower-left cross block and the rank-1 condition
// on [[G11, G13], [G21, G23]].
template <class K>
FactorResult<K> try_factor(const PartitionedMatrix<K>& G, int m1, int m2,
                           const std::optional<RfMatrix<K>>& F = std::nullopt,
                           const Rational& radius = default_lambda_radius()) {
  G.validate();
  if (m1 < 1 || m2 < 1 || m1 + m2 != G.m)
    return FactorFailure{"channel split (" + std::to_string(m1) + "," +
                             std::to_string(m2) + ") is not a positive split of m=" +
                             std::to_string(G.m),
                         ""};
  PartitionedMatrix<K> T = F ? f_transform(G, *F) : G;

  if (!(T.b11 == RationalFunction<K>::one()))
    return FactorFailure{"G11 is not unity; the paper's normalization "
                         "G_con1^11 = G_con2^11 = 1 does not apply",
                         detail::rf_brief(T.b11)};
  for (int i = 0; i < m2; ++i)
    for (int j = 0; j < m1; ++j)
      if (!T.b22(m1 + i, j).is_zero())
        return FactorFailure{"cross block G32 is nonzero",
                             detail::rf_brief(T.b22(m1 + i, j))};
  // rank-1 condition: with G11 = 1 it reduces to G23 = G21 * G13.
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j) {
      RationalFunction<K> resid =
          T.b11 * T.b22(i, m1 + j) - T.b12(0, m1 + j) * T.b21(i, 0);
      if (!resid.is_zero())
        return FactorFailure{"determinant condition G11*G23 - G13*G21 != 0",
                             detail::rf_brief(resid)};
    }

  Factoring<K> f;
  f.m1 = m1;
  f.m2 = m2;
  f.g_con1 = PartitionedMatrix<K>(m1, "factor1");
  f.g_con1.b11 = RationalFunction<K>::one();
  for (int j = 0; j < m1; ++j) f.g_con1.b12(0, j) = T.b12(0, j);
  for (int i = 0; i < m1; ++i) f.g_con1.b21(i, 0) = T.b21(i, 0);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m1; ++j) f.g_con1.b22(i, j) = T.b22(i, j);
  f.g_con2 = PartitionedMatrix<K>(m2, "factor2");
  f.g_con2.b11 = RationalFunction<K>::one();
  for (int j = 0; j < m2; ++j) f.g_con2.b12(0, j) = T.b12(0, m1 + j);
  for (int i = 0; i < m2; ++i) f.g_con2.b21(i, 0) = T.b21(m1 + i, 0);
  for (int i = 0; i < m2; ++i)
    for (int j = 0; j < m2; ++j) f.g_con2.b22(i, j) = T.b22(m1 + i, m1 + j);

  f.cert1 = check_consensus_estimator(f.g_con1, 1, radius, false, "factor1");
  f.cert2 = check_consensus_estimator(f.g_con2, 1, radius, false, "factor2");
  if (!f.cert1.passed() || !f.cert2.passed())
    return FactorFailure{"structural factoring succeeded but a factor fails "
                         "the order-1 estimator certificate",
                         ""};
  return f;
}

// Finite heuristic family of diagonal gauge transforms, covering every
// transform used for the catalog: entries +/- c z^k / (z-1)^j with
// k in {-1,0,1}, j in {0,1}, c in {1, alpha, 1/alpha}.
template <class K>
std::vector<RationalFunction<K>> default_f_entries(const K& alpha) {
  std::vector<RationalFunction<K>> entries;
  std::vector<K> consts{K(1)};
  if (!(alpha == K(1))) {
    consts.push_back(alpha);
    consts.push_back(K(1) / alpha);
  }
  Polynomial<K> zm1({K(-1), K(1)});
  for (int sign : {+1, -1})
    for (int k : {-1, 0, 1})
      for (int j : {0, 1})
        for (const K& c : consts) {
          RationalFunction<K> e =
              RationalFunction<K>::constant(sign > 0 ? c : -c) *
              RationalFunction<K>::z_power(k);
          for (int t = 0; t < j; ++t)
            e = e / RationalFunction<K>(zm1, Polynomial<K>::one());
          if (std::find(entries.begin(), entries.end(), e) == entries.end())
            entries.push_back(e);
        }
  return entries;
}

template <class K>
struct TransformSearchResult {
  RfMatrix<K> f;
  Factoring<K> factoring;
};

// Searches the diagonal F family for a gauge in which the estimator
// factors. A nullopt result means the search was inconclusive (family
// exhausted), never that the estimator provably does not factor.
template <class K>
std::optional<TransformSearchResult<K>> search_factoring_transform(
    const PartitionedMatrix<K>& G, int m1, int m2,
    const std::vector<RationalFunction<K>>& entries,
    const Rational& radius = default_lambda_radius()) {
  if (m1 + m2 != G.m || m1 < 1 || m2 < 1) return std::nullopt;
  std::vector<size_t> idx(static_cast<size_t>(G.m), 0);
  const size_t n = entries.size();
  while (true) {
    RfMatrix<K> F(G.m, G.m);
    for (int i = 0; i < G.m; ++i) F(i, i) = entries[idx[i]];
    FactorResult<K> r =
        try_factor(G, m1, m2, std::optional<RfMatrix<K>>(F), radius);
    if (auto* ok = std::get_if<Factoring<K>>(&r))
      return TransformSearchResult<K>{F, *ok};
    // lexicographic increment
    int pos = G.m - 1;
    while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
    if (pos < 0) return std::nullopt;
  }
}

}  // namespace dopt
