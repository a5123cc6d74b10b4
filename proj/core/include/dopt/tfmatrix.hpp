#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dopt/ratpoly.hpp"

namespace dopt {

// Dense matrix of rational functions over one coefficient field.
template <class K>
class RfMatrix {
 public:
  RfMatrix() = default;
  RfMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        a_(static_cast<size_t>(rows * cols), RationalFunction<K>::zero()) {}

  static RfMatrix identity(int n) {
    RfMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = RationalFunction<K>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  RationalFunction<K>& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const RationalFunction<K>& operator()(int i, int j) const {
    return a_[i * cols_ + j];
  }

  bool operator==(const RfMatrix&) const = default;

  bool is_zero() const {
    for (const auto& e : a_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend RfMatrix operator*(const RfMatrix& a, const RfMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix dimension mismatch");
    RfMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) {
        RationalFunction<K> s = RationalFunction<K>::zero();
        for (int k = 0; k < a.cols_; ++k) s = s + a(i, k) * b(k, j);
        c(i, j) = s;
      }
    return c;
  }
  friend RfMatrix operator*(const RationalFunction<K>& s, const RfMatrix& m) {
    RfMatrix c = m;
    for (auto& e : c.a_) e = s * e;
    return c;
  }
  friend RfMatrix operator+(const RfMatrix& a, const RfMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error("matrix dimension mismatch");
    RfMatrix c(a.rows_, a.cols_);
    for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] = a.a_[i] + b.a_[i];
    return c;
  }
  friend RfMatrix operator-(const RfMatrix& a, const RfMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error("matrix dimension mismatch");
    RfMatrix c(a.rows_, a.cols_);
    for (size_t i = 0; i < c.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
    return c;
  }

  RfMatrix minor_matrix(int row, int col) const {
    RfMatrix m(rows_ - 1, cols_ - 1);
    for (int i = 0, mi = 0; i < rows_; ++i) {
      if (i == row) continue;
      for (int j = 0, mj = 0; j < cols_; ++j) {
        if (j == col) continue;
        m(mi, mj++) = (*this)(i, j);
      }
      ++mi;
    }
    return m;
  }

  // Laplace expansion; channel counts m <= 4 in every catalog entry, so
  // exact determinants stay cheap.
  RationalFunction<K> det() const {
    if (rows_ != cols_) throw Error("determinant of non-square matrix");
    if (rows_ == 0) return RationalFunction<K>::one();
    if (rows_ == 1) return (*this)(0, 0);
    RationalFunction<K> d = RationalFunction<K>::zero();
    for (int j = 0; j < cols_; ++j) {
      if ((*this)(0, j).is_zero()) continue;
      RationalFunction<K> term = (*this)(0, j) * minor_matrix(0, j).det();
      d = (j % 2 == 0) ? d + term : d - term;
    }
    return d;
  }

  // Exact adjugate/determinant inverse over the rational-function field.
  RfMatrix inverse() const {
    RationalFunction<K> d = det();
    if (d.is_zero())
      throw StructuralSingularityError("singular rational-function matrix");
    RfMatrix inv(rows_, cols_);
    if (rows_ == 1) {
      inv(0, 0) = d.inverse();
      return inv;
    }
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) {
        RationalFunction<K> c = minor_matrix(j, i).det();
        if ((i + j) % 2 == 1) c = -c;
        inv(i, j) = c / d;
      }
    return inv;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<RationalFunction<K>> a_;
};

template <class To, class From>
RfMatrix<To> convert_matrix(const RfMatrix<From>& m) {
  RfMatrix<To> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = convert_rf<To>(m(i, j));
  return out;
}

// Block 2x2 partitioned transfer matrix with channel dimensions (1, m):
// row/col 1 is the gradient channel (u -> y), rows/cols 2 the network
// channel (v -> z).
template <class K>
struct PartitionedMatrix {
  RationalFunction<K> b11;  // 1 x 1
  RfMatrix<K> b12;          // 1 x m
  RfMatrix<K> b21;          // m x 1
  RfMatrix<K> b22;          // m x m
  int m = 1;
  std::string label;

  PartitionedMatrix() : b12(1, 1), b21(1, 1), b22(1, 1) {}
  explicit PartitionedMatrix(int m_, std::string label_ = {})
      : b12(1, m_), b21(m_, 1), b22(m_, m_), m(m_), label(std::move(label_)) {}

  bool operator==(const PartitionedMatrix& o) const {
    return m == o.m && b11 == o.b11 && b12 == o.b12 && b21 == o.b21 &&
           b22 == o.b22;
  }

  void validate() const {
    if (m < 1 || b12.rows() != 1 || b12.cols() != m || b21.rows() != m ||
        b21.cols() != 1 || b22.rows() != m || b22.cols() != m)
      throw Error("partitioned matrix has inconsistent block dimensions");
  }
};

template <class To, class From>
PartitionedMatrix<To> convert_partitioned(const PartitionedMatrix<From>& p) {
  PartitionedMatrix<To> out(p.m, p.label);
  out.b11 = convert_rf<To>(p.b11);
  out.b12 = convert_matrix<To>(p.b12);
  out.b21 = convert_matrix<To>(p.b21);
  out.b22 = convert_matrix<To>(p.b22);
  return out;
}

// Closes the network channel through the scalar gain lambda:
//   H_lambda = H11 + lambda H12 (I - lambda H22)^{-1} H21.
// The lambda field L may be the complex extension of K.
template <class L, class K>
RationalFunction<L> lft_eval(const PartitionedMatrix<K>& M, const L& lambda) {
  M.validate();
  const RationalFunction<L> lam = RationalFunction<L>::constant(lambda);
  if (scalar_traits<L>::is_zero(lambda)) return convert_rf<L>(M.b11);
  RfMatrix<L> X = RfMatrix<L>::identity(M.m) -
                  (lam * convert_matrix<L>(M.b22));
  RfMatrix<L> inner =
      convert_matrix<L>(M.b12) * X.inverse() * convert_matrix<L>(M.b21);
  return convert_rf<L>(M.b11) + lam * inner(0, 0);
}

// Per-lambda multiplicity of z=1 as a zero of the closed map. Used with
// >= 3 generically chosen nonzero lambdas to certify a "for all lambda
// != 0" claim as a sampled certificate.
template <class L, class K>
std::vector<std::pair<L, int>> lft_symbolic_numerator_scan(
    const PartitionedMatrix<K>& M, const std::vector<L>& lambdas) {
  std::vector<std::pair<L, int>> out;
  for (const L& lam : lambdas) {
    auto closed = lft_eval(M, lam);
    out.emplace_back(lam, std::max(closed.pole_zero_multiplicity_at_one(), 0));
  }
  return out;
}

// Remark-1 gauge change diag(1, F) G diag(1, F^{-1}); leaves every
// closed-loop map G_lambda invariant.
template <class K>
PartitionedMatrix<K> f_transform(const PartitionedMatrix<K>& G,
                                 const RfMatrix<K>& F) {
  G.validate();
  if (F.rows() != G.m || F.cols() != G.m)
    throw Error("F-transform dimension mismatch");
  RfMatrix<K> Finv = F.inverse();  // throws on rank deficiency
  PartitionedMatrix<K> out(G.m, G.label);
  out.b11 = G.b11;
  out.b12 = G.b12 * Finv;
  out.b21 = F * G.b21;
  out.b22 = F * G.b22 * Finv;
  return out;
}

struct BlockProperness {
  bool proper = true;
  bool strictly_proper = true;
  std::vector<std::vector<int>> relative_degrees;
};

struct PropernessReport {
  BlockProperness b11, b12, b21, b22;
  bool matrix_proper = true;            // every block proper
  bool b22_strictly_proper = true;      // Lemma (iv) first half
  bool b21b12_strictly_proper = true;   // Lemma 3(iv) second half
};

namespace detail {

template <class K>
BlockProperness block_properness(const RfMatrix<K>& m) {
  BlockProperness p;
  p.relative_degrees.assign(m.rows(), std::vector<int>(m.cols(), 0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      int rd = m(i, j).relative_degree();
      p.relative_degrees[i][j] = rd;
      p.proper = p.proper && rd >= 0;
      p.strictly_proper = p.strictly_proper && rd >= 1;
    }
  return p;
}

}  // namespace detail

template <class K>
PropernessReport properness_report(const PartitionedMatrix<K>& M) {
  M.validate();
  PropernessReport rep;
  RfMatrix<K> m11(1, 1);
  m11(0, 0) = M.b11;
  rep.b11 = detail::block_properness(m11);
  rep.b12 = detail::block_properness(M.b12);
  rep.b21 = detail::block_properness(M.b21);
  rep.b22 = detail::block_properness(M.b22);
  rep.matrix_proper = rep.b11.proper && rep.b12.proper && rep.b21.proper &&
                      rep.b22.proper;
  rep.b22_strictly_proper = rep.b22.strictly_proper;
  rep.b21b12_strictly_proper =
      detail::block_properness(M.b21 * M.b12).strictly_proper;
  return rep;
}

}  // namespace dopt
