#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

#include "dopt/scalar.hpp"

namespace dopt::detail {

// All complex roots of sum_i c[i] z^i (c ascending, leading coefficient
// nonzero) via companion-matrix eigenvalues.
inline std::vector<Cplx> poly_roots(std::vector<Cplx> c) {
  while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
  if (c.size() <= 1) return {};
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = solver.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](const Cplx& a, const Cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace dopt::detail
