#pragma once

// Positive-representation algebra: component-wise positive/negative parts,
// the Delta_k selector, min-positive representations pi/Pi of vectors and
// matrices, and the min-Metzler representation Gamma of a square matrix.
// All of it is sign tests, copies and negations; no rounding occurs, so
// the reconstruction identities hold exactly:
//
//   Delta_k pi(w) = w
//   Delta_k Pi(M) pi(x) = M x
//   Delta_k Gamma(A) pi(x) = A x

#include <cstddef>

#include "fhal/matrix.hpp"

namespace fhal {

// Entries equal to zero land in the positive part with both parts zero.
inline Matrix pos_part(const Matrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = m(i, j) > 0.0 ? m(i, j) : 0.0;
  return r;
}

inline Matrix neg_part(const Matrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = m(i, j) < 0.0 ? -m(i, j) : 0.0;
  return r;
}

inline Matrix abs_part(const Matrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      r(i, j) = v < 0.0 ? -v : v;
    }
  return r;
}

// Delta_k (k x 2k): 1 on (i,i), -1 on (i,i+k).
inline Matrix delta(std::size_t k) {
  Matrix d(k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    d(i, i) = 1.0;
    d(i, i + k) = -1.0;
  }
  return d;
}

// pi(w) = (w+; w-), stacked.
inline Vector pi_vec(const Vector& w) {
  const std::size_t k = w.size();
  Vector p(2 * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (w[i] > 0.0)
      p[i] = w[i];
    else if (w[i] < 0.0)
      p[i + k] = -w[i];
  }
  return p;
}

// Pi(M) = [[M+, M-], [M-, M+]].
inline Matrix pi_mat(const Matrix& m) {
  const std::size_t k = m.rows(), l = m.cols();
  Matrix p(2 * k, 2 * l);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      double v = m(i, j);
      if (v > 0.0) {
        p(i, j) = v;
        p(i + k, j + l) = v;
      } else if (v < 0.0) {
        p(i, j + l) = -v;
        p(i + k, j) = -v;
      }
    }
  return p;
}

// Gamma(A) = [[diag A + off+, off-], [off-, diag A + off+]] with
// off = A - diag A; Metzler by construction.
inline Matrix gamma_metzler(const Matrix& a) {
  if (!a.square()) throw std::invalid_argument("gamma_metzler: matrix must be square");
  const std::size_t k = a.rows();
  Matrix g(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    g(i, i) = a(i, i);
    g(i + k, i + k) = a(i, i);
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      double v = a(i, j);
      if (v > 0.0) {
        g(i, j) = v;
        g(i + k, j + k) = v;
      } else if (v < 0.0) {
        g(i, j + k) = -v;
        g(i + k, j) = -v;
      }
    }
  }
  return g;
}

inline bool is_metzler(const Matrix& m) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) < 0.0) return false;
  return true;
}

}  // namespace fhal
