#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "shorted/errors.hpp"

namespace shorted {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

// Tolerance policy shared by every rank/equality decision in the library.
//
//   rank_tau(m) = max(rank_rtol * sigma_max(m), abs_floor)
//
// rank_rtol governs which singular values count as nonzero, eq_rtol governs
// relative equality of matrices/vectors and subspace-inclusion defects,
// abs_floor keeps the threshold meaningful for tiny matrices.
struct TolPolicy {
  double rank_rtol = 1e-10;
  double eq_rtol = 1e-9;
  double abs_floor = 1e-13;

  double rank_tau(double sigma_max) const {
    return std::max(rank_rtol * sigma_max, abs_floor);
  }
};

// Thin SVD factors, m = u * s.asDiagonal() * vh with s descending.
struct SvdFactors {
  Mat u;      // rows(m) x k, orthonormal columns
  RealVec s;  // k, descending, k = min(rows, cols)
  Mat vh;     // k x cols(m), orthonormal rows
};

namespace detail {

inline void require_finite(const Mat& m, const char* who) {
  if (!m.allFinite()) throw InvalidInput(std::string(who) + ": non-finite entries");
}

// Full SVD (square U and V), used where null spaces / complements are needed.
inline Eigen::JacobiSVD<Mat> full_svd(const Mat& m) {
  require_finite(m, "svd");
  return Eigen::JacobiSVD<Mat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

}  // namespace detail

// Deterministic thin SVD. Degenerate shapes (0 rows or columns) yield empty
// factors rather than an error.
inline SvdFactors svd(const Mat& m) {
  detail::require_finite(m, "svd");
  if (m.rows() == 0 || m.cols() == 0) {
    return {Mat::Zero(m.rows(), 0), RealVec(0), Mat::Zero(0, m.cols())};
  }
  Eigen::JacobiSVD<Mat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV().adjoint()};
}

// Largest singular value; 0 for empty or zero matrices.
inline double operator_norm(const Mat& m) {
  detail::require_finite(m, "operator_norm");
  if (m.rows() == 0 || m.cols() == 0 || m.isZero(0.0)) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

// Count of singular values strictly above rank_tau.
inline int numerical_rank(const Mat& m, const TolPolicy& tol = {}) {
  detail::require_finite(m, "numerical_rank");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  RealVec s = Eigen::JacobiSVD<Mat>(m).singularValues();
  const double tau = tol.rank_tau(s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++r;
  return r;
}

// Moore-Penrose pseudoinverse via SVD truncation at rank_tau.
inline Mat pinv(const Mat& m, const TolPolicy& tol = {}) {
  detail::require_finite(m, "pinv");
  if (m.rows() == 0 || m.cols() == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVec& s = dec.singularValues();
  const double tau = tol.rank_tau(s.size() ? s(0) : 0.0);
  Mat out = Mat::Zero(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tau)
      out += dec.matrixV().col(i) * (1.0 / s(i)) * dec.matrixU().col(i).adjoint();
  }
  return out;
}

// Reduced minimum modulus: smallest singular value still counted as nonzero.
// +infinity for the (numerically) zero matrix, so that bound formulas like
// ||C|| / gamma(D) degrade gracefully.
inline double gamma(const Mat& m, const TolPolicy& tol = {}) {
  detail::require_finite(m, "gamma");
  if (m.rows() == 0 || m.cols() == 0)
    return std::numeric_limits<double>::infinity();
  RealVec s = Eigen::JacobiSVD<Mat>(m).singularValues();
  const double tau = tol.rank_tau(s.size() ? s(0) : 0.0);
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) smallest = s(i);
  return smallest;  // s is descending, last retained value is the gamma
}

// Relative distance ||x - y|| / (1 + ||x||), spectral norm.
inline double rel_residual(const Mat& x, const Mat& y) {
  return operator_norm(x - y) / (1.0 + operator_norm(x));
}

inline bool approx_equal(const Mat& x, const Mat& y, const TolPolicy& tol = {}) {
  return rel_residual(x, y) <= tol.eq_rtol;
}

}  // namespace shorted
