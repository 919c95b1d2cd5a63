#pragma once

#include <utility>

#include "shorted/numerics.hpp"

namespace shorted {

// A linear subspace of C^ambient stored as an orthonormal basis (columns).
// dim() == 0 is the zero subspace; basis is then ambient x 0.
struct Subspace {
  int ambient = 0;
  Mat basis;  // ambient x dim, orthonormal columns

  int dim() const { return static_cast<int>(basis.cols()); }

  static Subspace zero(int ambient) {
    return {ambient, Mat::Zero(ambient, 0)};
  }
  static Subspace full(int ambient) {
    return {ambient, Mat::Identity(ambient, ambient)};
  }
  // Span of a subset of coordinate axes (0-based indices).
  template <typename IndexRange>
  static Subspace coords(int ambient, const IndexRange& indices) {
    Mat b = Mat::Zero(ambient, static_cast<Eigen::Index>(indices.size()));
    Eigen::Index j = 0;
    for (int i : indices) b(i, j++) = 1.0;
    return {ambient, b};
  }
};

// Result of a subspace inclusion test. defect is the spectral norm of the
// component of the inner basis outside the outer space (0 <= defect <= 1).
struct InclusionCheck {
  bool ok = false;
  double defect = 0.0;
};

// Orthonormal basis for the column span of `vectors`, rank decided by tau.
inline Subspace from_spanning(const Mat& vectors, const TolPolicy& tol = {}) {
  detail::require_finite(vectors, "from_spanning");
  const int ambient = static_cast<int>(vectors.rows());
  if (vectors.cols() == 0) return Subspace::zero(ambient);
  Eigen::JacobiSVD<Mat> dec(vectors, Eigen::ComputeThinU);
  const RealVec& s = dec.singularValues();
  const double tau = tol.rank_tau(s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++r;
  return {ambient, dec.matrixU().leftCols(r)};
}

// Orthogonal complement within the ambient space.
inline Subspace complement(const Subspace& s) {
  if (s.dim() == 0) return Subspace::full(s.ambient);
  if (s.dim() == s.ambient) return Subspace::zero(s.ambient);
  Eigen::JacobiSVD<Mat> dec(s.basis, Eigen::ComputeFullU);
  // Orthonormal basis: all singular values are 1, the kept rank is dim().
  return {s.ambient, dec.matrixU().rightCols(s.ambient - s.dim())};
}

// Orthogonal projector onto s (ambient x ambient).
inline Mat projector(const Subspace& s) {
  return s.basis * s.basis.adjoint();
}

// Does outer contain inner? defect = ||(I - P_outer) B_inner||.
inline InclusionCheck includes(const Subspace& outer, const Subspace& inner,
                               const TolPolicy& tol = {}) {
  if (outer.ambient != inner.ambient)
    throw InvalidInput("includes: ambient dimensions differ");
  if (inner.dim() == 0) return {true, 0.0};
  Mat residual = inner.basis - outer.basis * (outer.basis.adjoint() * inner.basis);
  const double defect = operator_norm(residual);
  return {defect <= tol.eq_rtol, defect};
}

// Mutual inclusion; defect is the larger of the two one-sided defects.
inline InclusionCheck subspace_equal(const Subspace& s1, const Subspace& s2,
                                     const TolPolicy& tol = {}) {
  InclusionCheck a = includes(s1, s2, tol);
  InclusionCheck b = includes(s2, s1, tol);
  return {a.ok && b.ok, std::max(a.defect, b.defect)};
}

inline Subspace sum(const Subspace& s1, const Subspace& s2,
                    const TolPolicy& tol = {}) {
  if (s1.ambient != s2.ambient)
    throw InvalidInput("sum: ambient dimensions differ");
  Mat joined(s1.ambient, s1.dim() + s2.dim());
  joined << s1.basis, s2.basis;
  return from_spanning(joined, tol);
}

// Intersection via (s1^perp + s2^perp)^perp: one rank decision, no
// entrywise basis comparisons.
inline Subspace intersect(const Subspace& s1, const Subspace& s2,
                          const TolPolicy& tol = {}) {
  if (s1.ambient != s2.ambient)
    throw InvalidInput("intersect: ambient dimensions differ");
  return complement(sum(complement(s1), complement(s2), tol));
}

// Column span of t.
inline Subspace range_of(const Mat& t, const TolPolicy& tol = {}) {
  return from_spanning(t, tol);
}

// Kernel of t: right singular vectors with sigma <= tau plus the trailing
// columns of a full V when cols > rows.
inline Subspace null_of(const Mat& t, const TolPolicy& tol = {}) {
  detail::require_finite(t, "null_of");
  const int n = static_cast<int>(t.cols());
  if (n == 0) return Subspace::zero(0);
  if (t.rows() == 0) return Subspace::full(n);
  Eigen::JacobiSVD<Mat> dec(t, Eigen::ComputeFullV);
  const RealVec& s = dec.singularValues();
  const double tau = tol.rank_tau(s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++r;
  return {n, dec.matrixV().rightCols(n - r)};
}

// Preimage of a subspace: {x : t x in s} = N(P_{s^perp} t).
inline Subspace preimage(const Mat& t, const Subspace& s,
                         const TolPolicy& tol = {}) {
  if (static_cast<int>(t.rows()) != s.ambient)
    throw InvalidInput("preimage: codomain of t does not match ambient of s");
  Mat outside = t - s.basis * (s.basis.adjoint() * t);
  return null_of(outside, tol);
}

}  // namespace shorted
