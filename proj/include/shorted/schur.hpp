#pragma once

#include <optional>
#include <random>
#include <string>

#include "shorted/blockdecomp.hpp"

namespace shorted {

enum class Verdict { Complementable, NotComplementable, IllPosedSchur };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Complementable: return "Complementable";
    case Verdict::NotComplementable: return "NotComplementable";
    case Verdict::IllPosedSchur: return "IllPosedSchur";
  }
  return "?";
}

enum class SchurRoute { Right, Left, Pinv, Polar };

inline const char* to_string(SchurRoute r) {
  switch (r) {
    case SchurRoute::Right: return "right";
    case SchurRoute::Left: return "left";
    case SchurRoute::Pinv: return "pinv";
    case SchurRoute::Polar: return "polar";
  }
  return "?";
}

// Diagonal 0/1 interior weights on the ambient domain / codomain. Used when a
// finite section of an infinite-dimensional operator is analyzed: inclusion
// residuals are multiplied by the mask before taking norms, so defects caused
// purely by truncation at the boundary do not contaminate verdicts.
struct AmbientMask {
  RealVec dom;  // size = ambient domain
  RealVec cod;  // size = ambient codomain
};

struct ComplementabilityReport {
  InclusionCheck rc_in_rd;          // R(C) within R(D)
  InclusionCheck rbstar_in_rdstar;  // R(B*) within R(D*)
  InclusionCheck nd_in_nb;          // N(D) within N(B)
  bool weakly_coincides = true;     // finite-dim: weak verdict == strong verdict
  Verdict verdict = Verdict::NotComplementable;
};

namespace detail {

// Inclusion of compressed-coordinate subspaces, with the residual embedded
// into the ambient space (embed = orthonormal coordinate basis) and
// optionally masked before the norm is taken.
inline InclusionCheck masked_includes(const Subspace& outer,
                                      const Subspace& inner, const Mat& embed,
                                      const RealVec* mask,
                                      const TolPolicy& tol) {
  if (inner.dim() == 0) return {true, 0.0};
  Mat residual =
      inner.basis - outer.basis * (outer.basis.adjoint() * inner.basis);
  Mat ambient = embed * residual;
  if (mask) {
    if (mask->size() != ambient.rows())
      throw InvalidInput("mask size does not match ambient dimension");
    ambient = mask->asDiagonal() * ambient;
  }
  const double defect = operator_norm(ambient);
  return {defect <= tol.eq_rtol, defect};
}

// |D*|^{1/2} = U_r S_r^{1/2} U_r^*  and  |D|^{1/2} = V_r S_r^{1/2} V_r^*.
inline std::pair<Mat, Mat> modulus_sqrts(const Mat& d, const TolPolicy& tol) {
  SvdFactors f = svd(d);
  const double tau = tol.rank_tau(f.s.size() ? f.s(0) : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < f.s.size(); ++i)
    if (f.s(i) > tau) ++r;
  Mat ur = f.u.leftCols(r);
  Mat vr = f.vh.topRows(r).adjoint();
  RealVec sqrt_s = f.s.head(r).array().sqrt();
  Mat dstar_half = ur * sqrt_s.asDiagonal() * ur.adjoint();
  Mat d_half = vr * sqrt_s.asDiagonal() * vr.adjoint();
  return {dstar_half, d_half};
}

}  // namespace detail

// Bilateral complementability of T = [[A,B],[C,D]] with respect to (M, N):
// R(C) within R(D) and R(B*) within R(D*). When the first inclusion holds but
// N(D) leaks through B the Schur complement exists only up to a choice of
// Douglas solution, reported as IllPosedSchur.
inline ComplementabilityReport check_complementable(
    const BlockOp& blk, const TolPolicy& tol = {},
    const AmbientMask* mask = nullptr) {
  const RealVec* mdom = mask ? &mask->dom : nullptr;
  const RealVec* mcod = mask ? &mask->cod : nullptr;
  ComplementabilityReport rep;
  rep.rc_in_rd = detail::masked_includes(
      range_of(blk.d, tol), range_of(blk.c, tol), blk.nperp.basis, mcod, tol);
  rep.rbstar_in_rdstar = detail::masked_includes(
      range_of(blk.d.adjoint(), tol), range_of(blk.b.adjoint(), tol),
      blk.mperp.basis, mdom, tol);
  rep.nd_in_nb = detail::masked_includes(
      null_of(blk.b, tol), null_of(blk.d, tol), blk.mperp.basis, mdom, tol);

  auto [dstar_half, d_half] = detail::modulus_sqrts(blk.d, tol);
  InclusionCheck weak_rc = detail::masked_includes(
      range_of(dstar_half, tol), range_of(blk.c, tol), blk.nperp.basis, mcod,
      tol);
  InclusionCheck weak_rb = detail::masked_includes(
      range_of(d_half, tol), range_of(blk.b.adjoint(), tol), blk.mperp.basis,
      mdom, tol);
  const bool strong = rep.rc_in_rd.ok && rep.rbstar_in_rdstar.ok;
  rep.weakly_coincides = (weak_rc.ok && weak_rb.ok) == strong;

  if (!rep.rc_in_rd.ok)
    rep.verdict = Verdict::NotComplementable;
  else if (rep.rbstar_in_rdstar.ok && rep.nd_in_nb.ok)
    rep.verdict = Verdict::Complementable;
  else
    rep.verdict = Verdict::IllPosedSchur;
  return rep;
}

// Reduced Douglas solution of D Z = C: Z = D^+ C, the unique solution with
// R(Z) within N(D)^perp and minimal operator norm. Throws when R(C) is not
// within R(D) at the working tolerance.
inline Mat douglas_solve(const Mat& d, const Mat& c, const TolPolicy& tol = {}) {
  if (d.rows() != c.rows())
    throw InvalidInput("douglas_solve: D and C row counts differ");
  Mat z = pinv(d, tol) * c;
  const double scale = 1.0 + operator_norm(c);
  const double residual = operator_norm(d * z - c);
  if (residual > tol.eq_rtol * scale)
    throw RangeInclusionFailed("douglas_solve: R(C) not within R(D)", residual);
  return z;
}

struct SchurResult {
  SchurRoute route = SchurRoute::Pinv;
  Mat compressed;  // dim N x dim M
  Mat ambient;     // codomain ambient x domain ambient
  std::optional<Mat> z;        // Right: reduced solution of D Z = C
  std::optional<Mat> y;        // Left:  B D^+
  std::optional<Mat> e, f;     // Polar: factors with E^* F = B D^+ C
  std::optional<Mat> u_polar;  // Polar: partial isometry of D = U|D|
};

// Bilateral shorted operator T_{/(M,N)} by one of four routes. All routes
// agree on complementable inputs. By default the bilateral verdict is
// enforced; with unsafe = true the route's pinv-based formula value is
// returned without any gate (used to exhibit pathologies). The optional mask
// restricts the gate's inclusion checks to interior coordinates, so a
// truncated section is judged by its interior rather than its boundary.
inline SchurResult schur(const BlockOp& blk, SchurRoute route,
                         const TolPolicy& tol = {}, bool unsafe = false,
                         const AmbientMask* mask = nullptr) {
  if (!unsafe) {
    ComplementabilityReport rep = check_complementable(blk, tol, mask);
    if (rep.verdict == Verdict::NotComplementable)
      throw NotComplementableError(
          "schur: R(C) not within R(D) (defect " +
          std::to_string(rep.rc_in_rd.defect) + ")");
    if (rep.verdict == Verdict::IllPosedSchur)
      throw IllPosedSchurError(
          "schur: N(D) leaks through B, the complement is not unique (defect " +
          std::to_string(rep.rbstar_in_rdstar.defect) + ")");
  }
  SchurResult out;
  out.route = route;
  switch (route) {
    case SchurRoute::Right: {
      Mat z = unsafe ? Mat(pinv(blk.d, tol) * blk.c)
                     : douglas_solve(blk.d, blk.c, tol);
      out.compressed = blk.a - blk.b * z;
      out.z = std::move(z);
      break;
    }
    case SchurRoute::Left: {
      Mat ystar = unsafe ? Mat(pinv(blk.d.adjoint(), tol) * blk.b.adjoint())
                         : douglas_solve(blk.d.adjoint(), blk.b.adjoint(), tol);
      Mat y = ystar.adjoint();  // y = B D^+
      out.compressed = blk.a - y * blk.c;
      out.y = std::move(y);
      break;
    }
    case SchurRoute::Pinv: {
      out.compressed = blk.a - blk.b * (pinv(blk.d, tol) * blk.c);
      break;
    }
    case SchurRoute::Polar: {
      // D = U|D| with U = U_r V_r^*; G := |D*|^{1/2} U = U_r S^{1/2} V_r^*.
      // F solves G X = C, E solves |D|^{1/2} X = B*; then E^* F = B D^+ C.
      SvdFactors fac = svd(blk.d);
      const double tau = tol.rank_tau(fac.s.size() ? fac.s(0) : 0.0);
      int r = 0;
      for (Eigen::Index i = 0; i < fac.s.size(); ++i)
        if (fac.s(i) > tau) ++r;
      Mat ur = fac.u.leftCols(r);
      Mat vr = fac.vh.topRows(r).adjoint();
      RealVec inv_sqrt = fac.s.head(r).array().sqrt().inverse();
      Mat f = vr * inv_sqrt.asDiagonal() * ur.adjoint() * blk.c;
      Mat e = vr * inv_sqrt.asDiagonal() * vr.adjoint() * blk.b.adjoint();
      if (!unsafe) {
        RealVec sqrt_s = fac.s.head(r).array().sqrt();
        Mat g = ur * sqrt_s.asDiagonal() * vr.adjoint();
        Mat d_half = vr * sqrt_s.asDiagonal() * vr.adjoint();
        const double rf = operator_norm(g * f - blk.c);
        if (rf > tol.eq_rtol * (1.0 + operator_norm(blk.c)))
          throw RangeInclusionFailed("schur/polar: C not solvable through |D*|^{1/2}U", rf);
        const double re = operator_norm(d_half * e - blk.b.adjoint());
        if (re > tol.eq_rtol * (1.0 + operator_norm(blk.b)))
          throw RangeInclusionFailed("schur/polar: B* not solvable through |D|^{1/2}", re);
      }
      out.compressed = blk.a - e.adjoint() * f;
      out.e = std::move(e);
      out.f = std::move(f);
      out.u_polar = Mat(ur * vr.adjoint());
      break;
    }
  }
  out.ambient = embed_compressed(out.compressed, blk.n, blk.m);
  return out;
}

// ---------------------------------------------------------------------------
// Singleton probe
// ---------------------------------------------------------------------------

struct ProbeResult {
  enum class Kind { Point, Empty, NotSingleton };
  Kind kind = Kind::Point;
  Vec z;                 // ambient codomain value (Point only)
  double residual = 0.0; // Empty: unsolvability; NotSingleton: observed spread
};

inline const char* to_string(ProbeResult::Kind k) {
  switch (k) {
    case ProbeResult::Kind::Point: return "Point";
    case ProbeResult::Kind::Empty: return "Empty";
    case ProbeResult::Kind::NotSingleton: return "NotSingleton";
  }
  return "?";
}

// Probes the set {P_N T (x + y) : y in M^perp, C x + D y = 0} claimed to be a
// singleton exactly when the shorted operator is well defined at x.
// Solves D y = -C x by least squares, then perturbs y along N(D).
inline ProbeResult singleton_probe(const BlockOp& blk, const Vec& x,
                                   int k_trials, std::uint64_t seed,
                                   const TolPolicy& tol = {}) {
  if (x.size() != blk.ambient_dom())
    throw InvalidInput("singleton_probe: x has wrong dimension");
  if (!x.allFinite()) throw InvalidInput("singleton_probe: non-finite x");
  Vec xm = blk.m.basis.adjoint() * x;
  if ((x - blk.m.basis * xm).norm() > tol.eq_rtol * (1.0 + x.norm()))
    throw InvalidInput("singleton_probe: x is not in M");

  const Vec rhs = -(blk.c * xm);
  const Vec y0 = pinv(blk.d, tol) * rhs;
  const double scale = 1.0 + rhs.norm();
  const double residual = (blk.d * y0 - rhs).norm();
  ProbeResult out;
  if (residual > tol.eq_rtol * scale) {
    out.kind = ProbeResult::Kind::Empty;
    out.residual = residual / scale;
    return out;
  }

  const Vec z0 = blk.a * xm + blk.b * y0;
  Subspace kernel = null_of(blk.d, tol);
  if (kernel.dim() > 0) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> n01;
    double spread = 0.0;
    for (int t = 0; t < k_trials; ++t) {
      Vec g(kernel.dim());
      for (int i = 0; i < kernel.dim(); ++i) g(i) = Cplx(n01(eng), n01(eng));
      if (g.norm() > 0) g /= g.norm();
      Vec zt = z0 + blk.b * (kernel.basis * g);
      spread = std::max(spread, (zt - z0).norm() / (1.0 + z0.norm()));
    }
    if (spread > tol.eq_rtol) {
      out.kind = ProbeResult::Kind::NotSingleton;
      out.residual = spread;
      return out;
    }
  }
  out.kind = ProbeResult::Kind::Point;
  out.z = blk.n.basis * z0;
  return out;
}

// ---------------------------------------------------------------------------
// Norm bounds for the Douglas solution (ball characterization)
// ---------------------------------------------------------------------------

struct BallBoundReport {
  double lambda_star = 0.0;       // ||Z||, Z the reduced solution of D Z = C
  double bound_right = 0.0;       // ||C|| / gamma(D)
  double lambda_star_left = 0.0;  // ||Y*||, Y = B D^+
  double bound_left = 0.0;        // ||B*|| / gamma(D*)
  bool holds = false;
};

inline BallBoundReport ball_bound(const BlockOp& blk, const TolPolicy& tol = {}) {
  ComplementabilityReport rep = check_complementable(blk, tol);
  if (rep.verdict == Verdict::NotComplementable)
    throw NotComplementableError("ball_bound: not complementable");
  if (rep.verdict == Verdict::IllPosedSchur)
    throw IllPosedSchurError("ball_bound: ill-posed Schur complement");
  BallBoundReport out;
  Mat z = douglas_solve(blk.d, blk.c, tol);
  Mat ystar = douglas_solve(blk.d.adjoint(), blk.b.adjoint(), tol);
  out.lambda_star = operator_norm(z);
  out.bound_right = operator_norm(blk.c) / gamma(blk.d, tol);
  out.lambda_star_left = operator_norm(ystar);
  out.bound_left = operator_norm(blk.b.adjoint()) / gamma(blk.d.adjoint(), tol);
  const double slack = 1.0 + 1e-10;
  out.holds = out.lambda_star <= out.bound_right * slack &&
              out.lambda_star_left <= out.bound_left * slack;
  return out;
}

// ---------------------------------------------------------------------------
// Explicit complementing subspace
// ---------------------------------------------------------------------------

struct ComplementingSubspace {
  Subspace m;
  double schur_check = 0.0;  // || T_{/(M,N)} - P_N T P_M || / (1 + ||T||)
};

// M = (T^{-1}(N^perp))^perp. By construction T(M^perp) is within N^perp, so
// B = 0 and the shorted operator reduces to P_N T P_M. The Schur value is
// computed ungated: R(C) within R(D) may fail, but B = 0 makes A - B D^+ C
// well defined and equal to A regardless.
inline ComplementingSubspace complementing_subspace(const Mat& t,
                                                    const Subspace& n,
                                                    const TolPolicy& tol = {}) {
  if (t.rows() != t.cols()) throw InvalidInput("complementing_subspace: t not square");
  if (static_cast<int>(t.rows()) != n.ambient)
    throw InvalidInput("complementing_subspace: ambient mismatch");
  ComplementingSubspace out;
  out.m = complement(preimage(t, complement(n), tol));
  BlockOp blk = decompose(t, out.m, n, tol);
  SchurResult s = schur(blk, SchurRoute::Pinv, tol, /*unsafe=*/true);
  Mat direct = projector(n) * t * projector(out.m);
  out.schur_check = operator_norm(s.ambient - direct) / (1.0 + operator_norm(t));
  return out;
}

// ---------------------------------------------------------------------------
// Structural identities of the shorted operator
// ---------------------------------------------------------------------------

struct StructureReport {
  InclusionCheck range_identity;  // R(T_/) == R(T) meet N   (mutual inclusion)
  InclusionCheck null_identity;   // N(T_/) == M^perp + N(T) (mutual inclusion)
  double factorization_residual = 0.0;  // T = P diag(T_/, D) Q, relative
  bool idempotent = false;              // (T_/)_{/(M,N)} == T_/
  double idempotency_residual = 0.0;
  bool adjoint_duality = false;         // (T_/(M,N))^* == (T^*)_/(N,M)
  double adjoint_residual = 0.0;
};

inline StructureReport verify_structure(const Mat& t, const Subspace& m,
                                        const Subspace& n,
                                        const TolPolicy& tol = {}) {
  BlockOp blk = decompose(t, m, n, tol);
  SchurResult s = schur(blk, SchurRoute::Pinv, tol);  // gate enforced here
  StructureReport out;

  out.range_identity = subspace_equal(range_of(s.ambient, tol),
                                      intersect(range_of(t, tol), n, tol), tol);
  out.null_identity =
      subspace_equal(null_of(s.ambient, tol),
                     sum(complement(m), null_of(t, tol), tol), tol);

  // T = [[I, Y],[0, I]] diag(T_/, D) [[I, 0],[Z, I]] in block coordinates.
  const int dn = n.dim(), dnp = blk.nperp.dim();
  const int dm = m.dim(), dmp = blk.mperp.dim();
  Mat y = blk.b * pinv(blk.d, tol);
  Mat z = pinv(blk.d, tol) * blk.c;
  Mat p = Mat::Identity(dn + dnp, dn + dnp);
  p.block(0, dn, dn, dnp) = y;
  Mat mid = Mat::Zero(dn + dnp, dm + dmp);
  mid.block(0, 0, dn, dm) = s.compressed;
  mid.block(dn, dm, dnp, dmp) = blk.d;
  Mat q = Mat::Identity(dm + dmp, dm + dmp);
  q.block(dm, 0, dmp, dm) = z;
  Mat blocks = Mat::Zero(dn + dnp, dm + dmp);
  blocks.block(0, 0, dn, dm) = blk.a;
  blocks.block(0, dm, dn, dmp) = blk.b;
  blocks.block(dn, 0, dnp, dm) = blk.c;
  blocks.block(dn, dm, dnp, dmp) = blk.d;
  out.factorization_residual =
      operator_norm(blocks - p * mid * q) / (1.0 + operator_norm(blocks));

  SchurResult s2 = schur(decompose(s.ambient, m, n, tol), SchurRoute::Pinv, tol);
  out.idempotency_residual = operator_norm(s2.ambient - s.ambient) /
                             (1.0 + operator_norm(s.ambient));
  out.idempotent = out.idempotency_residual <= tol.eq_rtol;

  SchurResult sadj =
      schur(decompose(t.adjoint(), n, m, tol), SchurRoute::Pinv, tol);
  out.adjoint_residual = operator_norm(sadj.ambient - s.ambient.adjoint()) /
                         (1.0 + operator_norm(s.ambient));
  out.adjoint_duality = out.adjoint_residual <= tol.eq_rtol;
  return out;
}

// ---------------------------------------------------------------------------
// Ill-posedness exhibit: two Douglas solutions with distinct complements
// ---------------------------------------------------------------------------

struct IllPosedDemo {
  Mat z1, z2;                    // Douglas solutions differing along N(D)
  Mat complement1, complement2;  // A - B Z_i (compressed, dim N x dim M)
  Vec kernel_direction;          // the N(D) direction used (M^perp coords)
};

inline IllPosedDemo ill_posed_demo(const BlockOp& blk, const TolPolicy& tol = {}) {
  Subspace kernel = null_of(blk.d, tol);
  if (kernel.dim() == 0)
    throw InvalidInput("ill_posed_demo: D has trivial kernel");
  if (blk.m.dim() == 0)
    throw InvalidInput("ill_posed_demo: M is the zero subspace");
  Vec k = kernel.basis.col(0);
  Eigen::Index imax;
  k.cwiseAbs().maxCoeff(&imax);
  k *= std::conj(k(imax)) / std::abs(k(imax));  // deterministic phase
  IllPosedDemo out;
  out.kernel_direction = k;
  out.z1 = pinv(blk.d, tol) * blk.c;
  out.z2 = out.z1;
  out.z2.col(0) -= k;  // subtract k tensor e_1^*
  out.complement1 = blk.a - blk.b * out.z1;
  out.complement2 = blk.a - blk.b * out.z2;
  return out;
}

}  // namespace shorted
