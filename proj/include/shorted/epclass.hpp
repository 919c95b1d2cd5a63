#pragma once

#include "shorted/schur.hpp"

namespace shorted {

struct EPCheck {
  bool ok = false;
  double defect = 0.0;
};

namespace detail {

// Masked one-sided range inclusion R(inner_op) within R(outer_op) for ambient
// operators; the residual lives in the ambient space already.
inline EPCheck range_inclusion(const Mat& outer_op, const Mat& inner_op,
                               const TolPolicy& tol, const RealVec* mask) {
  InclusionCheck c = masked_includes(
      range_of(outer_op, tol), range_of(inner_op, tol),
      Mat::Identity(inner_op.rows(), inner_op.rows()), mask, tol);
  return {c.ok, c.defect};
}

}  // namespace detail

// hypo-EP: R(T) within R(T^*). defect = ||(I - P_{R(T*)}) B_{R(T)}||.
inline EPCheck is_hypo_ep(const Mat& t, const TolPolicy& tol = {},
                          const RealVec* mask = nullptr) {
  if (t.rows() != t.cols()) throw InvalidInput("is_hypo_ep: t not square");
  return detail::range_inclusion(t.adjoint(), t, tol, mask);
}

// EP: R(T) == R(T^*) (closed range is automatic in finite dimension).
// defect = max of the two one-sided inclusion defects.
inline EPCheck is_ep(const Mat& t, const TolPolicy& tol = {},
                     const RealVec* mask = nullptr) {
  if (t.rows() != t.cols()) throw InvalidInput("is_ep: t not square");
  EPCheck fwd = detail::range_inclusion(t.adjoint(), t, tol, mask);
  EPCheck bwd = detail::range_inclusion(t, t.adjoint(), tol, mask);
  return {fwd.ok && bwd.ok, std::max(fwd.defect, bwd.defect)};
}

// Moore-Penrose inverse assembled from blocks, with S = A - B D^+ C:
//
//   T^+ = [  S^+           -S^+ B D^+              ]
//         [ -D^+ C S^+      D^+ + D^+ C S^+ B D^+  ]
//
// Valid under complementability plus the two range hypotheses below; each is
// checked and reported via HypothesisFailed when it does not hold.
inline Mat block_pinv(const BlockOp& blk, const TolPolicy& tol = {}) {
  ComplementabilityReport rep = check_complementable(blk, tol);
  if (rep.verdict == Verdict::NotComplementable)
    throw NotComplementableError("block_pinv: not complementable");
  if (rep.verdict == Verdict::IllPosedSchur)
    throw IllPosedSchurError("block_pinv: ill-posed Schur complement");
  const Mat dp = pinv(blk.d, tol);
  const Mat s = blk.a - blk.b * (dp * blk.c);

  InclusionCheck hyp1 = includes(range_of(s.adjoint(), tol),
                                 range_of(blk.c.adjoint(), tol), tol);
  if (!hyp1.ok) throw HypothesisFailed("R(C*) within R(S*)", hyp1.defect);
  InclusionCheck hyp2 = includes(range_of(s, tol), range_of(blk.b, tol), tol);
  if (!hyp2.ok) throw HypothesisFailed("R(B) within R(S)", hyp2.defect);

  const Mat sp = pinv(s, tol);
  const Mat top_left = sp;
  const Mat top_right = -sp * blk.b * dp;
  const Mat bot_left = -dp * blk.c * sp;
  const Mat bot_right = dp + dp * blk.c * sp * blk.b * dp;
  // T^+ maps the codomain back to the domain.
  return blk.m.basis * top_left * blk.n.basis.adjoint() +
         blk.m.basis * top_right * blk.nperp.basis.adjoint() +
         blk.mperp.basis * bot_left * blk.n.basis.adjoint() +
         blk.mperp.basis * bot_right * blk.nperp.basis.adjoint();
}

// Equivalence suite for the hypo-EP transfer theorem. All constituents are
// evaluated as ambient operators (compressed blocks embedded back into the
// ambient space), so the flags are meaningful for arbitrary M, N.
struct EPReport {
  EPCheck t_is_ep;
  EPCheck t_is_hypo_ep;
  bool schur_is_hypo_ep = false;
  bool d_is_hypo_ep = false;
  bool rb_in_rschur = false;           // R(B) within R(T_/)
  bool rcstar_in_rschurstar = false;   // R(C*) within R((T_/)*) -- hypothesis
  bool aug_lower_is_hypo_ep = false;   // [[T_/, 0], [C, D]]
  bool aug_upper_is_hypo_ep = false;   // [[T_/, B], [0, D]]
  bool equivalences_consistent = true;
};

// Under the hypothesis R(C*) within R((T_/)*), the following are equivalent:
//   (1) T hypo-EP
//   (2) T_/ and D hypo-EP and R(B) within R(T_/)
//   (3) both augmented operators hypo-EP
// equivalences_consistent records that the computed flags respect this;
// without the hypothesis it is vacuously true (the implication (1) => (2) may
// genuinely fail then, which is what the rank examples demonstrate).
inline EPReport ep_equivalence_report(const Mat& t, const Subspace& m,
                                      const Subspace& n,
                                      const TolPolicy& tol = {},
                                      const AmbientMask* mask = nullptr) {
  if (t.rows() != t.cols())
    throw InvalidInput("ep_equivalence_report: t not square");
  BlockOp blk = decompose(t, m, n, tol);
  ComplementabilityReport rep = check_complementable(blk, tol, mask);
  if (rep.verdict == Verdict::NotComplementable)
    throw NotComplementableError("ep_equivalence_report: not complementable");
  if (rep.verdict == Verdict::IllPosedSchur)
    throw IllPosedSchurError("ep_equivalence_report: ill-posed Schur complement");
  SchurResult s = schur(blk, SchurRoute::Pinv, tol, /*unsafe=*/true);

  const RealVec* mcod = mask ? &mask->cod : nullptr;
  const Mat b_amb = embed_compressed(blk.b, blk.n, blk.mperp);
  const Mat c_amb = embed_compressed(blk.c, blk.nperp, blk.m);
  const Mat d_amb = embed_compressed(blk.d, blk.nperp, blk.mperp);

  EPReport out;
  out.t_is_ep = is_ep(t, tol, mcod);
  out.t_is_hypo_ep = is_hypo_ep(t, tol, mcod);
  out.schur_is_hypo_ep = is_hypo_ep(s.ambient, tol, mcod).ok;
  out.d_is_hypo_ep = is_hypo_ep(d_amb, tol, mcod).ok;
  out.rb_in_rschur =
      detail::range_inclusion(s.ambient, b_amb, tol, mcod).ok;
  out.rcstar_in_rschurstar =
      detail::range_inclusion(s.ambient.adjoint(), c_amb.adjoint(), tol, mcod).ok;

  const Mat aug_lower = s.ambient + c_amb + d_amb;           // B slot zeroed
  const Mat aug_upper = s.ambient + b_amb + d_amb;           // C slot zeroed
  out.aug_lower_is_hypo_ep = is_hypo_ep(aug_lower, tol, mcod).ok;
  out.aug_upper_is_hypo_ep = is_hypo_ep(aug_upper, tol, mcod).ok;

  if (out.rcstar_in_rschurstar) {
    const bool one = out.t_is_hypo_ep.ok;
    const bool two = out.schur_is_hypo_ep && out.d_is_hypo_ep && out.rb_in_rschur;
    const bool three = out.aug_lower_is_hypo_ep && out.aug_upper_is_hypo_ep;
    out.equivalences_consistent = (one == two) && (one == three);
  } else {
    out.equivalences_consistent = true;
  }
  return out;
}

}  // namespace shorted
