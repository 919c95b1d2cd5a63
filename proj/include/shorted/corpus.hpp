#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shorted/epclass.hpp"

namespace shorted {

// A probe the case is expected to answer in a specific way.
struct ProbeExpectation {
  Vec x;
  ProbeResult::Kind kind = ProbeResult::Kind::Point;
  std::optional<Vec> z;  // expected value when kind == Point
};

// A finite section of a named operator together with everything the analysis
// is expected to find on it. schur_action maps an ambient domain vector in M
// to the ambient value of the shorted operator; comparisons against it are
// masked to interior coordinates (truncation corrupts the boundary).
struct LabeledCase {
  std::string name;
  int dim = 0;  // ambient dimension (two-leg cases split it into halves)
  Mat t;
  Subspace m, n;
  Verdict expected_verdict = Verdict::Complementable;
  std::function<Vec(const Vec&)> schur_action;  // may be empty
  std::optional<Mat> expected_compressed;       // engineered cases only
  std::map<std::string, bool> ep_facts;         // empty unless EP-relevant
  int interior_margin = 4;
  bool two_leg = false;
  AmbientMask mask;  // 0/1 interior weights (dom and cod)
  std::vector<ProbeExpectation> probes;
};

namespace detail {

inline RealVec interior_weights(int dim, int margin, bool two_leg) {
  RealVec w = RealVec::Ones(dim);
  if (two_leg) {
    const int q = dim / 2;
    for (int i = std::max(0, q - margin); i < q; ++i) w(i) = 0.0;
    for (int i = std::max(q, dim - margin); i < dim; ++i) w(i) = 0.0;
  } else {
    for (int i = std::max(0, dim - margin); i < dim; ++i) w(i) = 0.0;
  }
  return w;
}

inline void finish_case(LabeledCase& lc) {
  lc.mask.dom = interior_weights(lc.dim, lc.interior_margin, lc.two_leg);
  lc.mask.cod = lc.mask.dom;
}

inline std::vector<int> every_other(int dim, int start) {
  std::vector<int> idx;
  for (int i = start; i < dim; i += 2) idx.push_back(i);
  return idx;
}

inline std::vector<int> contiguous(int lo, int hi) {  // [lo, hi)
  std::vector<int> idx;
  for (int i = lo; i < hi; ++i) idx.push_back(i);
  return idx;
}

}  // namespace detail

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "eqgm_banded",  "nonclosed_pairs", "ex5_shift",
      "ex6_band",     "ex1_diag",        "ex3_rank",
      "ex4_rank",     "ex4_rank_literal", "hypoep_sum"};
  return names;
}

namespace cases {

// Banded operator on l2: odd rows x_{n+2} + x_{n+1} - x_n, even rows
// x_{n-1}/(n-1) + x_n. M = N = odd coordinates; D is the identity on the
// evens, so the shorted operator is exact: z_n = x_{n+2} - ((n+1)/n) x_n.
inline LabeledCase eqgm_banded(int dim, int margin) {
  if (dim < 8 || dim % 2 != 0)
    throw InvalidInput("eqgm_banded: dim must be even and >= 8");
  LabeledCase lc;
  lc.name = "eqgm_banded";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = Mat::Zero(dim, dim);
  for (int n = 1; n <= dim; n += 2) {  // odd rows, 1-indexed
    t(n - 1, n - 1) = -1.0;
    t(n - 1, n) = 1.0;  // x_{n+1} always exists (dim even)
    if (n + 2 <= dim) t(n - 1, n + 1) = 1.0;
  }
  for (int n = 2; n <= dim; n += 2) {  // even rows
    t(n - 1, n - 2) = 1.0 / (n - 1);
    t(n - 1, n - 1) = 1.0;
  }
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::every_other(dim, 0));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim](const Vec& x) {
    Vec z = Vec::Zero(dim);
    for (int n = 1; n <= dim; n += 2) {
      Cplx next = (n + 2 <= dim) ? x(n + 1) : Cplx(0.0);
      z(n - 1) = next - (double(n + 1) / double(n)) * x(n - 1);
    }
    return z;
  };
  {
    Vec e1 = Vec::Zero(dim);
    e1(0) = 1.0;
    Vec z1 = Vec::Zero(dim);
    z1(0) = -2.0;
    lc.probes.push_back({e1, ProbeResult::Kind::Point, z1});
    Vec e3 = Vec::Zero(dim);
    e3(2) = 1.0;
    Vec z3 = Vec::Zero(dim);
    z3(0) = 1.0;
    z3(2) = -4.0 / 3.0;
    lc.probes.push_back({e3, ProbeResult::Kind::Point, z3});
  }
  detail::finish_case(lc);
  return lc;
}

// Pairs (e_{2k-1}, e_{2k}) with T e_{2k-1} = e_{2k-1} + e_{2k} and
// T e_{2k} = c_k (e_{2k-1} + e_{2k}), c_k = 10^{-4(k-1)}. R(C) spans every
// even coordinate but D = diag(c_k) is numerically rank 3, so the pair is not
// complementable; yet at x = e1 the feasible set is still the single point 0.
inline LabeledCase nonclosed_pairs(int dim, int margin) {
  if (dim < 8 || dim % 2 != 0)
    throw InvalidInput("nonclosed_pairs: dim must be even and >= 8");
  LabeledCase lc;
  lc.name = "nonclosed_pairs";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = Mat::Zero(dim, dim);
  for (int k = 1; k <= dim / 2; ++k) {
    const double ck = std::pow(10.0, -4.0 * (k - 1));
    const int o = 2 * k - 2, e = 2 * k - 1;  // 0-indexed pair
    t(o, o) = 1.0;
    t(e, o) = 1.0;
    t(o, e) = ck;
    t(e, e) = ck;
  }
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::every_other(dim, 0));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::NotComplementable;
  {
    Vec e1 = Vec::Zero(dim);
    e1(0) = 1.0;
    lc.probes.push_back({e1, ProbeResult::Kind::Point, Vec(Vec::Zero(dim))});
    Vec e3 = Vec::Zero(dim);
    e3(2) = 1.0;
    lc.probes.push_back({e3, ProbeResult::Kind::Point, Vec(Vec::Zero(dim))});
  }
  detail::finish_case(lc);
  return lc;
}

// l2 (+) l2 case with A the weighted forward shift, B = I, C = diag(1/k),
// D the backward shift. R(C) is within R(D) (interior), but N(D) = span{e1}
// leaks through B = I: the Schur complement depends on the Douglas solution,
// A - B Z_1 = 0 while A - B Z_2 acts as x -> x_1 e_1.
inline LabeledCase ex5_shift(int dim, int margin) {
  if (dim < 12 || dim % 2 != 0)
    throw InvalidInput("ex5_shift: dim must be even and >= 12");
  const int q = dim / 2;
  LabeledCase lc;
  lc.name = "ex5_shift";
  lc.dim = dim;
  lc.interior_margin = margin;
  lc.two_leg = true;
  Mat t = Mat::Zero(dim, dim);
  for (int k = 1; k <= q - 1; ++k) t(k, k - 1) = 1.0 / k;        // A
  for (int k = 0; k < q; ++k) t(k, q + k) = 1.0;                 // B = I
  for (int k = 1; k <= q; ++k) t(q + k - 1, k - 1) = 1.0 / k;    // C
  for (int k = 1; k <= q - 1; ++k) t(q + k - 1, q + k) = 1.0;    // D
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::contiguous(0, q));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::IllPosedSchur;
  lc.probes.push_back(
      {Vec(Vec::Zero(dim)), ProbeResult::Kind::NotSingleton, std::nullopt});
  detail::finish_case(lc);
  return lc;
}

// Tridiagonal band with a one-dimensional D block: M = N = span{e1}^perp,
// D = [1]. Exact at every dimension.
inline LabeledCase ex6_band(int dim, int margin) {
  if (dim < 8) throw InvalidInput("ex6_band: dim must be >= 8");
  LabeledCase lc;
  lc.name = "ex6_band";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = Mat::Zero(dim, dim);
  t(0, 0) = 1.0;
  t(0, 1) = 1.0;
  for (int n = 2; n <= dim; ++n) {
    t(n - 1, n - 2) = 1.0;
    t(n - 1, n - 1) = 1.0;
    if (n < dim) t(n - 1, n) = 1.0;
  }
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::contiguous(1, dim));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim](const Vec& x) {
    Vec z = Vec::Zero(dim);
    z(1) = x(2);
    for (int n = 3; n <= dim; ++n) {
      Cplx v = x(n - 2) + x(n - 1);
      if (n < dim) v += x(n);
      z(n - 1) = v;
    }
    return z;
  };
  detail::finish_case(lc);
  return lc;
}

// Diagonal operator diag(1, 1, 1/3, 1, 1/5, 1, ...) against the pairing
// subspace M = {(x1, x1, x3, x3, ...)}. The compressed Schur complement is
// diag(1/k) on the pair basis, so gamma halves when the dimension doubles.
inline LabeledCase ex1_diag(int dim, int margin) {
  if (dim < 8 || dim % 2 != 0)
    throw InvalidInput("ex1_diag: dim must be even and >= 8");
  const int pairs = dim / 2;
  LabeledCase lc;
  lc.name = "ex1_diag";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = Mat::Zero(dim, dim);
  for (int j = 1; j <= dim; ++j)
    t(j - 1, j - 1) = (j % 2 == 1) ? 1.0 / j : 1.0;
  lc.t = t;
  Mat basis = Mat::Zero(dim, pairs);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < pairs; ++k) {
    basis(2 * k, k) = r;
    basis(2 * k + 1, k) = r;
  }
  lc.m = {dim, basis};
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim, pairs](const Vec& x) {
    Vec z = Vec::Zero(dim);
    for (int k = 1; k <= pairs; ++k) {
      Cplx p = (x(2 * k - 2) + x(2 * k - 1)) / 2.0;
      z(2 * k - 2) = p / double(k);
      z(2 * k - 1) = p / double(k);
    }
    return z;
  };
  detail::finish_case(lc);
  return lc;
}

// Rank example: R(C*) not within R((T_/)*), T not hypo-EP although both the
// shorted operator and D are; shows the hypothesis of the transfer theorem
// is not removable. Exact at every dimension (identity tail).
inline LabeledCase ex3_rank(int dim, int margin) {
  if (dim < 8) throw InvalidInput("ex3_rank: dim must be >= 8");
  LabeledCase lc;
  lc.name = "ex3_rank";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = Mat::Zero(dim, dim);
  for (int j = 0; j < 4; ++j) t(0, j) = 1.0;
  for (int j = 1; j < 4; ++j) {
    t(2, j) = 1.0;
    t(3, j) = 1.0;
  }
  for (int j = 5; j <= dim; ++j) t(j - 1, j - 1) = 1.0;
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::contiguous(0, 2));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim](const Vec& x) {
    Vec z = Vec::Zero(dim);
    z(0) = x(0);
    return z;
  };
  lc.ep_facts = {{"t_is_ep", false},
                 {"t_is_hypo_ep", false},
                 {"schur_is_hypo_ep", true},
                 {"d_is_hypo_ep", true},
                 {"rb_in_rschur", true},
                 {"rcstar_in_rschurstar", false},
                 {"aug_lower_is_hypo_ep", false},
                 {"aug_upper_is_hypo_ep", true}};
  detail::finish_case(lc);
  return lc;
}

namespace detail_ex4 {

// Shared A, B, C blocks of the two ex4 variants, written directly into T.
inline Mat skeleton(int dim) {
  Mat t = Mat::Zero(dim, dim);
  for (int j = 0; j < 4; ++j) t(0, j) = 1.0;  // row 1: x1+x2+x3+x4
  t(1, 0) = 1.0;                              // row 2: x1+x3+x4
  t(1, 2) = 1.0;
  t(1, 3) = 1.0;
  t(2, 0) = 1.0;  // rows 3,4 share C = (x1+x2)(e3+e4)
  t(2, 1) = 1.0;
  t(3, 0) = 1.0;
  t(3, 1) = 1.0;
  for (int j = 5; j <= dim; ++j) t(j - 1, j - 1) = 1.0;
  return t;
}

}  // namespace detail_ex4

// Rank example with EP T: R(B) not within R(T_/), so T hypo-EP does not pass
// to the implication (2) without the hypothesis. D block x3+x4 on both core
// rows. T_/ acts as x -> -x2 e2.
inline LabeledCase ex4_rank(int dim, int margin) {
  if (dim < 8) throw InvalidInput("ex4_rank: dim must be >= 8");
  LabeledCase lc;
  lc.name = "ex4_rank";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = detail_ex4::skeleton(dim);
  t(2, 2) = 1.0;  // rows 3,4 of D: x3+x4
  t(2, 3) = 1.0;
  t(3, 2) = 1.0;
  t(3, 3) = 1.0;
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::contiguous(0, 2));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim](const Vec& x) {
    Vec z = Vec::Zero(dim);
    z(1) = -x(1);
    return z;
  };
  lc.ep_facts = {{"t_is_ep", true},
                 {"t_is_hypo_ep", true},
                 {"schur_is_hypo_ep", true},
                 {"d_is_hypo_ep", true},
                 {"rb_in_rschur", false},
                 {"rcstar_in_rschurstar", false},
                 {"aug_lower_is_hypo_ep", false},
                 {"aug_upper_is_hypo_ep", false}};
  detail::finish_case(lc);
  return lc;
}

// Literal-D variant of ex4: core D rows read (2 x4, x3 + x4). The shorted
// operator comes out the same, -x2 e2, because B reads only y3 + y4 and both
// D variants force y3 + y4 = -(x1 + x2).
inline LabeledCase ex4_rank_literal(int dim, int margin) {
  if (dim < 8) throw InvalidInput("ex4_rank_literal: dim must be >= 8");
  LabeledCase lc;
  lc.name = "ex4_rank_literal";
  lc.dim = dim;
  lc.interior_margin = margin;
  Mat t = detail_ex4::skeleton(dim);
  t(2, 3) = 2.0;  // row 3 of D: 2 x4
  t(3, 2) = 1.0;  // row 4 of D: x3 + x4
  t(3, 3) = 1.0;
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::contiguous(0, 2));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim](const Vec& x) {
    Vec z = Vec::Zero(dim);
    z(1) = -x(1);
    return z;
  };
  detail::finish_case(lc);
  return lc;
}

// l2 (+) l2 sum with A lower bidiagonal and B = C = D forward shifts.
// The compressed Schur complement is exactly diag(1, 1/2, 2/3, ...). All
// hypo-EP flags of the transfer theorem hold. T itself is hypo-EP but not
// EP: T is injective while T* kills (0, e1), so R(T*) cannot sit inside
// R(T); the reverse masked inclusion fails with defect 1 at every section
// size. Truncation additionally introduces a spurious kernel direction at
// the boundary, handled by the interior mask.
inline LabeledCase hypoep_sum(int dim, int margin) {
  if (dim < 12 || dim % 2 != 0)
    throw InvalidInput("hypoep_sum: dim must be even and >= 12");
  const int q = dim / 2;
  LabeledCase lc;
  lc.name = "hypoep_sum";
  lc.dim = dim;
  lc.interior_margin = margin;
  lc.two_leg = true;
  Mat t = Mat::Zero(dim, dim);
  t(0, 0) = 1.0;  // A
  for (int j = 2; j <= q; ++j) {
    t(j - 1, j - 2) = 1.0;
    t(j - 1, j - 1) = double(j - 1) / double(j);
  }
  for (int j = 2; j <= q; ++j) {
    t(j - 1, q + j - 2) = 1.0;      // B
    t(q + j - 1, j - 2) = 1.0;      // C
    t(q + j - 1, q + j - 2) = 1.0;  // D
  }
  lc.t = t;
  lc.m = Subspace::coords(dim, detail::contiguous(0, q));
  lc.n = lc.m;
  lc.expected_verdict = Verdict::Complementable;
  lc.schur_action = [dim, q](const Vec& x) {
    Vec z = Vec::Zero(dim);
    z(0) = x(0);
    for (int j = 2; j <= q; ++j) z(j - 1) = (double(j - 1) / double(j)) * x(j - 1);
    return z;
  };
  lc.ep_facts = {{"t_is_ep", false},
                 {"t_is_hypo_ep", true},
                 {"schur_is_hypo_ep", true},
                 {"d_is_hypo_ep", true},
                 {"rb_in_rschur", true},
                 {"rcstar_in_rschurstar", true},
                 {"aug_lower_is_hypo_ep", true},
                 {"aug_upper_is_hypo_ep", true}};
  detail::finish_case(lc);
  return lc;
}

}  // namespace cases

inline LabeledCase make_example(const std::string& name, int dim,
                                int interior_margin = 4) {
  if (dim < 8) throw InvalidInput("make_example: dim must be >= 8");
  if (name == "eqgm_banded") return cases::eqgm_banded(dim, interior_margin);
  if (name == "nonclosed_pairs") return cases::nonclosed_pairs(dim, interior_margin);
  if (name == "ex5_shift") return cases::ex5_shift(dim, interior_margin);
  if (name == "ex6_band") return cases::ex6_band(dim, interior_margin);
  if (name == "ex1_diag") return cases::ex1_diag(dim, interior_margin);
  if (name == "ex3_rank") return cases::ex3_rank(dim, interior_margin);
  if (name == "ex4_rank") return cases::ex4_rank(dim, interior_margin);
  if (name == "ex4_rank_literal") return cases::ex4_rank_literal(dim, interior_margin);
  if (name == "hypoep_sum") return cases::hypoep_sum(dim, interior_margin);
  throw InvalidInput("make_example: unknown case name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Seeded engineered generators
// ---------------------------------------------------------------------------

namespace rnd {

inline Mat cgaussian(Eigen::Index rows, Eigen::Index cols,
                     std::mt19937_64& eng) {
  std::normal_distribution<double> n01;
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m(i, j) = Cplx(n01(eng), n01(eng)) / std::sqrt(2.0);
  return m;
}

inline Mat random_unitary(Eigen::Index n, std::mt19937_64& eng) {
  if (n == 0) return Mat(0, 0);
  Eigen::HouseholderQR<Mat> qr(cgaussian(n, n, eng));
  return Mat(qr.householderQ());
}

// Rank-r matrix with singular values drawn from [0.5, 2]: well conditioned
// on its range so downstream rank decisions are unambiguous.
inline Mat rank_matrix(Eigen::Index rows, Eigen::Index cols, int rank,
                       std::mt19937_64& eng) {
  if (rank == 0) return Mat::Zero(rows, cols);
  Mat u = random_unitary(rows, eng).leftCols(rank);
  Mat v = random_unitary(cols, eng).leftCols(rank);
  std::uniform_real_distribution<double> uni(0.5, 2.0);
  RealVec s(rank);
  for (int i = 0; i < rank; ++i) s(i) = uni(eng);
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return u * s.asDiagonal() * v.adjoint();
}

inline double inv_sqrt_dim(Eigen::Index n) {
  return 1.0 / std::sqrt(double(std::max<Eigen::Index>(n, 1)));
}

}  // namespace rnd

// Engineered complementable case: D of prescribed rank, C = D Z0, B = Y0 D,
// A free, conjugated by random unitaries. The exact compressed Schur
// complement A - Y0 D Z0 is retained as an oracle.
inline LabeledCase random_complementable(int dom, int cod, int dim_m,
                                         int dim_n, int rank_d,
                                         std::uint64_t seed) {
  if (dim_m < 0 || dim_m > dom || dim_n < 0 || dim_n > cod)
    throw InvalidInput("random_complementable: inconsistent dimensions");
  const int qm = dom - dim_m, qn = cod - dim_n;
  if (rank_d < 0 || rank_d > std::min(qm, qn))
    throw InvalidInput("random_complementable: rank_d out of range");
  std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ULL);
  Mat d = rnd::rank_matrix(qn, qm, rank_d, eng);
  Mat z0 = rnd::cgaussian(qm, dim_m, eng) * rnd::inv_sqrt_dim(qm);
  Mat y0 = rnd::cgaussian(dim_n, qn, eng) * rnd::inv_sqrt_dim(qn);
  Mat a = rnd::cgaussian(dim_n, dim_m, eng);
  Mat udom = rnd::random_unitary(dom, eng);
  Mat vcod = rnd::random_unitary(cod, eng);

  BlockOp blk;
  blk.m = {dom, udom.leftCols(dim_m)};
  blk.mperp = {dom, udom.rightCols(qm)};
  blk.n = {cod, vcod.leftCols(dim_n)};
  blk.nperp = {cod, vcod.rightCols(qn)};
  blk.a = a;
  blk.b = y0 * d;
  blk.c = d * z0;
  blk.d = d;

  LabeledCase lc;
  lc.name = "random_complementable";
  lc.dim = dom;
  lc.t = reassemble(blk);
  lc.m = blk.m;
  lc.n = blk.n;
  lc.expected_verdict = Verdict::Complementable;
  Mat s_expected = a - y0 * (d * z0);
  lc.expected_compressed = s_expected;
  Mat mb = blk.m.basis, nb = blk.n.basis;
  lc.schur_action = [mb, nb, s_expected](const Vec& x) {
    return Vec(nb * (s_expected * (mb.adjoint() * x)));
  };
  lc.interior_margin = 0;
  lc.mask.dom = RealVec::Ones(dom);
  lc.mask.cod = RealVec::Ones(cod);
  return lc;
}

// Engineered case for the block Moore-Penrose factorization. The compressed
// Schur complement equals a prescribed rank_s matrix S; violate = 0 keeps
// both range hypotheses, violate = 1 breaks R(C*) within R(S*) only,
// violate = 2 breaks R(B) within R(S) only (complementability always holds).
struct BlockPinvCase {
  Mat t;
  Subspace m, n;
  int violated = 0;
  Mat s;  // the engineered compressed Schur complement
};

inline BlockPinvCase random_blockpinv_case(int dom, int cod, int dim_m,
                                           int dim_n, int rank_d, int rank_s,
                                           std::uint64_t seed, int violate) {
  if (dim_m <= 0 || dim_m >= dom || dim_n <= 0 || dim_n >= cod)
    throw InvalidInput("random_blockpinv_case: inconsistent dimensions");
  const int qm = dom - dim_m, qn = cod - dim_n;
  if (rank_d < 1 || rank_d > std::min(qm, qn))
    throw InvalidInput("random_blockpinv_case: rank_d out of range");
  if (rank_s < 1 || rank_s > std::min(dim_m, dim_n))
    throw InvalidInput("random_blockpinv_case: rank_s out of range");
  if (violate == 1 && rank_s >= dim_m)
    throw InvalidInput("random_blockpinv_case: violate=1 needs rank_s < dim_m");
  if (violate == 2 && rank_s >= dim_n)
    throw InvalidInput("random_blockpinv_case: violate=2 needs rank_s < dim_n");
  std::mt19937_64 eng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  Mat d = rnd::rank_matrix(qn, qm, rank_d, eng);
  Mat s = rnd::rank_matrix(dim_n, dim_m, rank_s, eng);
  Mat z0 = rnd::cgaussian(qm, dim_n, eng) * rnd::inv_sqrt_dim(qm) * s;
  Mat y0 = s * rnd::cgaussian(dim_m, qn, eng) * rnd::inv_sqrt_dim(qn);
  if (violate == 1) {
    Vec p = null_of(s).basis.col(0);          // outside R(S*)
    SvdFactors fd = svd(d);
    Vec w = fd.vh.row(0).adjoint();           // D w = sigma_1 u_1 != 0
    z0 += w * p.adjoint();
  } else if (violate == 2) {
    Vec p = null_of(s.adjoint()).basis.col(0);  // outside R(S)
    SvdFactors fd = svd(d);
    Vec w = fd.u.col(0);                        // D* w = sigma_1 v_1 != 0
    y0 += p * w.adjoint();
  }
  Mat udom = rnd::random_unitary(dom, eng);
  Mat vcod = rnd::random_unitary(cod, eng);
  BlockOp blk;
  blk.m = {dom, udom.leftCols(dim_m)};
  blk.mperp = {dom, udom.rightCols(qm)};
  blk.n = {cod, vcod.leftCols(dim_n)};
  blk.nperp = {cod, vcod.rightCols(qn)};
  blk.a = s + y0 * (d * z0);
  blk.b = y0 * d;
  blk.c = d * z0;
  blk.d = d;
  return {reassemble(blk), blk.m, blk.n, violate, s};
}

// Engineered square case for the EP equivalence suite with M = N and the
// hypothesis R(C*) within R(S*) built in. flavor 0: Hermitian T (hypo-EP
// side true); flavor 1: generic with both range conditions; flavor 2:
// generic with R(B) within R(S) broken (hypo-EP side comes out false).
struct EPSuiteCase {
  Mat t;
  Subspace m;
  int flavor = 0;
};

inline EPSuiteCase random_ep_case(int dim, int dim_m, int rank_d, int rank_s,
                                  std::uint64_t seed, int flavor) {
  if (dim_m <= 0 || dim_m >= dim)
    throw InvalidInput("random_ep_case: inconsistent dimensions");
  const int q = dim - dim_m;
  if (rank_d < 1 || rank_d > q || rank_s < 1 || rank_s > dim_m)
    throw InvalidInput("random_ep_case: rank out of range");
  if (flavor == 2 && rank_s >= dim_m)
    throw InvalidInput("random_ep_case: flavor=2 needs rank_s < dim_m");
  std::mt19937_64 eng(seed ^ 0x165667b19e3779f9ULL);
  Mat d, s, z0, y0;
  std::uniform_real_distribution<double> uni(0.5, 2.0);
  if (flavor == 0) {
    Mat qd = rnd::random_unitary(q, eng).leftCols(rank_d);
    RealVec sd(rank_d);
    for (int i = 0; i < rank_d; ++i) sd(i) = uni(eng) * (i % 2 ? -1.0 : 1.0);
    d = qd * sd.asDiagonal() * qd.adjoint();  // Hermitian, rank rank_d
    Mat qs = rnd::random_unitary(dim_m, eng).leftCols(rank_s);
    RealVec ss(rank_s);
    for (int i = 0; i < rank_s; ++i) ss(i) = uni(eng) * (i % 2 ? -1.0 : 1.0);
    s = qs * ss.asDiagonal() * qs.adjoint();  // Hermitian
    z0 = rnd::cgaussian(q, dim_m, eng) * rnd::inv_sqrt_dim(q) * s;
    y0 = z0.adjoint();  // forces B = C*, hence T = T*
  } else {
    d = rnd::rank_matrix(q, q, rank_d, eng);
    s = rnd::rank_matrix(dim_m, dim_m, rank_s, eng);
    z0 = rnd::cgaussian(q, dim_m, eng) * rnd::inv_sqrt_dim(q) * s;
    if (flavor == 1)
      y0 = s * rnd::cgaussian(dim_m, q, eng) * rnd::inv_sqrt_dim(q);
    else
      y0 = rnd::cgaussian(dim_m, q, eng) * rnd::inv_sqrt_dim(q);
  }
  Mat u = rnd::random_unitary(dim, eng);
  BlockOp blk;
  blk.m = {dim, u.leftCols(dim_m)};
  blk.mperp = {dim, u.rightCols(q)};
  blk.n = blk.m;
  blk.nperp = blk.mperp;
  blk.a = s + y0 * (d * z0);
  blk.b = y0 * d;
  blk.c = d * z0;
  blk.d = d;
  return {reassemble(blk), blk.m, flavor};
}

}  // namespace shorted
