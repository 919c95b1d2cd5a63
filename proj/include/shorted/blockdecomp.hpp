#pragma once

#include "shorted/subspace.hpp"

namespace shorted {

// T written against the decompositions dom = M (+) M^perp, cod = N (+) N^perp:
//
//   T = [ A  B ]  with  A : M -> N,        B : M^perp -> N
//       [ C  D ]        C : M -> N^perp,   D : M^perp -> N^perp
//
// a, b, c, d hold the blocks in the orthonormal coordinates of the stored
// bases: a = V_N^* T U_M and so on.
struct BlockOp {
  Subspace m, mperp;  // domain split
  Subspace n, nperp;  // codomain split
  Mat a;              // dim N      x dim M
  Mat b;              // dim N      x dim M^perp
  Mat c;              // dim N^perp x dim M
  Mat d;              // dim N^perp x dim M^perp

  int ambient_dom() const { return m.ambient; }
  int ambient_cod() const { return n.ambient; }
};

inline BlockOp decompose(const Mat& t, const Subspace& m, const Subspace& n,
                         const TolPolicy& tol = {}) {
  (void)tol;
  detail::require_finite(t, "decompose");
  if (static_cast<int>(t.cols()) != m.ambient)
    throw InvalidInput("decompose: domain of t does not match ambient of M");
  if (static_cast<int>(t.rows()) != n.ambient)
    throw InvalidInput("decompose: codomain of t does not match ambient of N");
  BlockOp blk;
  blk.m = m;
  blk.mperp = complement(m);
  blk.n = n;
  blk.nperp = complement(n);
  const Mat tm = t * blk.m.basis;
  const Mat tmp = t * blk.mperp.basis;
  blk.a = blk.n.basis.adjoint() * tm;
  blk.b = blk.n.basis.adjoint() * tmp;
  blk.c = blk.nperp.basis.adjoint() * tm;
  blk.d = blk.nperp.basis.adjoint() * tmp;
  return blk;
}

// Inverse of decompose: T = [V_N V_Nperp] [[a,b],[c,d]] [U_M U_Mperp]^*.
inline Mat reassemble(const BlockOp& blk) {
  return blk.n.basis * blk.a * blk.m.basis.adjoint() +
         blk.n.basis * blk.b * blk.mperp.basis.adjoint() +
         blk.nperp.basis * blk.c * blk.m.basis.adjoint() +
         blk.nperp.basis * blk.d * blk.mperp.basis.adjoint();
}

// Blocks of T^* against the swapped decomposition (N, M): the adjoint of the
// (M,N) block matrix is [[a^*, c^*], [b^*, d^*]].
inline BlockOp adjoint_blocks(const BlockOp& blk) {
  BlockOp out;
  out.m = blk.n;
  out.mperp = blk.nperp;
  out.n = blk.m;
  out.nperp = blk.mperp;
  out.a = blk.a.adjoint();
  out.b = blk.c.adjoint();
  out.c = blk.b.adjoint();
  out.d = blk.d.adjoint();
  return out;
}

// Embed a compressed block (written in the given coordinate bases) back into
// the ambient space, padding the complementary blocks with zeros.
inline Mat embed_compressed(const Mat& compressed, const Subspace& row_space,
                            const Subspace& col_space) {
  if (compressed.rows() != row_space.dim() || compressed.cols() != col_space.dim())
    throw InvalidInput("embed_compressed: block shape does not match bases");
  return row_space.basis * compressed * col_space.basis.adjoint();
}

}  // namespace shorted
