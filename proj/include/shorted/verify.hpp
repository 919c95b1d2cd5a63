#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>

#include "shorted/corpus.hpp"

namespace shorted {

struct CheckItem {
  std::string what;
  bool ok = false;
  double value = 0.0;  // the defect/residual that was compared
};

struct CaseReport {
  std::string name;
  int dim = 0;
  std::vector<CheckItem> items;
  bool ok() const {
    for (const CheckItem& it : items)
      if (!it.ok) return false;
    return true;
  }
};

namespace detail {

inline void push(CaseReport& rep, const std::string& what, bool ok,
                 double value) {
  rep.items.push_back({what, ok, value});
}

// Masked relative deviation of the computed shorted action from the closed
// form, maximized over the basis of M and a few seeded combinations.
inline double action_defect(const LabeledCase& lc, const Mat& schur_ambient) {
  std::mt19937_64 eng(0x5eedful + lc.dim);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  auto probe_vec = [&](const Vec& x) {
    Vec got = schur_ambient * x;
    Vec want = lc.schur_action(x);
    Vec diff = lc.mask.cod.asDiagonal() * (got - want);
    worst = std::max(worst, diff.norm() / (1.0 + x.norm()));
  };
  for (int k = 0; k < lc.m.dim(); ++k) probe_vec(lc.m.basis.col(k));
  for (int t = 0; t < 5; ++t) {
    Vec g(lc.m.dim());
    for (int i = 0; i < lc.m.dim(); ++i) g(i) = Cplx(n01(eng), n01(eng));
    if (g.norm() > 0) g /= g.norm();
    probe_vec(Vec(lc.m.basis * g));
  }
  return worst;
}

}  // namespace detail

// Checks every expectation recorded on a labeled case. Fixed regression
// tolerances: 1e-10 for closed-form actions, 1e-9 for route agreement and
// probe/action coherence (these mirror the advertised accuracy contract and
// are deliberately independent of the user-facing TolPolicy).
inline CaseReport verify_case(const LabeledCase& lc, const TolPolicy& tol = {}) {
  CaseReport rep;
  rep.name = lc.name;
  rep.dim = lc.dim;
  BlockOp blk = decompose(lc.t, lc.m, lc.n, tol);
  ComplementabilityReport crep = check_complementable(blk, tol, &lc.mask);
  detail::push(rep, "verdict is " + std::string(to_string(lc.expected_verdict)),
               crep.verdict == lc.expected_verdict, crep.rc_in_rd.defect);

  if (lc.expected_verdict == Verdict::Complementable &&
      crep.verdict == Verdict::Complementable) {
    SchurResult right = schur(blk, SchurRoute::Right, tol);
    SchurResult left = schur(blk, SchurRoute::Left, tol);
    SchurResult pv = schur(blk, SchurRoute::Pinv, tol);
    SchurResult polar = schur(blk, SchurRoute::Polar, tol);
    const double scale = 1.0 + operator_norm(right.compressed);
    for (const SchurResult* other : {&left, &pv, &polar}) {
      const double dev =
          operator_norm(right.compressed - other->compressed) / scale;
      detail::push(rep,
                   std::string("route agreement right vs ") +
                       to_string(other->route),
                   dev <= 1e-9, dev);
    }
    if (lc.schur_action) {
      const double defect = detail::action_defect(lc, right.ambient);
      detail::push(rep, "closed-form action (interior)", defect <= 1e-10,
                   defect);
    }
    if (lc.expected_compressed) {
      const double dev =
          operator_norm(right.compressed - *lc.expected_compressed) / scale;
      detail::push(rep, "engineered compressed Schur", dev <= 1e-9, dev);
    }
    // Probe coherence: Point verdict matching the Schur action.
    std::mt19937_64 eng(0xab5eedULL + lc.dim);
    std::normal_distribution<double> n01;
    for (int t = 0; t < 3; ++t) {
      Vec g(lc.m.dim());
      for (int i = 0; i < lc.m.dim(); ++i) g(i) = Cplx(n01(eng), n01(eng));
      if (g.norm() > 0) g /= g.norm();
      Vec x = lc.m.basis * g;
      ProbeResult pr = singleton_probe(blk, x, 8, 1234 + t, tol);
      bool ok = pr.kind == ProbeResult::Kind::Point;
      double dev = 1.0;
      if (ok) {
        Vec want = right.ambient * x;
        dev = (pr.z - want).norm() / (1.0 + want.norm());
        ok = dev <= 1e-9;
      }
      detail::push(rep, "probe coherence #" + std::to_string(t), ok, dev);
    }
  } else if (lc.expected_verdict != Verdict::Complementable) {
    bool refused = false;
    std::string kind = "none";
    try {
      (void)schur(blk, SchurRoute::Right, tol);
    } catch (const NotComplementableError&) {
      refused = true;
      kind = "NotComplementable";
    } catch (const IllPosedSchurError&) {
      refused = true;
      kind = "IllPosedSchur";
    }
    detail::push(rep, "schur refuses (" + kind + ")", refused, 0.0);
  }

  for (std::size_t i = 0; i < lc.probes.size(); ++i) {
    const ProbeExpectation& pe = lc.probes[i];
    ProbeResult pr = singleton_probe(blk, pe.x, 8, 99 + i, tol);
    bool ok = pr.kind == pe.kind;
    double dev = 0.0;
    if (ok && pe.z) {
      dev = (pr.z - *pe.z).norm() / (1.0 + pe.z->norm());
      ok = dev <= 1e-9;
    }
    detail::push(rep,
                 "probe #" + std::to_string(i) + " is " + to_string(pe.kind),
                 ok, dev);
  }

  if (!lc.ep_facts.empty()) {
    EPReport ep = ep_equivalence_report(lc.t, lc.m, lc.n, tol, &lc.mask);
    auto flag = [&](const std::string& key) -> bool {
      if (key == "t_is_ep") return ep.t_is_ep.ok;
      if (key == "t_is_hypo_ep") return ep.t_is_hypo_ep.ok;
      if (key == "schur_is_hypo_ep") return ep.schur_is_hypo_ep;
      if (key == "d_is_hypo_ep") return ep.d_is_hypo_ep;
      if (key == "rb_in_rschur") return ep.rb_in_rschur;
      if (key == "rcstar_in_rschurstar") return ep.rcstar_in_rschurstar;
      if (key == "aug_lower_is_hypo_ep") return ep.aug_lower_is_hypo_ep;
      if (key == "aug_upper_is_hypo_ep") return ep.aug_upper_is_hypo_ep;
      throw InvalidInput("verify_case: unknown ep fact '" + key + "'");
    };
    for (const auto& [key, want] : lc.ep_facts)
      detail::push(rep, "ep fact " + key + (want ? " true" : " false"),
                   flag(key) == want, 0.0);
    detail::push(rep, "ep equivalences consistent", ep.equivalences_consistent,
                 0.0);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Seeded property suite (the `verify` subcommand)
// ---------------------------------------------------------------------------

struct VerifyOptions {
  int seeds = 50;
  int max_dim = 24;
  std::uint64_t seed = 7;
  TolPolicy tol;
};

struct VerifySummary {
  int checks = 0;
  int failures = 0;
  std::map<std::string, std::pair<int, int>> groups;  // {checks, failures}
  std::vector<std::string> failure_messages;

  void record(const std::string& group, const std::string& what, bool ok) {
    ++checks;
    auto& g = groups[group];
    ++g.first;
    if (!ok) {
      ++failures;
      ++g.second;
      if (failure_messages.size() < 50)
        failure_messages.push_back("[" + group + "] " + what);
    }
  }
};

namespace detail {

inline void record_case(VerifySummary& sum, const std::string& group,
                        const CaseReport& rep) {
  for (const CheckItem& it : rep.items)
    sum.record(group,
               rep.name + "@" + std::to_string(rep.dim) + ": " + it.what +
                   " (value " + std::to_string(it.value) + ")",
               it.ok);
}

}  // namespace detail

inline VerifySummary run_verify(const VerifyOptions& opts,
                                std::ostream* progress = nullptr) {
  VerifySummary sum;
  const TolPolicy& tol = opts.tol;

  // Corpus regressions at a small and a large section.
  for (const std::string& name : corpus_names()) {
    for (int dim : {16, 64}) {
      detail::record_case(sum, "corpus", verify_case(make_example(name, dim), tol));
    }
  }
  if (progress) *progress << "corpus done\n";

  std::mt19937_64 eng(opts.seed * 0x9e3779b97f4a7c15ULL + 1);
  auto draw = [&](int lo, int hi) {
    return lo + static_cast<int>(eng() % std::uint64_t(hi - lo + 1));
  };

  // Engineered complementable cases: routes, Douglas, structure, bounds,
  // probes, Douglas solution properties.
  for (int i = 0; i < opts.seeds; ++i) {
    const int dom = draw(8, std::max(8, opts.max_dim));
    const int cod = draw(8, std::max(8, opts.max_dim));
    const int dim_m = draw(1, dom - 2);
    const int dim_n = draw(1, cod - 2);
    const int maxr = std::min(dom - dim_m, cod - dim_n);
    int rank_d = draw(0, maxr);
    if (i % 7 == 0) rank_d = maxr;  // keep full/zero rank in the mix
    if (i % 11 == 0) rank_d = 0;
    LabeledCase lc = random_complementable(dom, cod, dim_m, dim_n, rank_d,
                                           opts.seed + 1000 + i);
    detail::record_case(sum, "routes", verify_case(lc, tol));

    BlockOp blk = decompose(lc.t, lc.m, lc.n, tol);
    Mat z = douglas_solve(blk.d, blk.c, tol);
    const double dres =
        operator_norm(blk.d * z - blk.c) / (1.0 + operator_norm(blk.c));
    sum.record("douglas", "residual " + std::to_string(dres), dres <= 1e-10);
    InclusionCheck kereq = subspace_equal(null_of(z, tol), null_of(blk.c, tol), tol);
    sum.record("douglas", "N(Z) == N(C), defect " + std::to_string(kereq.defect),
               kereq.ok);
    Subspace ker = null_of(blk.d, tol);
    if (ker.dim() > 0) {
      std::normal_distribution<double> n01;
      for (int t = 0; t < 3; ++t) {
        Mat g(ker.dim(), z.cols());
        for (Eigen::Index cjj = 0; cjj < g.cols(); ++cjj)
          for (Eigen::Index rii = 0; rii < g.rows(); ++rii)
            g(rii, cjj) = Cplx(n01(eng), n01(eng));
        Mat w = ker.basis * g;
        const double dev = operator_norm((blk.a - blk.b * (z + w)) -
                                         (blk.a - blk.b * z)) /
                           (1.0 + operator_norm(blk.a));
        sum.record("douglas", "Z-choice independence " + std::to_string(dev),
                   dev <= 1e-11);
        sum.record("douglas", "minimal norm",
                   operator_norm(z) <= operator_norm(z + w) + 1e-12);
      }
    }

    StructureReport st = verify_structure(lc.t, lc.m, lc.n, tol);
    sum.record("structure", "range identity " + std::to_string(st.range_identity.defect),
               st.range_identity.ok && st.range_identity.defect <= 1e-8);
    sum.record("structure", "null identity " + std::to_string(st.null_identity.defect),
               st.null_identity.ok && st.null_identity.defect <= 1e-8);
    sum.record("structure",
               "factorization " + std::to_string(st.factorization_residual),
               st.factorization_residual <= 1e-11);
    sum.record("structure", "idempotent", st.idempotent);
    sum.record("structure", "adjoint duality", st.adjoint_duality);

    BallBoundReport bb = ball_bound(blk, tol);
    sum.record("bounds", "norm bounds hold", bb.holds);
  }
  if (progress) *progress << "engineered done\n";

  // Explicit complementing subspaces on dense random square operators.
  for (int i = 0; i < std::max(1, opts.seeds / 2); ++i) {
    std::mt19937_64 leng(opts.seed + 5000 + i);
    const int dim = draw(8, std::max(8, opts.max_dim));
    Mat t = rnd::cgaussian(dim, dim, leng);
    if (i % 3 == 0) {
      // rank-deficient square operators exercise the nontrivial preimage
      t = rnd::rank_matrix(dim, dim, std::max(1, dim / 2), leng);
    }
    const int dim_n = draw(1, dim - 1);
    Subspace n{dim, rnd::random_unitary(dim, leng).leftCols(dim_n)};
    ComplementingSubspace cs = complementing_subspace(t, n, tol);
    BlockOp blk = decompose(t, cs.m, n, tol);
    const double bnorm = operator_norm(blk.b) / (1.0 + operator_norm(t));
    sum.record("excomp", "B block vanishes " + std::to_string(bnorm),
               bnorm <= tol.eq_rtol);
    sum.record("excomp", "schur check " + std::to_string(cs.schur_check),
               cs.schur_check <= tol.eq_rtol);
  }
  if (progress) *progress << "excomp done\n";

  // Block Moore-Penrose: positives against the SVD pseudoinverse, violations
  // must raise HypothesisFailed naming the broken inclusion.
  const int half = std::max(1, opts.seeds / 2);
  for (int i = 0; i < half; ++i) {
    const int dom = draw(8, std::max(8, opts.max_dim));
    const int cod = draw(8, std::max(8, opts.max_dim));
    const int dim_m = draw(2, dom - 2);
    const int dim_n = draw(2, cod - 2);
    const int rank_d = draw(1, std::min(dom - dim_m, cod - dim_n));
    const int rank_s = draw(1, std::min(dim_m, dim_n));
    BlockPinvCase pc = random_blockpinv_case(dom, cod, dim_m, dim_n, rank_d,
                                             rank_s, opts.seed + 2000 + i, 0);
    BlockOp blk = decompose(pc.t, pc.m, pc.n, tol);
    Mat tp = block_pinv(blk, tol);
    Mat oracle = pinv(pc.t, tol);
    const double dev = operator_norm(tp - oracle) / (1.0 + operator_norm(oracle));
    sum.record("blockpinv", "matches SVD pinv " + std::to_string(dev),
               dev <= 1e-8);
    const double scale = 1.0 + operator_norm(pc.t);
    const double p1 = operator_norm(pc.t * tp * pc.t - pc.t) / scale;
    const double p2 = operator_norm(tp * pc.t * tp - tp) / scale;
    const double p3 = operator_norm(Mat((pc.t * tp).adjoint()) - pc.t * tp) / scale;
    const double p4 = operator_norm(Mat((tp * pc.t).adjoint()) - tp * pc.t) / scale;
    const double penrose = std::max({p1, p2, p3, p4});
    sum.record("blockpinv", "Penrose residuals " + std::to_string(penrose),
               penrose <= 1e-9);

    const int violate = (i % 2) + 1;
    const int rs_v = std::min(rank_s, (violate == 1 ? dim_m : dim_n) - 1);
    BlockPinvCase vc =
        random_blockpinv_case(dom, cod, dim_m, dim_n, rank_d, std::max(1, rs_v),
                              opts.seed + 3000 + i, violate);
    bool raised = false, named = false;
    try {
      (void)block_pinv(decompose(vc.t, vc.m, vc.n, tol), tol);
    } catch (const HypothesisFailed& e) {
      raised = true;
      named = (violate == 1) ? e.which().find("R(C*)") != std::string::npos
                             : e.which().find("R(B)") != std::string::npos;
    }
    sum.record("blockpinv", "violation raises HypothesisFailed", raised);
    sum.record("blockpinv", "violation names the inclusion", named);
  }
  if (progress) *progress << "blockpinv done\n";

  // EP equivalence suite on square engineered cases with M = N.
  for (int i = 0; i < opts.seeds; ++i) {
    const int dim = draw(8, std::max(8, opts.max_dim));
    const int dim_m = draw(2, dim - 2);
    const int rank_d = draw(1, dim - dim_m);
    const int flavor = i % 3;
    const int rank_s =
        (flavor == 2) ? draw(1, std::max(1, dim_m - 1)) : draw(1, dim_m);
    EPSuiteCase ec =
        random_ep_case(dim, dim_m, rank_d, rank_s, opts.seed + 4000 + i, flavor);
    EPReport ep = ep_equivalence_report(ec.t, ec.m, ec.m, tol);
    sum.record("ep", "hypothesis holds by construction", ep.rcstar_in_rschurstar);
    sum.record("ep", "equivalences consistent", ep.equivalences_consistent);
    if (flavor == 0)
      sum.record("ep", "hermitian case is hypo-EP", ep.t_is_hypo_ep.ok);
    // finite-dimensional coincidence of EP and hypo-EP on T itself
    EPCheck hep = is_hypo_ep(ec.t, tol);
    EPCheck epc = is_ep(ec.t, tol);
    sum.record("ep", "hypo-EP == EP in finite dimension", hep.ok == epc.ok);
  }
  if (progress) *progress << "ep done\n";
  return sum;
}

inline std::string summary_to_text(const VerifySummary& sum) {
  std::ostringstream os;
  for (const auto& [group, counts] : sum.groups)
    os << std::left << std::setw(12) << group << counts.first << " checks, "
       << counts.second << " failures\n";
  os << "total: " << sum.checks << " checks, " << sum.failures << " failures\n";
  for (const std::string& msg : sum.failure_messages) os << "  FAIL " << msg << "\n";
  return os.str();
}

}  // namespace shorted
