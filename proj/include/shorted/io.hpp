#pragma once

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "shorted/corpus.hpp"

namespace shorted {

using json = nlohmann::json;

// MatrixFile: { "rows": r, "cols": c, "complex": bool,
//               "data": row-major entries, each [re, im] or a bare real }
inline json matrix_to_json(const Mat& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"complex", true},
              {"data", std::move(data)}};
}

inline Mat matrix_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("matrix: not a JSON object");
  for (const char* field : {"rows", "cols", "data"})
    if (!j.contains(field))
      throw InvalidInput(std::string("matrix: missing field '") + field + "'");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw InvalidInput("matrix: fields 'rows'/'cols' must be integers");
  const long rows = j["rows"].get<long>(), cols = j["cols"].get<long>();
  if (rows < 0 || cols < 0)
    throw InvalidInput("matrix: fields 'rows'/'cols' must be non-negative");
  const json& data = j["data"];
  if (!data.is_array() ||
      static_cast<long>(data.size()) != rows * cols)
    throw InvalidInput("matrix: field 'data' must hold rows*cols entries");
  Mat m(rows, cols);
  long k = 0;
  for (long i = 0; i < rows; ++i) {
    for (long jj = 0; jj < cols; ++jj, ++k) {
      const json& e = data[k];
      double re, im = 0.0;
      if (e.is_number()) {
        re = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        re = e[0].get<double>();
        im = e[1].get<double>();
      } else {
        throw InvalidInput("matrix: data[" + std::to_string(k) +
                           "] must be a number or an [re, im] pair");
      }
      if (!std::isfinite(re) || !std::isfinite(im))
        throw InvalidInput("matrix: data[" + std::to_string(k) +
                           "] is not finite");
      m(i, jj) = Cplx(re, im);
    }
  }
  return m;
}

// SubspaceFile: { "ambient": n, "basis": MatrixFile } -- spanning columns,
// orthonormalized on load.
inline json subspace_to_json(const Subspace& s) {
  return json{{"ambient", s.ambient}, {"basis", matrix_to_json(s.basis)}};
}

inline Subspace subspace_from_json(const json& j, const TolPolicy& tol = {}) {
  if (!j.is_object()) throw InvalidInput("subspace: not a JSON object");
  if (!j.contains("ambient") || !j["ambient"].is_number_integer())
    throw InvalidInput("subspace: missing integer field 'ambient'");
  if (!j.contains("basis"))
    throw InvalidInput("subspace: missing field 'basis'");
  const int ambient = j["ambient"].get<int>();
  if (ambient < 0) throw InvalidInput("subspace: field 'ambient' negative");
  Mat basis = matrix_from_json(j["basis"]);
  if (basis.rows() != ambient)
    throw InvalidInput("subspace: field 'basis' rows do not match 'ambient'");
  return from_spanning(basis, tol);
}

inline json vector_to_json(const Vec& v) { return matrix_to_json(v); }

inline Vec vector_from_json(const json& j) {
  Mat m = matrix_from_json(j);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw InvalidInput("vector: expected a single row or column");
}

// --------------------------------------------------------------------------
// Report serialization
// --------------------------------------------------------------------------

inline json inclusion_to_json(const InclusionCheck& c) {
  return json{{"ok", c.ok}, {"defect", c.defect}};
}

inline json complementability_to_json(const ComplementabilityReport& r) {
  return json{{"rc_in_rd", inclusion_to_json(r.rc_in_rd)},
              {"rbstar_in_rdstar", inclusion_to_json(r.rbstar_in_rdstar)},
              {"nd_in_nb", inclusion_to_json(r.nd_in_nb)},
              {"weakly_coincides", r.weakly_coincides},
              {"verdict", to_string(r.verdict)}};
}

inline json schur_to_json(const SchurResult& s, bool include_factors = false) {
  json j{{"route", to_string(s.route)},
         {"compressed", matrix_to_json(s.compressed)},
         {"ambient", matrix_to_json(s.ambient)}};
  if (include_factors) {
    if (s.z) j["z"] = matrix_to_json(*s.z);
    if (s.y) j["y"] = matrix_to_json(*s.y);
    if (s.e) j["e"] = matrix_to_json(*s.e);
    if (s.f) j["f"] = matrix_to_json(*s.f);
    if (s.u_polar) j["u_polar"] = matrix_to_json(*s.u_polar);
  }
  return j;
}

inline json probe_to_json(const ProbeResult& p) {
  json j{{"kind", to_string(p.kind)}, {"residual", p.residual}};
  if (p.kind == ProbeResult::Kind::Point) j["z"] = vector_to_json(p.z);
  return j;
}

inline json ball_to_json(const BallBoundReport& b) {
  return json{{"lambda_star", b.lambda_star},
              {"bound_right", b.bound_right},
              {"lambda_star_left", b.lambda_star_left},
              {"bound_left", b.bound_left},
              {"holds", b.holds}};
}

inline json structure_to_json(const StructureReport& s) {
  return json{{"range_identity", inclusion_to_json(s.range_identity)},
              {"null_identity", inclusion_to_json(s.null_identity)},
              {"factorization_residual", s.factorization_residual},
              {"idempotent", s.idempotent},
              {"idempotency_residual", s.idempotency_residual},
              {"adjoint_duality", s.adjoint_duality},
              {"adjoint_residual", s.adjoint_residual}};
}

inline json ep_check_to_json(const EPCheck& c) {
  return json{{"ok", c.ok}, {"defect", c.defect}};
}

inline json ep_report_to_json(const EPReport& r) {
  return json{{"t_is_ep", ep_check_to_json(r.t_is_ep)},
              {"t_is_hypo_ep", ep_check_to_json(r.t_is_hypo_ep)},
              {"schur_is_hypo_ep", r.schur_is_hypo_ep},
              {"d_is_hypo_ep", r.d_is_hypo_ep},
              {"rb_in_rschur", r.rb_in_rschur},
              {"rcstar_in_rschurstar", r.rcstar_in_rschurstar},
              {"aug_lower_is_hypo_ep", r.aug_lower_is_hypo_ep},
              {"aug_upper_is_hypo_ep", r.aug_upper_is_hypo_ep},
              {"equivalences_consistent", r.equivalences_consistent}};
}

inline json blocks_to_json(const BlockOp& blk) {
  return json{{"dim_m", blk.m.dim()},
              {"dim_mperp", blk.mperp.dim()},
              {"dim_n", blk.n.dim()},
              {"dim_nperp", blk.nperp.dim()},
              {"a", matrix_to_json(blk.a)},
              {"b", matrix_to_json(blk.b)},
              {"c", matrix_to_json(blk.c)},
              {"d", matrix_to_json(blk.d)}};
}

inline json case_meta_to_json(const LabeledCase& lc) {
  return json{{"name", lc.name},
              {"dim", lc.dim},
              {"expected_verdict", to_string(lc.expected_verdict)},
              {"interior_margin", lc.interior_margin},
              {"two_leg", lc.two_leg}};
}

// --------------------------------------------------------------------------
// Files
// --------------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput("cannot parse " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace shorted
