// Command-line front end for the shorted-operator library.
//
// Inputs are JSON files (MatrixFile / SubspaceFile, see io.hpp) or a named
// corpus case selected with --name/--dim. Reports go to stdout (one JSON
// document per invocation with --format json), diagnostics to stderr.
// Exit codes: 0 success, 1 negative verdict or property violation,
// 2 malformed input.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "shorted/io.hpp"
#include "shorted/verify.hpp"

namespace {

using namespace shorted;

struct Ctx {
  TolPolicy tol;
  std::string format = "json";
};

// Renders a JSON report as indented key/value text.
void print_text(std::ostream& os, const json& j, int indent) {
  const std::string pad(2 * indent, ' ');
  if (j.is_object()) {
    for (const auto& [key, val] : j.items()) {
      if (val.is_object() || (val.is_array() && !val.empty() &&
                              (val[0].is_object() || val[0].is_array()))) {
        os << pad << key << ":\n";
        print_text(os, val, indent + 1);
      } else {
        os << pad << key << ": " << val.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const json& item : j) {
      if (item.is_object() || item.is_array()) {
        print_text(os, item, indent);
        os << "\n";
      } else {
        os << pad << item.dump() << "\n";
      }
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

void emit(const Ctx& ctx, const json& j) {
  if (ctx.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    print_text(std::cout, j, 0);
}

int emit_negative(const Ctx& ctx, const std::string& kind,
                  const std::string& message) {
  emit(ctx, json{{"error", {{"kind", kind}, {"message", message}}}});
  std::cerr << kind << ": " << message << "\n";
  return 1;
}

// Problem loading: either three positional files (T, M, N) or a corpus case.
struct ProblemArgs {
  std::string t_path, m_path, n_path;
  std::string name;
  int dim = 32;
};

struct Problem {
  Mat t;
  Subspace m{0, Mat(0, 0)}, n{0, Mat(0, 0)};
  std::optional<AmbientMask> mask;  // set in corpus mode
};

void add_problem_options(CLI::App* sub, ProblemArgs& args) {
  sub->add_option("t", args.t_path, "operator MatrixFile (T.json)");
  sub->add_option("m", args.m_path, "domain SubspaceFile (M.json)");
  sub->add_option("n", args.n_path, "codomain SubspaceFile (N.json)");
  sub->add_option("--name", args.name, "corpus case instead of files");
  sub->add_option("--dim", args.dim, "corpus section dimension")
      ->check(CLI::PositiveNumber);
}

Problem load_problem(const ProblemArgs& args, const Ctx& ctx) {
  Problem p;
  if (!args.name.empty()) {
    if (!args.t_path.empty())
      throw InvalidInput("give either files or --name, not both");
    LabeledCase lc = make_example(args.name, args.dim);
    p.t = lc.t;
    p.m = lc.m;
    p.n = lc.n;
    p.mask = lc.mask;
    return p;
  }
  if (args.t_path.empty() || args.m_path.empty() || args.n_path.empty())
    throw InvalidInput("expected T.json M.json N.json (or --name/--dim)");
  p.t = matrix_from_json(read_json_file(args.t_path));
  p.m = subspace_from_json(read_json_file(args.m_path), ctx.tol);
  p.n = subspace_from_json(read_json_file(args.n_path), ctx.tol);
  return p;
}

const AmbientMask* mask_ptr(const Problem& p) {
  return p.mask ? &*p.mask : nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  Ctx ctx;
  CLI::App app{"Finite-dimensional shorted operators: complementability, "
               "Schur complements, block pseudoinverses, EP classification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol-rank", ctx.tol.rank_rtol, "relative rank cutoff")
      ->capture_default_str();
  app.add_option("--tol-eq", ctx.tol.eq_rtol, "relative equality tolerance")
      ->envname("SHORTED_TOL_EQ")
      ->capture_default_str();
  app.add_option("--format", ctx.format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  ProblemArgs pa;
  int exit_code = 0;

  auto* cmd_decompose =
      app.add_subcommand("decompose", "block decomposition of T wrt (M, N)");
  add_problem_options(cmd_decompose, pa);
  cmd_decompose->callback([&] {
    Problem p = load_problem(pa, ctx);
    emit(ctx, blocks_to_json(decompose(p.t, p.m, p.n, ctx.tol)));
  });

  auto* cmd_check =
      app.add_subcommand("check", "complementability verdict for (M, N)");
  add_problem_options(cmd_check, pa);
  cmd_check->callback([&] {
    Problem p = load_problem(pa, ctx);
    BlockOp blk = decompose(p.t, p.m, p.n, ctx.tol);
    ComplementabilityReport rep =
        check_complementable(blk, ctx.tol, mask_ptr(p));
    emit(ctx, complementability_to_json(rep));
    if (rep.verdict != Verdict::Complementable) exit_code = 1;
  });

  auto* cmd_schur =
      app.add_subcommand("schur", "bilateral shorted operator T_/(M,N)");
  add_problem_options(cmd_schur, pa);
  std::string route_name = "right";
  bool unsafe = false, factors = false;
  cmd_schur->add_option("--route", route_name, "computation route")
      ->check(CLI::IsMember({"right", "left", "pinv", "polar"}))
      ->capture_default_str();
  cmd_schur->add_flag("--unsafe", unsafe, "skip the complementability gate");
  cmd_schur->add_flag("--factors", factors, "include route factors in output");
  cmd_schur->callback([&] {
    Problem p = load_problem(pa, ctx);
    SchurRoute route = SchurRoute::Right;
    if (route_name == "left") route = SchurRoute::Left;
    if (route_name == "pinv") route = SchurRoute::Pinv;
    if (route_name == "polar") route = SchurRoute::Polar;
    BlockOp blk = decompose(p.t, p.m, p.n, ctx.tol);
    try {
      SchurResult s = schur(blk, route, ctx.tol, unsafe, mask_ptr(p));
      emit(ctx, schur_to_json(s, factors));
    } catch (const NotComplementableError& e) {
      exit_code = emit_negative(ctx, "NotComplementable", e.what());
    } catch (const IllPosedSchurError& e) {
      exit_code = emit_negative(ctx, "IllPosedSchur", e.what());
    }
  });

  auto* cmd_probe =
      app.add_subcommand("probe", "singleton probe of the shorted set at x");
  add_problem_options(cmd_probe, pa);
  std::string x_path;
  int trials = 8;
  std::uint64_t probe_seed = 0;
  cmd_probe->add_option("--x", x_path, "probe vector (MatrixFile, one column)")
      ->required();
  cmd_probe->add_option("--trials", trials, "kernel perturbation trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_probe->add_option("--seed", probe_seed, "perturbation seed")
      ->capture_default_str();
  cmd_probe->callback([&] {
    Problem p = load_problem(pa, ctx);
    Vec x = vector_from_json(read_json_file(x_path));
    BlockOp blk = decompose(p.t, p.m, p.n, ctx.tol);
    ProbeResult pr = singleton_probe(blk, x, trials, probe_seed, ctx.tol);
    emit(ctx, probe_to_json(pr));
  });

  auto* cmd_bounds =
      app.add_subcommand("bounds", "norm bounds for the Douglas solutions");
  add_problem_options(cmd_bounds, pa);
  cmd_bounds->callback([&] {
    Problem p = load_problem(pa, ctx);
    BlockOp blk = decompose(p.t, p.m, p.n, ctx.tol);
    try {
      emit(ctx, ball_to_json(ball_bound(blk, ctx.tol)));
    } catch (const NotComplementableError& e) {
      exit_code = emit_negative(ctx, "NotComplementable", e.what());
    } catch (const IllPosedSchurError& e) {
      exit_code = emit_negative(ctx, "IllPosedSchur", e.what());
    }
  });

  auto* cmd_structure =
      app.add_subcommand("structure", "range/null/factorization identities");
  add_problem_options(cmd_structure, pa);
  cmd_structure->callback([&] {
    Problem p = load_problem(pa, ctx);
    try {
      emit(ctx, structure_to_json(verify_structure(p.t, p.m, p.n, ctx.tol)));
    } catch (const NotComplementableError& e) {
      exit_code = emit_negative(ctx, "NotComplementable", e.what());
    } catch (const IllPosedSchurError& e) {
      exit_code = emit_negative(ctx, "IllPosedSchur", e.what());
    }
  });

  auto* cmd_pinv =
      app.add_subcommand("pinv-block", "block formula for the Moore-Penrose inverse");
  add_problem_options(cmd_pinv, pa);
  cmd_pinv->callback([&] {
    Problem p = load_problem(pa, ctx);
    BlockOp blk = decompose(p.t, p.m, p.n, ctx.tol);
    try {
      Mat tp = block_pinv(blk, ctx.tol);
      emit(ctx, json{{"pinv", matrix_to_json(tp)}});
    } catch (const HypothesisFailed& e) {
      emit(ctx, json{{"error",
                      {{"kind", "HypothesisFailed"},
                       {"which", e.which()},
                       {"defect", e.defect()},
                       {"message", e.what()}}}});
      std::cerr << "HypothesisFailed: " << e.what() << "\n";
      exit_code = 1;
    } catch (const NotComplementableError& e) {
      exit_code = emit_negative(ctx, "NotComplementable", e.what());
    } catch (const IllPosedSchurError& e) {
      exit_code = emit_negative(ctx, "IllPosedSchur", e.what());
    }
  });

  auto* cmd_classify = app.add_subcommand("classify", "EP / hypo-EP flags");
  std::string classify_path;
  cmd_classify->add_option("t", classify_path, "operator MatrixFile")
      ->required();
  cmd_classify->callback([&] {
    Mat t = matrix_from_json(read_json_file(classify_path));
    emit(ctx, json{{"is_ep", ep_check_to_json(is_ep(t, ctx.tol))},
                   {"is_hypo_ep", ep_check_to_json(is_hypo_ep(t, ctx.tol))}});
  });

  auto* cmd_ep =
      app.add_subcommand("ep-report", "EP equivalences through the shorted operator");
  add_problem_options(cmd_ep, pa);
  cmd_ep->callback([&] {
    Problem p = load_problem(pa, ctx);
    try {
      EPReport rep =
          ep_equivalence_report(p.t, p.m, p.n, ctx.tol, mask_ptr(p));
      emit(ctx, ep_report_to_json(rep));
      if (!rep.equivalences_consistent) exit_code = 1;
    } catch (const NotComplementableError& e) {
      exit_code = emit_negative(ctx, "NotComplementable", e.what());
    } catch (const IllPosedSchurError& e) {
      exit_code = emit_negative(ctx, "IllPosedSchur", e.what());
    }
  });

  auto* cmd_corpus =
      app.add_subcommand("corpus", "named finite sections with expectations");
  std::string corpus_name;
  int corpus_dim = 32;
  std::string emit_dir;
  cmd_corpus->add_option("--name", corpus_name, "case name (omit to list)");
  cmd_corpus->add_option("--dim", corpus_dim, "section dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_corpus->add_option("--emit", emit_dir, "write T/M/N/meta JSON files here");
  cmd_corpus->callback([&] {
    if (corpus_name.empty()) {
      emit(ctx, json{{"cases", corpus_names()}});
      return;
    }
    LabeledCase lc = make_example(corpus_name, corpus_dim);
    if (!emit_dir.empty()) {
      namespace fs = std::filesystem;
      fs::create_directories(emit_dir);
      write_json_file((fs::path(emit_dir) / "T.json").string(),
                      matrix_to_json(lc.t));
      write_json_file((fs::path(emit_dir) / "M.json").string(),
                      subspace_to_json(lc.m));
      write_json_file((fs::path(emit_dir) / "N.json").string(),
                      subspace_to_json(lc.n));
      write_json_file((fs::path(emit_dir) / "meta.json").string(),
                      case_meta_to_json(lc));
    }
    emit(ctx, case_meta_to_json(lc));
  });

  auto* cmd_verify = app.add_subcommand("verify", "full seeded property suite");
  VerifyOptions vopts;
  cmd_verify->add_option("--seeds", vopts.seeds, "cases per property group")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_verify->add_option("--max-dim", vopts.max_dim, "largest ambient dimension")
      ->check(CLI::Range(8, 256))
      ->capture_default_str();
  cmd_verify->add_option("--seed", vopts.seed, "master seed")
      ->capture_default_str();
  cmd_verify->callback([&] {
    vopts.tol = ctx.tol;
    VerifySummary sum = run_verify(vopts, &std::cerr);
    if (ctx.format == "json") {
      json groups = json::object();
      for (const auto& [group, counts] : sum.groups)
        groups[group] = {{"checks", counts.first}, {"failures", counts.second}};
      emit(ctx, json{{"checks", sum.checks},
                     {"failures", sum.failures},
                     {"groups", groups},
                     {"failure_messages", sum.failure_messages}});
    } else {
      std::cout << summary_to_text(sum);
    }
    if (sum.failures > 0) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    std::cout << json{{"error", {{"kind", "InvalidInput"},
                                 {"message", e.what()}}}}.dump(2)
              << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
