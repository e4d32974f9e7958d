// Command-line front end: reads JSON problem files, runs the backward-error
// computations, and emits machine-readable results.
//
// Exit codes: 0 success, 2 inadmissible input, 3 solver failure,
// 4 result is only a lower bound (perturb), 5 problem too large (oracle).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rmpbe/backerr.hpp"
#include "rmpbe/json_io.hpp"
#include "rmpbe/oracle.hpp"
#include "rmpbe/spectrum.hpp"

namespace {

using namespace rmpbe;

constexpr int kExitInadmissible = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitLowerBoundOnly = 4;
constexpr int kExitTooLarge = 5;

struct CommonArgs {
  std::string file;
  std::string structure;
  std::string lambda_text;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::string out;
  bool serial = false;
  std::optional<double> tol_pole, tol_zero, tol_inv, tol_structure, tol_unit;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_out = false) {
  cmd->add_option("file", args.file, "problem JSON file")->required();
  cmd->add_option("--structure", args.structure, "override the structure tag");
  cmd->add_option("--lambda", args.lambda_text, "evaluation point as \"re,im\"");
  cmd->add_option("--seed", args.seed, "solver seed (echoed in output)");
  cmd->add_option("--steps", args.steps, "homotopy grid size");
  auto* out = cmd->add_option("--out", args.out, "output path");
  if (needs_out) out->required();
  cmd->add_flag("--serial", args.serial, "run the parallel kernels serially");
  cmd->add_option("--tol-pole", args.tol_pole, "pole detection tolerance");
  cmd->add_option("--tol-zero", args.tol_zero, "zero-weight tolerance");
  cmd->add_option("--tol-inv", args.tol_inv, "invertibility tolerance");
  cmd->add_option("--tol-structure", args.tol_structure, "structure validation tolerance");
  cmd->add_option("--tol-unit", args.tol_unit, "unit-circle exclusion tolerance");
}

Complex parse_lambda(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
  return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

ProblemFile resolve(const CommonArgs& args) {
  ProblemFile p = load_problem(args.file);
  if (!args.structure.empty()) {
    const auto tag = structure_from_string(args.structure);
    if (!tag) throw Error("unknown structure tag \"" + args.structure + "\"");
    p.structure = *tag;
  }
  if (!args.lambda_text.empty()) p.lambda = parse_lambda(args.lambda_text);
  if (args.seed) p.seed = *args.seed;
  if (args.steps) p.steps = *args.steps;
  if (args.tol_pole) p.tol.pole_tol = *args.tol_pole;
  if (args.tol_zero) p.tol.zero_tol = *args.tol_zero;
  if (args.tol_inv) p.tol.inv_tol = *args.tol_inv;
  if (args.tol_structure) p.tol.structure_tol = *args.tol_structure;
  if (args.tol_unit) p.tol.unit_tol = *args.tol_unit;
  return p;
}

OptOptions solver_options(const ProblemFile& p, const CommonArgs& args) {
  OptOptions opts;
  opts.seed = p.seed;
  opts.exec = args.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
  return opts;
}

int emit_error(const std::string& kind, const std::string& message, int code) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  std::cout << j.dump(2) << "\n";
  return code;
}

int check_admissibility_or_fail(const ProblemFile& p) {
  if (p.rmp.is_pole(p.lambda, p.tol.pole_tol))
    return emit_error("pole", "lambda is a pole of the RMP", kExitInadmissible);
  const AdmissibilityReport adm = check_admissible(p.rmp, p.lambda, p.tol);
  if (!adm.weights_nonzero)
    return emit_error("zero_weight", "a weight vanishes at lambda", kExitInadmissible);
  return 0;
}

void write_or_print(const std::string& out, const std::string& payload) {
  if (out.empty()) {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out);
  f << payload << "\n";
}

int cmd_backerr(const CommonArgs& args) {
  const ProblemFile p = resolve(args);
  if (int rc = check_admissibility_or_fail(p)) return rc;
  const BackwardErrorResult unstructured = eta_unstructured(p.rmp, p.lambda, p.tol);
  BackwardErrorResult structured;
  try {
    structured = eta_structured(p.rmp, p.lambda, p.structure, solver_options(p, args), p.tol);
  } catch (const StructureMismatch& e) {
    return emit_error("structure_mismatch", e.what(), kExitInadmissible);
  } catch (const Error& e) {
    return emit_error("solver", e.what(), kExitSolverFailure);
  }
  std::cout << backward_error_to_json(unstructured, structured, p.seed).dump(2) << "\n";
  return 0;
}

int cmd_perturb(const CommonArgs& args) {
  const ProblemFile p = resolve(args);
  if (int rc = check_admissibility_or_fail(p)) return rc;
  BackwardErrorResult structured;
  try {
    structured = eta_structured(p.rmp, p.lambda, p.structure, solver_options(p, args), p.tol);
  } catch (const StructureMismatch& e) {
    return emit_error("structure_mismatch", e.what(), kExitInadmissible);
  } catch (const Error& e) {
    return emit_error("solver", e.what(), kExitSolverFailure);
  }
  if (structured.exactness != Exactness::exact)
    return emit_error("lower_bound_only",
                      "result exactness is " + to_string(structured.exactness) +
                          "; no certificate-backed perturbation exists",
                      kExitLowerBoundOnly);
  try {
    const ReconstructOutcome rec = reconstruct_perturbation(
        p.rmp, p.lambda, p.structure, *structured.certificate, std::nullopt, p.tol);
    const VerificationReport ver =
        verify_perturbation(p.rmp, p.lambda, p.structure, rec.tuple, p.tol);
    Json j = perturbation_to_json(rec.tuple, ver);
    j["eta"] = structured.eta;
    j["projection_shift"] = rec.projection_shift;
    j["seed"] = p.seed;
    write_or_print(args.out, j.dump(2));
    if (!args.out.empty()) {
      Json summary;
      summary["written"] = args.out;
      summary["tuple_norm"] = rec.tuple.tuple_norm;
      summary["eta"] = structured.eta;
      summary["singularity_residual"] = ver.singularity_residual;
      std::cout << summary.dump(2) << "\n";
    }
  } catch (const Error& e) {
    return emit_error("reconstruction", e.what(), kExitSolverFailure);
  }
  return 0;
}

int cmd_curves(const CommonArgs& args, const std::string& perturbation_path) {
  const ProblemFile p = resolve(args);
  std::ifstream pf(perturbation_path);
  if (!pf) return emit_error("io", "cannot open " + perturbation_path, kExitSolverFailure);
  Json pj;
  pf >> pj;
  const PerturbationTuple delta = perturbation_from_json(pj);

  std::string csv = "t,re,im,pole_flag\n";
  try {
    const auto steps =
        homotopy_curves(p.rmp, delta, p.steps,
                        args.serial ? ExecPolicy::Serial : ExecPolicy::Parallel, p.tol);
    for (const HomotopyStep& step : steps) {
      if (!step.spectrum) {
        std::cerr << "step t=" << step.t << ": " << step.error << "\n";
        continue;
      }
      for (std::size_t i = 0; i < step.spectrum->eigenvalues.size(); ++i) {
        const Complex z = step.spectrum->eigenvalues[i];
        csv += std::to_string(step.t) + "," + std::to_string(std::real(z)) + "," +
               std::to_string(std::imag(z)) + "," +
               (step.spectrum->pole_flags[i] ? "1" : "0") + "\n";
      }
    }
  } catch (const Error& e) {
    return emit_error("solver", e.what(), kExitSolverFailure);
  }
  write_or_print(args.out, csv);
  return 0;
}

int cmd_eigs(const CommonArgs& args) {
  const ProblemFile p = resolve(args);
  try {
    std::cout << spectrum_to_json(rmp_eigenvalues(p.rmp, p.tol)).dump(2) << "\n";
  } catch (const SingularRmp& e) {
    return emit_error("singular_rmp", e.what(), kExitInadmissible);
  } catch (const Error& e) {
    return emit_error("solver", e.what(), kExitSolverFailure);
  }
  return 0;
}

int cmd_validate(const CommonArgs& args) {
  const ProblemFile p = resolve(args);
  const StructureReport report = validate_structure(p.rmp, p.structure, p.tol.structure_tol);
  std::cout << structure_report_to_json(p.structure, report).dump(2) << "\n";
  return 0;
}

int cmd_oracle(const CommonArgs& args) {
  const ProblemFile p = resolve(args);
  if (int rc = check_admissibility_or_fail(p)) return rc;
  OracleOptions oopts;
  oopts.seed = p.seed;
  oopts.exec = args.serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
  try {
    const OracleResult oracle = oracle_eta(p.rmp, p.lambda, p.structure, oopts);
    const BackwardErrorResult formula =
        eta_structured(p.rmp, p.lambda, p.structure, solver_options(p, args), p.tol);
    Json j;
    j["eta_oracle"] = oracle.eta;
    j["eta_formula"] = formula.eta;
    j["rel_gap"] = std::abs(oracle.eta - formula.eta) / std::max(formula.eta, 1e-300);
    j["exactness"] = to_string(formula.exactness);
    j["oracle_successes"] = oracle.successes;
    j["oracle_residual"] = oracle.best_residual;
    j["restarts"] = oopts.restarts;
    j["seed"] = p.seed;
    std::cout << j.dump(2) << "\n";
  } catch (const TooLarge& e) {
    return emit_error("too_large", e.what(), kExitTooLarge);
  } catch (const Error& e) {
    return emit_error("solver", e.what(), kExitSolverFailure);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured eigenvalue backward errors of rational matrix polynomials"};
  app.require_subcommand(1);

  CommonArgs backerr_args, perturb_args, curves_args, eigs_args, validate_args, oracle_args;
  std::string perturbation_path;

  auto* backerr = app.add_subcommand("backerr", "structured and unstructured backward errors");
  add_common(backerr, backerr_args);

  auto* perturb = app.add_subcommand("perturb", "reconstruct the optimal perturbation");
  add_common(perturb, perturb_args);

  auto* curves = app.add_subcommand("curves", "eigenvalue homotopy curves as CSV");
  add_common(curves, curves_args);
  curves->add_option("--perturbation", perturbation_path, "perturbation JSON file")->required();

  auto* eigs = app.add_subcommand("eigs", "eigenvalues after denominator clearing");
  add_common(eigs, eigs_args);

  auto* validate = app.add_subcommand("validate", "check the declared structure");
  add_common(validate, validate_args);

  auto* oracle = app.add_subcommand("oracle", "brute-force backward-error estimate");
  add_common(oracle, oracle_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (backerr->parsed()) return cmd_backerr(backerr_args);
    if (perturb->parsed()) return cmd_perturb(perturb_args);
    if (curves->parsed()) return cmd_curves(curves_args, perturbation_path);
    if (eigs->parsed()) return cmd_eigs(eigs_args);
    if (validate->parsed()) return cmd_validate(validate_args);
    if (oracle->parsed()) return cmd_oracle(oracle_args);
  } catch (const rmpbe::PoleAtPoint& e) {
    return emit_error("pole", e.what(), kExitInadmissible);
  } catch (const rmpbe::Error& e) {
    return emit_error("error", e.what(), kExitSolverFailure);
  } catch (const std::exception& e) {
    return emit_error("error", e.what(), kExitSolverFailure);
  }
  return 0;
}
