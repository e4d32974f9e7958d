#include "rmpbe/json_io.hpp"

#include <fstream>

namespace rmpbe {

Json complex_to_json(Complex z) { return Json::array({std::real(z), std::imag(z)}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw Error("complex values are [re, im] arrays");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw Error("matrix must be a nested array");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
      throw Error("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  return m;
}

namespace {

std::vector<Complex> coeffs_from_json(const Json& j) {
  std::vector<Complex> out;
  for (const Json& v : j) out.push_back(complex_from_json(v));
  return out;
}

Json coeffs_to_json(const std::vector<Complex>& c) {
  Json out = Json::array();
  for (Complex v : c) out.push_back(complex_to_json(v));
  return out;
}

}  // namespace

Json rmp_to_json(const Rmp& g, StructureTag tag) {
  Json j;
  j["n"] = g.n();
  j["degree"] = g.degree();
  Json a = Json::array();
  for (const Matrix& m : g.coefficients()) a.push_back(matrix_to_json(m));
  j["A"] = std::move(a);
  Json terms = Json::array();
  for (const RmpTerm& t : g.terms()) {
    Json term;
    term["s"] = coeffs_to_json(t.w.numerator());
    term["q"] = coeffs_to_json(t.w.denominator());
    term["E"] = matrix_to_json(t.E);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  j["structure"] = to_string(tag);
  return j;
}

Rmp rmp_from_json(const Json& j) {
  if (!j.contains("A")) throw Error("RMP object needs an \"A\" coefficient list");
  std::vector<Matrix> A;
  for (const Json& m : j.at("A")) A.push_back(matrix_from_json(m));
  std::vector<RmpTerm> terms;
  if (j.contains("terms")) {
    for (const Json& t : j.at("terms")) {
      RationalScalarFn w(coeffs_from_json(t.at("s")), coeffs_from_json(t.at("q")));
      terms.push_back({std::move(w), matrix_from_json(t.at("E"))});
    }
  }
  Rmp g(std::move(A), std::move(terms));
  if (j.contains("n") && j.at("n").get<int>() != g.n()) throw Error("declared n mismatches A");
  if (j.contains("degree") && j.at("degree").get<int>() != g.degree())
    throw Error("declared degree mismatches A");
  return g;
}

ProblemFile problem_from_json(const Json& j) {
  const Json& rj = j.contains("rmp") ? j.at("rmp") : j;
  ProblemFile p{rmp_from_json(rj)};

  std::string tag_name = "none";
  if (rj.contains("structure")) tag_name = rj.at("structure").get<std::string>();
  if (j.contains("structure")) tag_name = j.at("structure").get<std::string>();
  const auto tag = structure_from_string(tag_name);
  if (!tag) throw Error("unknown structure tag \"" + tag_name + "\"");
  p.structure = *tag;

  if (j.contains("lambda")) p.lambda = complex_from_json(j.at("lambda"));
  if (j.contains("options")) {
    const Json& o = j.at("options");
    if (o.contains("seed")) p.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("steps")) p.steps = o.at("steps").get<int>();
    if (o.contains("tol")) {
      const Json& t = o.at("tol");
      if (t.contains("pole")) p.tol.pole_tol = t.at("pole").get<double>();
      if (t.contains("zero")) p.tol.zero_tol = t.at("zero").get<double>();
      if (t.contains("inv")) p.tol.inv_tol = t.at("inv").get<double>();
      if (t.contains("structure")) p.tol.structure_tol = t.at("structure").get<double>();
      if (t.contains("unit")) p.tol.unit_tol = t.at("unit").get<double>();
    }
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file " + path);
  Json j;
  in >> j;
  return problem_from_json(j);
}

namespace {

Json real_vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

Json backward_error_to_json(const BackwardErrorResult& unstructured,
                            const BackwardErrorResult& structured, std::uint64_t seed) {
  Json j;
  j["eta_unstructured"] = unstructured.eta;
  j["eta_structured"] = structured.eta;
  j["structure"] = to_string(structured.structure);
  j["lambda"] = complex_to_json(structured.lambda);
  j["exactness"] = to_string(structured.exactness);
  j["t_hat"] = real_vector_to_json(structured.t_hat);
  Json diag;
  diag["gap"] = structured.diagnostics.gap;
  diag["constraint_residuals"] = real_vector_to_json(structured.diagnostics.constraint_residuals);
  diag["solver_iterations"] = structured.diagnostics.solver_iterations;
  j["diagnostics"] = std::move(diag);
  j["seed"] = seed;
  return j;
}

Json perturbation_to_json(const PerturbationTuple& tuple, const VerificationReport& report) {
  Json j;
  Json da = Json::array();
  for (const Matrix& m : tuple.dA) da.push_back(matrix_to_json(m));
  j["dA"] = std::move(da);
  Json de = Json::array();
  for (const Matrix& m : tuple.dE) de.push_back(matrix_to_json(m));
  j["dE"] = std::move(de);
  j["tuple_norm"] = tuple.tuple_norm;
  Json v;
  v["singularity_residual"] = report.singularity_residual;
  v["max_structure_violation"] = report.max_structure_violation;
  Json viol = Json::array();
  for (const StructureViolation& s : report.structure_violations) {
    Json entry;
    entry["block"] = s.block;
    entry["rel_error"] = s.rel_error;
    viol.push_back(std::move(entry));
  }
  v["blocks"] = std::move(viol);
  j["verification"] = std::move(v);
  return j;
}

PerturbationTuple perturbation_from_json(const Json& j) {
  PerturbationTuple t;
  for (const Json& m : j.at("dA")) t.dA.push_back(matrix_from_json(m));
  for (const Json& m : j.at("dE")) t.dE.push_back(matrix_from_json(m));
  if (t.dA.empty()) throw Error("perturbation tuple needs at least dA_0");
  t.tuple_norm = t.recompute_norm();
  return t;
}

Json spectrum_to_json(const SpectrumResult& s) {
  Json j;
  Json eigs = Json::array();
  for (Complex z : s.eigenvalues) eigs.push_back(complex_to_json(z));
  j["eigenvalues"] = std::move(eigs);
  j["pole_flags"] = s.pole_flags;
  j["cleared_degree"] = s.cleared_degree;
  return j;
}

Json structure_report_to_json(StructureTag tag, const StructureReport& report) {
  Json j;
  j["structure"] = to_string(tag);
  j["valid"] = report.valid;
  Json viol = Json::array();
  for (const StructureViolation& v : report.violations) {
    Json entry;
    entry["block"] = v.block;
    entry["rel_error"] = v.rel_error;
    viol.push_back(std::move(entry));
  }
  j["violations"] = std::move(viol);
  return j;
}

}  // namespace rmpbe
