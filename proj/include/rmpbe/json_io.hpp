#pragma once

#include <json.hpp>
#include <string>

#include "rmpbe/backerr.hpp"
#include "rmpbe/perturb.hpp"
#include "rmpbe/rmp.hpp"
#include "rmpbe/spectrum.hpp"
#include "rmpbe/types.hpp"

namespace rmpbe {

using Json = nlohmann::json;

// Complex numbers are two-element arrays [re, im]; matrices are row-major
// nested arrays of complex entries.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json rmp_to_json(const Rmp& g, StructureTag tag = StructureTag::none);
Rmp rmp_from_json(const Json& j);

struct ProblemFile {
  Rmp rmp;
  StructureTag structure = StructureTag::none;
  Complex lambda{};
  std::uint64_t seed = 0;
  int steps = 11;
  Tolerances tol;
};

ProblemFile problem_from_json(const Json& j);
ProblemFile load_problem(const std::string& path);

Json backward_error_to_json(const BackwardErrorResult& unstructured,
                            const BackwardErrorResult& structured, std::uint64_t seed);
Json perturbation_to_json(const PerturbationTuple& tuple, const VerificationReport& report);
PerturbationTuple perturbation_from_json(const Json& j);
Json spectrum_to_json(const SpectrumResult& s);
Json structure_report_to_json(StructureTag tag, const StructureReport& report);

}  // namespace rmpbe
