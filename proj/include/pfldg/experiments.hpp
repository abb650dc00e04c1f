#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "pfldg/config.hpp"
#include "pfldg/mesh.hpp"
#include "pfldg/report.hpp"
#include "pfldg/spaces.hpp"

namespace pfldg {

/// Functions with coefficients uniform in [-1, 1] in the orthonormal bases.
DGScalarFunction random_scalar(const Discretization& disc, int degree, std::mt19937_64& rng);
DGVectorFunction random_vector(const Discretization& disc, int degree, std::mt19937_64& rng);

/// Built-in mesh or mesh file named by the config. Throws MeshError.
Mesh load_mesh(const RunConfig& config);

/// c_min / c_max across `levels` uniform refinements, the tau bounds, and
/// the discrete Poincare constant. Throws NotFaceRegular.
ExperimentReport run_stability(const RunConfig& config);

/// Integration by parts, lifting identity, three-case identity, lower bound,
/// symmetry and definiteness of a_h, strong form. Throws NotFaceRegular.
ExperimentReport run_identities(const RunConfig& config);

/// sin(pi x) sin(pi y) on unit_square(2), ..., unit_square(2^levels).
ExperimentReport run_convergence(const RunConfig& config);

/// Writes <name>.json and <name>.csv per report to the output directory and
/// logs one line per check. Returns 0 if every check passed, else 1.
int emit(const std::vector<ExperimentReport>& reports, const RunConfig& config, std::ostream& out);

/// Runs the configured experiment(s), writes <name>.json and <name>.csv to
/// the output directory, and logs one line per check.
/// Returns 0 if every check passed, 1 on a failed check, 2 on invalid
/// configuration or mesh (message on `err`).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point: parse, then run.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfldg
