#pragma once

// Stage driver. Every stage reads the previous stage's artifacts from the
// output directory, so stages can be rerun one at a time:
//
//   gen      -> fuchsian.json
//   deform   fuchsian.json -> representation.json
//   certify  representation.json -> hyperbolicity.json
//   curve    representation.json -> curve.csv, curve_report.json
//   render   curve.csv -> curve.svg
//   foliate  representation.json, curve.csv -> foliation.json
//   all      everything above in one process
//
// Exit codes: 0 success, 1 a certificate failed, 2 error (error.json is
// written to the output directory).

#include <iosfwd>
#include <optional>
#include <string>

#include "goldman/config.hpp"
#include "goldman/curve.hpp"
#include "goldman/deformation.hpp"
#include "goldman/representation.hpp"

namespace goldman {

enum class Stage { Gen, Deform, Certify, Curve, Render, Foliate, All };

const char* to_string(Stage s);
Stage stage_from_string(const std::string& s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificate = 1;
inline constexpr int kExitError = 2;

/// Runs one stage. Progress and verdicts go to `log`; errors are caught,
/// recorded in error.json and mapped to kExitError.
int run_stage(Stage stage, const RunConfig& cfg, std::ostream& log);

struct DeformedRepresentation {
  Representation rep;
  int null_space_dimension = 0;
  int pure_dimension = 0;
  double twist = 0;
  PurityResult purity;
};

/// The configured cocycle and twist applied to a linear representation.
DeformedRepresentation deform_representation(const Representation& linear, const RunConfig& cfg);

/// Log-homothety that puts generator `index` on the stable-norm boundary.
double boundary_twist(const Representation& rep, int index);

/// Representation JSON: {"genus": g, "generators": [[[4 linear], [2 translation]], ...]}
/// with floats at 17 significant digits. Extra top-level keys are ignored on read.
Representation representation_from_json(const std::string& text);
Representation read_representation_file(const std::string& path);

/// Reads the {"translations": [[u, v], ...]} cocycle file of mode=file.
std::vector<Row2d> read_cocycle_file(const std::string& path, int genus);

}  // namespace goldman
