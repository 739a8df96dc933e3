#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cli/run_config.hpp"
#include "torograph/angle_matrix.hpp"

namespace torograph::cli {

/// Malformed input file: carries a human-readable location.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Reads a rectangular CSV of angles: one header row of distinct column
/// names, numeric body, decimal point. Degrees are converted; every value
/// is wrapped into (-pi, pi]. Errors name the offending "row R, column C".
AngleMatrix ingest_csv(const std::string& path, AngleUnit unit);

/// Writes the matrix with a header row; 17 significant digits, so a
/// radians -> degrees -> radians round trip stays within 1e-12.
void write_angles_csv(const std::string& path, const AngleMatrix& data,
                      AngleUnit unit);

/// Headerless numeric matrix (for --sigma inputs).
Eigen::MatrixXd read_matrix_csv(const std::string& path);

/// Integer matrix companion of a wrapped-Normal sample.
void write_winding_csv(const std::string& path, const Eigen::MatrixXi& windings,
                       const std::vector<std::string>& names);

/// Scatter export of (phi, psi) column pairs, in degrees. Returns false
/// (and writes nothing) when `pairs` is empty.
bool export_ramachandran(const AngleMatrix& data,
                         const std::vector<std::pair<std::string, std::string>>& pairs,
                         const std::string& path);

/// "a:b,c:d" -> {{a,b},{c,d}}; empty string -> phi<k>/psi<k> name matching.
std::vector<std::pair<std::string, std::string>> resolve_pairs(
    const std::string& spec, const std::vector<std::string>& columns);

/// Atomic text write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace torograph::cli
