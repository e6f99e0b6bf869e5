#pragma once

// File formats: MatrixMarket coordinate files for S and headerless CSV for
// bounds (one row per reaction, one column per scenario).

#include "sparseflux/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace sparseflux {

StoichiometricMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
StoichiometricMatrix read_matrix_market(const std::filesystem::path& path);
void write_matrix_market(std::ostream& out, const StoichiometricMatrix& S);
void write_matrix_market(const std::filesystem::path& path, const StoichiometricMatrix& S);

/// Parses a numeric CSV table. Accepts inf/-inf/Inf. Every row must have the
/// same number of fields; an empty file is an error.
Matrix read_csv_matrix(std::istream& in, const std::string& source = "<stream>");
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(std::ostream& out, const Matrix& M);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& M);

BoundsSet read_bounds(const std::filesystem::path& lower, const std::filesystem::path& upper);

}  // namespace sparseflux
