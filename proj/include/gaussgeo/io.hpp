// io.hpp — covariance file formats and emission helpers for the CLI
//
// Covariance files are either JSON,
//   { "modes": N, "ordering": "block" | "interleaved",
//     "matrix": [ 4 N^2 reals, row-major ] }
// or plain text: whitespace-separated reals forming a square matrix of even
// dimension, assumed block-ordered. Interleaved JSON input is permuted to
// block ordering on load.
#pragma once

#include <string>

#include "gaussgeo/symplectic.hpp"

namespace gaussgeo {

// Loads either format, dispatching on the first non-whitespace byte
// ('{' selects JSON). Throws FileFormatError on malformed input, including
// asymmetric matrices.
CovarianceMatrix load_covariance(const std::string& path);

// Raw variant for validity checking: returns the block-ordered matrix with
// only shape checks applied, so asymmetric or unphysical candidates reach
// validate_covariance instead of failing the load.
Matrix load_covariance_matrix(const std::string& path);

CovarianceMatrix parse_covariance_json(const std::string& text);
CovarianceMatrix parse_covariance_text(const std::string& text);

// Shortest-round-trip style formatting with a significant-digit cap.
std::string format_double(double value, int precision);

// Writes via a temporary file in the same directory plus atomic rename, so a
// failed run never leaves a partial output file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gaussgeo
