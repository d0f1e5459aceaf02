#ifndef VSEARCH_IMAGE_IO_HPP
#define VSEARCH_IMAGE_IO_HPP

#include <filesystem>
#include <string>

#include "vsearch/types.hpp"

namespace vsearch {

/// Comma-separated real matrix, one image row per line. Throws LoadError
/// with line context on ragged rows or unparsable fields.
GridMatrixd read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const GridMatrixd& m);

/// Netpbm grayscale (P2/P5, 8-bit) or color (P3/P6, luma-converted) image,
/// values in [0, 255].
GridMatrixd read_netpbm(const std::filesystem::path& path);
/// 8-bit binary PGM; values are rounded and clamped to [0, 255].
void write_pgm(const std::filesystem::path& path, const GridMatrixd& m);

/// Dispatches on extension: .csv/.txt as a matrix, anything else as Netpbm.
GridMatrixd read_map(const std::filesystem::path& path);

/// Writes `content` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace vsearch

#endif // VSEARCH_IMAGE_IO_HPP
