#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfr/matrix.hpp"

namespace dfr::io {

/// File could not be opened, read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed file content.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rows = std::vector<std::vector<double>>;

/// Headerless numeric CSV, %.17g formatting.
Rows read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Rows& rows);

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& X);

/// One value per line.
std::vector<double> read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, const std::vector<double>& v);

/// Two columns: variable index, group index (both 0-based).
GroupPartition read_groups(const std::filesystem::path& path);
void write_groups(const std::filesystem::path& path, const GroupPartition& groups);

using Manifest = std::map<std::string, std::string>;
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// %.17g text; parses back to the same double.
std::string format_double(double v);

} // namespace dfr::io
