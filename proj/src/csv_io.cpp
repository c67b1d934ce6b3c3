#include "dfr/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dfr::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

double parse_field(std::string_view s, const std::filesystem::path& path, std::size_t line) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                          std::string(s) + "'");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Rows read_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    Rows rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parse_field(rest.substr(0, comma), path, lineno));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
    return rows;
}

void write_csv(const std::filesystem::path& path, const Rows& rows) {
    auto out = open_out(path);
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << format_double(row[j]);
        }
        out << '\n';
    }
    finish(out, path);
}

Matrix read_matrix(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw FormatError(path.string() + ": empty matrix");
    const std::size_t p = rows.front().size();
    Matrix X(rows.size(), p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != p)
            throw FormatError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(rows[i].size()) + " fields, expected " +
                              std::to_string(p));
        for (std::size_t j = 0; j < p; ++j) X(i, j) = rows[i][j];
    }
    return X;
}

void write_matrix(const std::filesystem::path& path, const Matrix& X) {
    auto out = open_out(path);
    std::string line;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        line.clear();
        for (std::size_t j = 0; j < X.cols(); ++j) {
            if (j) line += ',';
            line += format_double(X(i, j));
        }
        line += '\n';
        out << line;
    }
    finish(out, path);
}

std::vector<double> read_vector(const std::filesystem::path& path) {
    std::vector<double> v;
    for (const auto& row : read_csv(path)) {
        if (row.size() != 1) throw FormatError(path.string() + ": expected one column");
        v.push_back(row[0]);
    }
    return v;
}

void write_vector(const std::filesystem::path& path, const std::vector<double>& v) {
    auto out = open_out(path);
    for (double x : v) out << format_double(x) << '\n';
    finish(out, path);
}

GroupPartition read_groups(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    std::vector<std::size_t> labels(rows.size(), 0);
    std::vector<char> seen(rows.size(), 0);
    for (const auto& row : rows) {
        if (row.size() != 2) throw FormatError(path.string() + ": expected two columns");
        const double var = row[0], grp = row[1];
        if (var < 0 || grp < 0 || var != std::floor(var) || grp != std::floor(grp) ||
            var >= static_cast<double>(rows.size()))
            throw FormatError(path.string() + ": indices must be 0-based integers covering 0..p-1");
        const auto i = static_cast<std::size_t>(var);
        if (seen[i]) throw FormatError(path.string() + ": variable " + std::to_string(i) + " listed twice");
        seen[i] = 1;
        labels[i] = static_cast<std::size_t>(grp);
    }
    return GroupPartition::from_labels(labels);
}

void write_groups(const std::filesystem::path& path, const GroupPartition& groups) {
    auto out = open_out(path);
    const auto labels = groups.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
    finish(out, path);
}

Manifest read_manifest(const std::filesystem::path& path) {
    auto in = open_in(path);
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError(path.string() + ": line without '='");
        m[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    auto out = open_out(path);
    for (const auto& [k, v] : manifest) out << k << '=' << v << '\n';
    finish(out, path);
}

} // namespace dfr::io
