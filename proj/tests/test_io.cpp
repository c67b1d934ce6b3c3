#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "dfr/csv_io.hpp"
#include "support.hpp"

using namespace dfr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
    auto p = fs::temp_directory_path() / ("dfr_io_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("matrix and vector round trip exactly") {
    const auto dir = scratch("rt");
    std::mt19937_64 rng(1);
    Matrix X(7, 5);
    for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 7; ++i) X(i, j) = std::normal_distribution<double>(0, 1e3)(rng) / 3.0;
    X(0, 0) = 1e-300;
    X(1, 0) = -0.0;
    io::write_matrix(dir / "X.csv", X);
    const auto Y = io::read_matrix(dir / "X.csv");
    REQUIRE(Y.rows() == 7);
    REQUIRE(Y.cols() == 5);
    CHECK(std::equal(X.data().begin(), X.data().end(), Y.data().begin()));

    const auto v = test::normal_vector(9, rng);
    io::write_vector(dir / "v.csv", v);
    CHECK(io::read_vector(dir / "v.csv") == v);
    fs::remove_all(dir);
}

TEST_CASE("groups round trip") {
    const auto dir = scratch("groups");
    const std::vector<std::size_t> labels{0, 2, 1, 1, 0};
    const auto G = GroupPartition::from_labels(labels);
    io::write_groups(dir / "g.csv", G);
    const auto H = io::read_groups(dir / "g.csv");
    CHECK(H.num_vars() == 5);
    CHECK(H.num_groups() == 3);
    for (std::size_t i = 0; i < 5; ++i) CHECK(H.group_of(i) == labels[i]);
    fs::remove_all(dir);
}

TEST_CASE("manifest round trip") {
    const auto dir = scratch("manifest");
    const io::Manifest m{{"alpha", "0.95"}, {"rule", "dfr-sgl"}, {"out", "a b"}};
    io::write_manifest(dir / "manifest.txt", m);
    CHECK(io::read_manifest(dir / "manifest.txt") == m);
    fs::remove_all(dir);
}

TEST_CASE("malformed files raise format errors") {
    const auto dir = scratch("bad");
    std::ofstream(dir / "ragged.csv") << "1,2\n3\n";
    CHECK_THROWS_AS(io::read_matrix(dir / "ragged.csv"), io::FormatError);
    std::ofstream(dir / "text.csv") << "1,abc\n";
    CHECK_THROWS_AS(io::read_csv(dir / "text.csv"), io::FormatError);
    std::ofstream(dir / "groups.csv") << "0,0\n2,0\n";
    CHECK_THROWS_AS(io::read_groups(dir / "groups.csv"), io::FormatError);
    CHECK_THROWS_AS(io::read_csv(dir / "missing.csv"), io::IoError);
    fs::remove_all(dir);
}

TEST_CASE("format double keeps every bit") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 1000; ++t) {
        const double x = std::normal_distribution<double>(0, 1)(rng) * std::pow(10.0, double(int(rng() % 40) - 20));
        CHECK(std::stod(io::format_double(x)) == x);
    }
}

}
