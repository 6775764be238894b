#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acfront/io.hpp"
#include "acfront/rng.hpp"

using namespace acfront;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "acfront_io_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("snapshot round trip is bit exact") {
    LatticeField u(7, 3, -5, BoundaryJ::reflect);
    SplitMix64 rng(1);
    for (double& v : u.values()) v = rng.uniform(-1, 2);
    const auto path = temp_file("snap.bin").string();
    write_snapshot(path, u, 12.625);
    const Snapshot s = read_snapshot(path);
    CHECK(s.t == 12.625);
    CHECK(s.field == u);
    CHECK(fs::file_size(path) == kSnapshotHeaderBytes + 7 * 3 * 8);
}

TEST_CASE("snapshot header layout") {
    LatticeField u(4, 2, -9);
    const auto path = temp_file("hdr.bin").string();
    write_snapshot(path, u, 1.5);
    std::ifstream in(path, std::ios::binary);
    unsigned char h[64];
    in.read(reinterpret_cast<char*>(h), 64);
    CHECK(std::memcmp(h, "ACF1", 4) == 0);
    CHECK(h[4] == 4);
    CHECK(h[8] == 2);
    CHECK(h[12] == 0);
    std::int64_t off;
    std::memcpy(&off, h + 16, 8);
    CHECK(off == -9);
    double t;
    std::memcpy(&t, h + 24, 8);
    CHECK(t == 1.5);
}

TEST_CASE("corrupt snapshots are rejected") {
    const auto path = temp_file("bad.bin").string();
    {
        std::ofstream out(path, std::ios::binary);
        out << "XXXX and more bytes than needed for nothing in particular.............";
    }
    CHECK_THROWS_AS(read_snapshot(path), UsageError);
    CHECK_THROWS_AS(read_snapshot(temp_file("missing.bin").string()), UsageError);
}

TEST_CASE("snapshot index records") {
    std::ostringstream s;
    append_snapshot_index(s, 3, 0.5, "snap_3.bin");
    CHECK(s.str() == "{\"file\":\"snap_3.bin\",\"step\":3,\"t\":0.5}\n");
}

TEST_CASE("wave round trip") {
    const WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(0.3), 40.0, 0.25);
    std::stringstream s;
    write_wave(s, w);
    const WaveProfile r = read_wave(s);
    CHECK(r.c == w.c);
    CHECK(r.d == w.d);
    CHECK(r.L == w.L);
    CHECK(r.h == w.h);
    CHECK(r.phi == w.phi);
    CHECK(r.psi == w.psi);
    CHECK(r.r == w.r);
    CHECK(r.f.a() == 0.3);
    CHECK(r.phi_at(0.3) == w.phi_at(0.3));
}

TEST_CASE("wave files carry 17 significant digits") {
    const WaveProfile w = solve_wave(BistableNonlinearity::cubic(0.3), 40.0, 0.25);
    std::stringstream s;
    write_wave(s, w);
    std::string first;
    std::getline(s, first);
    CHECK(first.find("\"c\":" + format_double(w.c)) != std::string::npos);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(NAN) == "null");
}

TEST_CASE("CSV quoting round trip") {
    std::stringstream s;
    write_csv_row(s, {"plain", "with,comma", "with \"quote\"", "multi\nline", ""});
    write_csv_row(s, {"1", "2"});
    CHECK(s.str().substr(0, 6) == "plain,");
    const auto rows = read_csv(s);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"plain", "with,comma", "with \"quote\"", "multi\nline", ""});
    CHECK(rows[1] == std::vector<std::string>{"1", "2"});
    std::istringstream bad("\"open");
    CHECK_THROWS_AS(read_csv(bad), UsageError);
}

TEST_CASE("phase CSV") {
    PhaseExtract g;
    g.gamma = PhaseSequence({1.5, 0.0});
    g.defined = {1, 0};
    g.i_star = {1, 0};
    g.clamped = {0, 0};
    std::ostringstream s;
    write_phase_csv_header(s);
    write_phase_csv(s, 2.0, g);
    CHECK(s.str() == "t,j,gamma,defined\r\n2,0,1.5,1\r\n2,1,,0\r\n");
}

TEST_CASE("phase sequence CSV input") {
    const auto path = temp_file("seq.csv").string();
    {
        std::ofstream out(path);
        out << "j,value\n0,0.5\n1,0.25\n2,-1\n";
    }
    const PhaseSequence s = read_phase_sequence_csv(path, BoundaryJ::periodic);
    REQUIRE(s.size() == 3);
    CHECK(s[2] == -1.0);
    {
        std::ofstream out(path);
        out << "0.5\nabc\n";
    }
    CHECK_THROWS_AS(read_phase_sequence_csv(path, BoundaryJ::periodic), UsageError);
}

}
