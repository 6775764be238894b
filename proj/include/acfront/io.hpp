#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "acfront/core.hpp"
#include "acfront/phase.hpp"
#include "acfront/wave.hpp"

namespace acfront {

// ---------------------------------------------------------------------------
// Binary snapshots
//
// 64-byte little-endian header followed by width*height binary64 values in
// row-major order (j outer):
//   0  char[4]  "ACF1"
//   4  u32      width
//   8  u32      height
//   12 u32      boundary_j (0 periodic, 1 reflect)
//   16 i64      i_offset
//   24 f64      t
//   32 zero padding

inline constexpr std::size_t kSnapshotHeaderBytes = 64;

struct Snapshot {
    LatticeField field;
    double t = 0.0;
};

void write_snapshot(const std::string& path, const LatticeField& u, double t);
Snapshot read_snapshot(const std::string& path);

/// Appends one NDJSON record {"step", "t", "file"} to an index stream.
void append_snapshot_index(std::ostream& index, long step, double t, const std::string& file);

// ---------------------------------------------------------------------------
// Wave profiles as NDJSON

void write_wave(std::ostream& out, const WaveProfile& w);
void write_wave(const std::string& path, const WaveProfile& w);
WaveProfile read_wave(std::istream& in);
WaveProfile read_wave(const std::string& path);

// ---------------------------------------------------------------------------
// CSV (RFC 4180: comma separated, CRLF line ends, quoted when needed)

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> read_csv(std::istream& in);
std::vector<std::vector<std::string>> read_csv(const std::string& path);

/// Shortest text that round-trips a binary64 value (17 significant digits).
std::string format_double(double v);

/// Columns t, j, gamma, defined.
void write_phase_csv_header(std::ostream& out);
void write_phase_csv(std::ostream& out, double t, const PhaseExtract& g);

/// Reads a phase sequence from a CSV with either a single value column or
/// columns (j, value); a header row is skipped when non-numeric.
PhaseSequence read_phase_sequence_csv(const std::string& path, BoundaryJ boundary_j);

}  // namespace acfront
