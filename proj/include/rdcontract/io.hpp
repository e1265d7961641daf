// Deterministic output: CSV/JSON emission with 17-significant-digit
// formatting, LF endings, and a config-hash + seed header on every file, so
// identical configs reproduce byte-identical files.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rdcontract/grid.hpp"
#include "rdcontract/simulate.hpp"

namespace rdc {

// FNV-1a, 64 bit, over the canonical config text.
std::uint64_t fnv1a64(std::string_view s);

// Shortest-round-trip decimal of v at 17 significant digits ("%.17g").
std::string format_g17(double v);

struct OutputHeader {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  // "# config_hash=<16 hex digits> seed=<decimal>"
  std::string comment_line() const;
};

// Column-labelled numeric table.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row has columns.size() entries
};

// CSV: one '#' comment line (hash + seed), header row, data rows.  Throws
// InvalidParameter on an empty series or ragged rows, IoError when the path
// cannot be opened.
void emit_plot_data(const Series& s, const std::string& path, const OutputHeader& hdr);

// Reads back a file written by emit_plot_data ('#' lines skipped).
Series read_series_csv(const std::string& path);

// Columns (t, species, x, value); species is the 0-based index.
void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const OutputHeader& hdr);
// Columns (t, l2_norm).
void write_norms_csv(const Trajectory& traj, const std::string& path,
                     const OutputHeader& hdr);
// Columns (x, value).
void write_field_csv(const ScalarField& f, const std::string& path,
                     const OutputHeader& hdr);

std::string field_to_json(const ScalarField& f);
// Includes the (r, x_star) metadata next to the sampled values.
std::string profile_to_json(const VolumeProfile& p);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rdc
