#pragma once

#include <string>
#include <vector>

#include "oligecon/experiments.hpp"

namespace oligecon {

struct WrittenFile {
  std::string path;
  std::size_t rows = 0;      // data rows for CSV, drawn cells/series for SVG
  std::string checksum;      // FNV-1a 64 of the bytes, hex
};

/// FNV-1a 64-bit hash, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);

struct FigureSpec {
  std::string title;
  std::string low_color = "#7f0000";   // heatmap scale endpoints
  std::string high_color = "#fff7ec";
  int cell_width = 46;
  int cell_height = 26;
};

/// Records to CSV under the fixed experiments header. Throws
/// std::invalid_argument on an empty stream and std::runtime_error on
/// I/O failure (message carries the path).
WrittenFile emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

/// Grid to CSV: one row per row-axis value, one column per col-axis
/// value, cell means (empty when count = 0).
WrittenFile emit_csv(const AggregateGrid& grid, const std::string& path);

std::vector<ExperimentRecord> parse_records_csv(const std::string& csv_text);
std::vector<ExperimentRecord> load_records_csv(const std::string& path);

/// Self-contained SVG heatmap: one rect per populated cell on a linear
/// two-color scale, hatched rects for empty cells, a numeric label per
/// populated cell, and a min/max legend. Byte-deterministic.
WrittenFile emit_heatmap_svg(const AggregateGrid& grid, const FigureSpec& spec,
                             const std::string& path);

/// Line chart over the size axis: one polyline per (depth, gamma)
/// series from a family of size-by-gamma grids (one grid per depth).
/// gamma = 1 series are black, lower capture levels gray; empty cells
/// split a polyline rather than interpolating through it.
WrittenFile emit_lines_svg(const std::vector<AggregateGrid>& size_gamma_grids,
                           const FigureSpec& spec, const std::string& path);

}  // namespace oligecon
