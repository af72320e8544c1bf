#include <cstdio>
#include <fstream>
#include <sstream>

#include <oligecon/report.hpp>

#include "doctest.h"

using namespace oligecon;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t count_substr(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
    ++n;
  return n;
}

ExperimentRecord sample_record(int rep, double relgdp) {
  ExperimentRecord r;
  r.replication = rep;
  r.economy_seed = 42;
  r.depth_requested = 1;
  r.depth_achieved = 1;
  r.size = 3;
  r.gamma = 1.0;
  r.feasible = true;
  r.status = "ok";
  ScenarioResult s;
  s.psi_star = 100;
  s.final_gdp = relgdp * 100;
  s.relative_gdp = relgdp;
  s.profit_gain = 1.0;
  s.gdp_loss = 100 - s.final_gdp;
  s.inefficiency_ratio = s.gdp_loss;
  r.scenario = s;
  return r;
}

AggregateGrid sample_grid(size_t nr, size_t nc) {
  AggregateGrid g;
  g.kind = GridKind::RelativeGdpByDepthSize;
  g.n_companies = 25;
  for (size_t i = 0; i < nr; ++i) g.rows.push_back(static_cast<double>(i + 1));
  for (size_t j = 0; j < nc; ++j) g.cols.push_back(static_cast<double>(j + 1));
  g.cells.resize(nr * nc);
  return g;
}

const char* tmp_path(const char* name) {
  static std::string p;
  p = std::string("/tmp/oligecon_test_") + name;
  return p.c_str();
}

}  // namespace

TEST_CASE("records CSV: header plus one line per record, checksum stable") {
  std::vector<ExperimentRecord> records;
  for (int i = 0; i < 16; ++i) records.push_back(sample_record(i, 0.9 + 0.005 * i));
  const WrittenFile w = emit_csv(records, tmp_path("records.csv"));
  CHECK(w.rows == 16);
  const std::string text = slurp(w.path);
  CHECK(count_substr(text, "\n") == 17);
  CHECK(w.checksum == fnv1a_hex(text));

  const WrittenFile again = emit_csv(records, tmp_path("records2.csv"));
  CHECK(again.checksum == w.checksum);

  // round trip
  const auto parsed = parse_records_csv(text);
  REQUIRE(parsed.size() == records.size());
  for (size_t i = 0; i < parsed.size(); ++i)
    CHECK(record_to_csv(parsed[i]) == record_to_csv(records[i]));
}

TEST_CASE("records CSV: empty stream is a precondition error") {
  CHECK_THROWS_AS(emit_csv(std::vector<ExperimentRecord>{}, tmp_path("empty.csv")),
                  std::invalid_argument);
}

TEST_CASE("heatmap: one rect per cell, hatching for empties, 2-decimal labels") {
  AggregateGrid g = sample_grid(5, 25);
  for (size_t i = 0; i < 5; ++i)
    for (size_t j = 0; j < 25; ++j) {
      if (i == 0 && j == 0) continue;  // leave one cell empty
      g.at(i, j).count = 1;
      g.at(i, j).mean = 0.7 + 0.01 * static_cast<double>(i + j);
    }
  const WrittenFile w = emit_heatmap_svg(g, FigureSpec{"relative gdp"}, tmp_path("heat.svg"));
  CHECK(w.rows == 124);  // populated cells
  const std::string svg = slurp(w.path);
  CHECK(count_substr(svg, "<rect") == 125);
  CHECK(count_substr(svg, "url(#hatch)") == 1);
  CHECK(count_substr(svg, ">0.71<") >= 1);

  const WrittenFile w2 = emit_heatmap_svg(g, FigureSpec{"relative gdp"}, tmp_path("heat2.svg"));
  CHECK(w2.checksum == w.checksum);  // byte-deterministic
}

TEST_CASE("heatmap: constant grid renders identical fills") {
  AggregateGrid g = sample_grid(2, 3);
  for (auto& c : g.cells) {
    c.count = 1;
    c.mean = 1.0;
  }
  const WrittenFile w = emit_heatmap_svg(g, FigureSpec{"flat"}, tmp_path("flat.svg"));
  const std::string svg = slurp(w.path);
  // the constant scale midpoint color appears once per cell
  const size_t fills = count_substr(svg, "fill=\"#bf7c76\"");
  CHECK(fills == 6);
}

TEST_CASE("heatmap: single-cell grid gets its label") {
  AggregateGrid g = sample_grid(1, 1);
  g.at(0, 0).count = 1;
  g.at(0, 0).mean = 0.9705;
  const WrittenFile w = emit_heatmap_svg(g, FigureSpec{"one"}, tmp_path("one.svg"));
  CHECK(w.rows == 1);
  CHECK(count_substr(slurp(w.path), ">0.97<") == 1);
}

TEST_CASE("line chart: one polyline per gamma series, gaps split") {
  AggregateGrid g;
  g.kind = GridKind::RelativeGdpBySizeGamma;
  g.fixed_depth = 1;
  g.n_companies = 25;
  g.rows = {5, 10, 15, 20, 25};
  g.cols = {0.0, 0.25, 0.5, 0.75, 1.0};
  g.cells.resize(25);
  for (size_t i = 0; i < 5; ++i)
    for (size_t j = 0; j < 5; ++j) {
      g.at(i, j).count = 1;
      g.at(i, j).mean = 1.0 - 0.02 * static_cast<double>(i) * (1.0 + static_cast<double>(j));
    }
  // full-ownership endpoint back at 1.0 for every gamma
  for (size_t j = 0; j < 5; ++j) g.at(4, j).mean = 1.0;

  const WrittenFile w = emit_lines_svg({g}, FigureSpec{"capture"}, tmp_path("lines.svg"));
  CHECK(w.rows == 5);
  std::string svg = slurp(w.path);
  CHECK(count_substr(svg, "<polyline") == 5);
  CHECK(count_substr(svg, "stroke=\"#000000\"") == 1);  // gamma = 1 in black
  CHECK(count_substr(svg, "stroke=\"#999999\"") == 4);

  // a missing middle cell splits that series without interpolation
  g.at(2, 0).mean.reset();
  g.at(2, 0).count = 0;
  const WrittenFile w2 = emit_lines_svg({g}, FigureSpec{"capture"}, tmp_path("lines2.svg"));
  CHECK(count_substr(slurp(w2.path), "<polyline") == 6);
}

TEST_CASE("grid CSV emission") {
  AggregateGrid g = sample_grid(2, 2);
  g.at(0, 0).mean = 0.5;
  g.at(1, 1).mean = 0.25;
  const WrittenFile w = emit_csv(g, tmp_path("grid.csv"));
  CHECK(w.rows == 2);
  const std::string text = slurp(w.path);
  CHECK(text == "depth,1,2\n1,0.5,\n2,,0.25\n");
}
