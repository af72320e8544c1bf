#include "oligecon/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oligecon {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

WrittenFile write_file(const std::string& path, const std::string& content, std::size_t rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
  return {path, rows, fnv1a_hex(content)};
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string gnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Rgb {
  int r, g, b;
};

Rgb parse_color(const std::string& hex) {
  if (hex.size() != 7 || hex[0] != '#') throw std::invalid_argument("bad color: " + hex);
  auto h2 = [&](int i) { return std::stoi(hex.substr(i, 2), nullptr, 16); };
  return {h2(1), h2(3), h2(5)};
}

std::string lerp_color(const Rgb& lo, const Rgb& hi, double t) {
  auto mix = [&](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(lo.r, hi.r), mix(lo.g, hi.g), mix(lo.b, hi.b));
  return buf;
}

}  // namespace

WrittenFile emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: empty record stream");
  std::ostringstream os;
  os << records_csv_header() << '\n';
  for (const auto& r : records) os << record_to_csv(r) << '\n';
  return write_file(path, os.str(), records.size());
}

WrittenFile emit_csv(const AggregateGrid& grid, const std::string& path) {
  if (grid.cells.empty()) throw std::invalid_argument("emit_csv: empty grid");
  std::ostringstream os;
  const bool size_rows = grid.kind == GridKind::RelativeGdpBySizeGamma;
  os << (size_rows ? "size" : "depth");
  for (double c : grid.cols) os << ',' << gnum(c);
  os << '\n';
  for (size_t i = 0; i < grid.rows.size(); ++i) {
    os << gnum(grid.rows[i]);
    for (size_t j = 0; j < grid.cols.size(); ++j) {
      os << ',';
      if (grid.at(i, j).mean) os << gnum(*grid.at(i, j).mean);
    }
    os << '\n';
  }
  return write_file(path, os.str(), grid.rows.size());
}

std::vector<ExperimentRecord> parse_records_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("parse_records_csv: empty input");
  if (line != records_csv_header())
    throw std::invalid_argument("parse_records_csv: unexpected header");
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(record_from_csv(line));
  }
  return out;
}

std::vector<ExperimentRecord> load_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_records_csv(ss.str());
}

WrittenFile emit_heatmap_svg(const AggregateGrid& grid, const FigureSpec& spec,
                             const std::string& path) {
  const size_t nr = grid.rows.size(), nc = grid.cols.size();
  if (nr == 0 || nc == 0) throw std::invalid_argument("emit_heatmap_svg: empty grid");

  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& c : grid.cells)
    if (c.mean) {
      lo = any ? std::min(lo, *c.mean) : *c.mean;
      hi = any ? std::max(hi, *c.mean) : *c.mean;
      any = true;
    }
  const Rgb clo = parse_color(spec.low_color), chi = parse_color(spec.high_color);

  const int cw = spec.cell_width, ch = spec.cell_height;
  const int mleft = 70, mtop = 40, mbottom = 56, mright = 20;
  const int width = mleft + static_cast<int>(nc) * cw + mright;
  const int height = mtop + static_cast<int>(nr) * ch + mbottom;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
     << "<path d=\"M0,6 L6,0\" stroke=\"#bbbbbb\" stroke-width=\"1\"/></pattern></defs>\n";
  os << "<text x=\"" << mleft << "\" y=\"20\" font-size=\"13\">" << spec.title << "</text>\n";

  std::size_t drawn = 0;
  for (size_t i = 0; i < nr; ++i) {
    for (size_t j = 0; j < nc; ++j) {
      const int x = mleft + static_cast<int>(j) * cw;
      const int y = mtop + static_cast<int>(i) * ch;
      const GridCell& cell = grid.at(i, j);
      if (cell.mean) {
        const double t = hi > lo ? (*cell.mean - lo) / (hi - lo) : 0.5;
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch
           << "\" fill=\"" << lerp_color(clo, chi, t) << "\" stroke=\"#ffffff\"/>\n";
        const double lum = (1 - t) * 0.25 + t * 0.9;  // labels readable on both ends
        os << "<text x=\"" << x + cw / 2 << "\" y=\"" << y + ch / 2 + 4
           << "\" text-anchor=\"middle\" fill=\"" << (lum > 0.55 ? "#000000" : "#ffffff")
           << "\">" << fixed2(*cell.mean) << "</text>\n";
        ++drawn;
      } else {
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch
           << "\" fill=\"url(#hatch)\" stroke=\"#dddddd\"/>\n";
      }
    }
  }

  for (size_t j = 0; j < nc; ++j)
    os << "<text x=\"" << mleft + static_cast<int>(j) * cw + cw / 2 << "\" y=\""
       << mtop + static_cast<int>(nr) * ch + 16 << "\" text-anchor=\"middle\">" << gnum(grid.cols[j])
       << "</text>\n";
  for (size_t i = 0; i < nr; ++i)
    os << "<text x=\"" << mleft - 8 << "\" y=\"" << mtop + static_cast<int>(i) * ch + ch / 2 + 4
       << "\" text-anchor=\"end\">" << gnum(grid.rows[i]) << "</text>\n";
  if (any)
    os << "<text x=\"" << mleft << "\" y=\"" << height - 14 << "\">scale " << fixed2(lo) << " ("
       << spec.low_color << ") to " << fixed2(hi) << " (" << spec.high_color << ")</text>\n";
  os << "</svg>\n";
  return write_file(path, os.str(), drawn);
}

WrittenFile emit_lines_svg(const std::vector<AggregateGrid>& grids, const FigureSpec& spec,
                           const std::string& path) {
  if (grids.empty()) throw std::invalid_argument("emit_lines_svg: no grids");
  for (const auto& g : grids) {
    if (g.kind != GridKind::RelativeGdpBySizeGamma)
      throw std::invalid_argument("emit_lines_svg: grids must be size-by-gamma");
    if (g.rows != grids.front().rows)
      throw std::invalid_argument("emit_lines_svg: grids must share the size axis");
  }
  const int n_companies = grids.front().n_companies;

  const int width = 640, height = 420;
  const int mleft = 64, mtop = 36, mbottom = 48, mright = 24;
  const double px = mleft, pw = width - mleft - mright;
  const double py = mtop, ph = height - mtop - mbottom;

  double ymin = 1.0, ymax = 1.0;
  for (const auto& g : grids)
    for (const auto& c : g.cells)
      if (c.mean) {
        ymin = std::min(ymin, *c.mean);
        ymax = std::max(ymax, *c.mean);
      }
  ymin = std::floor((ymin - 0.02) * 20.0) / 20.0;
  ymax = std::ceil((ymax + 0.02) * 20.0) / 20.0;

  auto xpos = [&](double size) {
    const double pct = n_companies > 0 ? size / n_companies : 0.0;
    return px + pct * pw;
  };
  auto ypos = [&](double v) { return py + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << mleft << "\" y=\"20\" font-size=\"13\">" << spec.title << "</text>\n";
  os << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = ymin + (ymax - ymin) * tick / 4.0;
    os << "<text x=\"" << px - 6 << "\" y=\"" << ypos(v) + 4 << "\" text-anchor=\"end\">"
       << fixed2(v) << "</text>\n";
    os << "<line x1=\"" << px << "\" y1=\"" << ypos(v) << "\" x2=\"" << px + pw << "\" y2=\""
       << ypos(v) << "\" stroke=\"#eeeeee\"/>\n";
  }
  for (int tick = 0; tick <= 5; ++tick) {
    const double pct = tick / 5.0;
    os << "<text x=\"" << px + pct * pw << "\" y=\"" << py + ph + 18
       << "\" text-anchor=\"middle\">" << static_cast<int>(pct * 100) << "%</text>\n";
  }
  os << "<text x=\"" << px + pw / 2 << "\" y=\"" << height - 8
     << "\" text-anchor=\"middle\">oligarchization</text>\n";

  // dash pattern per depth keeps series of one gamma tellable apart
  const char* dashes[] = {"", "6,3", "2,2", "8,3,2,3", "4,4"};
  std::size_t series = 0;
  for (const auto& g : grids) {
    for (size_t j = 0; j < g.cols.size(); ++j) {
      const bool full = std::abs(g.cols[j] - 1.0) < 1e-12;
      const std::string color = full ? "#000000" : "#999999";
      const char* dash = dashes[(g.fixed_depth >= 1 ? (g.fixed_depth - 1) : 0) % 5];

      // split the series into contiguous segments: empty cells make a
      // gap, never an interpolated bridge
      std::vector<std::vector<std::pair<double, double>>> segments(1);
      for (size_t i = 0; i < g.rows.size(); ++i) {
        const GridCell& cell = g.at(i, j);
        if (!cell.mean) {
          if (!segments.back().empty()) segments.emplace_back();
          continue;
        }
        segments.back().emplace_back(xpos(g.rows[i]), ypos(*cell.mean));
      }
      bool drew = false;
      for (const auto& seg : segments) {
        if (seg.empty()) continue;
        os << "<polyline stroke=\"" << color << "\" stroke-width=\"" << (full ? 2.0 : 1.25)
           << "\"";
        if (*dash) os << " stroke-dasharray=\"" << dash << "\"";
        os << " fill=\"none\" points=\"";
        for (const auto& [x, y] : seg) os << gnum(x) << ',' << gnum(y) << ' ';
        os << "\"/>\n";
        drew = true;
      }
      if (drew) ++series;
    }
  }
  os << "</svg>\n";
  return write_file(path, os.str(), series);
}

}  // namespace oligecon
