#include "tiletopo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string_view>

namespace tiletopo {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_cloud_csv(std::ostream& os, const std::vector<Vec>& points, std::size_t dimension, int level,
                     const std::vector<std::string>& echo) {
  os << "# tiletopo cloud d=" << dimension << " n=" << level << '\n';
  for (const auto& line : echo) os << "# " << line << '\n';
  for (const auto& p : points) {
    if (p.size() != dimension) throw DimensionError("write_cloud_csv: point dimension mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) os << ',';
      os << format_double(p[i]);
    }
    os << '\n';
  }
}

namespace {

template <class T>
T parse_number(std::string_view text, int line) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(line, "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

CloudFile read_cloud_csv(std::istream& is) {
  CloudFile f;
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw ConfigError(0, "empty cloud file");
  ++lineno;
  constexpr std::string_view prefix = "# tiletopo cloud d=";
  std::string_view head = trim(line);
  if (head.substr(0, prefix.size()) != prefix) throw ConfigError(1, "missing '# tiletopo cloud' header");
  head.remove_prefix(prefix.size());
  const auto sep = head.find(" n=");
  if (sep == std::string_view::npos) throw ConfigError(1, "header lacks n=");
  f.dimension = parse_number<std::size_t>(head.substr(0, sep), 1);
  f.level = parse_number<int>(head.substr(sep + 3), 1);
  if (f.dimension < 1) throw ConfigError(1, "header dimension must be positive");
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      s.remove_prefix(1);
      if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      f.comments.emplace_back(s);
      continue;
    }
    std::vector<double> c;
    while (true) {
      const auto comma = s.find(',');
      c.push_back(parse_number<double>(trim(s.substr(0, comma)), lineno));
      if (comma == std::string_view::npos) break;
      s.remove_prefix(comma + 1);
    }
    if (c.size() != f.dimension) {
      throw ConfigError(lineno, "expected " + std::to_string(f.dimension) + " coordinates, got " +
                                    std::to_string(c.size()));
    }
    f.points.emplace_back(std::move(c));
  }
  return f;
}

namespace {

// (res+1)^2 grid on a parametrized square, quads split along the diagonal.
template <class Param>
void add_patch(Mesh& mesh, std::size_t res, Param&& param) {
  const std::size_t base = mesh.vertices.size();
  for (std::size_t j = 0; j <= res; ++j) {
    for (std::size_t i = 0; i <= res; ++i) {
      mesh.vertices.push_back(param(static_cast<double>(i) / res, static_cast<double>(j) / res));
    }
  }
  const std::size_t row = res + 1;
  for (std::size_t j = 0; j < res; ++j) {
    for (std::size_t i = 0; i < res; ++i) {
      const std::size_t a = base + j * row + i;
      mesh.faces.push_back({a, a + 1, a + row + 1});
      mesh.faces.push_back({a, a + row + 1, a + row});
    }
  }
}

}  // namespace

Mesh prism_mesh(const Prism& prism, const IterationMap& map, std::size_t resolution) {
  if (resolution < 1) throw InvalidParameterError("prism_mesh: resolution must be >= 1");
  Mesh mesh;
  const std::size_t d = prism.dimension();
  if (d == 2) {
    add_patch(mesh, resolution, [&](double a, double b) {
      const Vec p = map.evaluate(prism.point(Vec{a - 0.5}, b));
      return Vec{p[0], p[1], 0.0};
    });
    return mesh;
  }
  if (d != 3) throw UnsupportedConfigurationError("OBJ meshes are available for d = 2 and d = 3 only");
  auto at = [&](double w0, double w1, double tau) { return map.evaluate(prism.point(Vec{w0, w1}, tau)); };
  for (double tau : {0.0, 1.0}) {
    add_patch(mesh, resolution, [&](double a, double b) { return at(a - 0.5, b - 0.5, tau); });
  }
  for (double side : {-0.5, 0.5}) {
    add_patch(mesh, resolution, [&](double a, double b) { return at(side, a - 0.5, b); });
    add_patch(mesh, resolution, [&](double a, double b) { return at(a - 0.5, side, b); });
  }
  return mesh;
}

void write_obj(std::ostream& os, const Mesh& mesh, const std::vector<std::string>& echo) {
  for (const auto& line : echo) os << "# " << line << '\n';
  for (const auto& v : mesh.vertices) {
    if (v.size() != 3) throw DimensionError("write_obj: vertices must be 3-D");
    os << "v " << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2]) << '\n';
  }
  for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_pgm(std::ostream& os, const std::vector<Vec>& points, std::size_t width, std::size_t height,
               const std::vector<std::string>& echo) {
  if (width < 1 || height < 1) throw InvalidParameterError("write_pgm: raster must be at least 1x1");
  if (points.empty()) throw InvalidArgumentError("write_pgm: empty cloud");
  double lo[2] = {points[0][0], points[0][1]}, hi[2] = {lo[0], lo[1]};
  for (const auto& p : points) {
    if (p.size() != 2) throw UnsupportedConfigurationError("PGM rasters need a planar (d = 2) cloud");
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  std::vector<unsigned char> pixels(width * height, 0);
  for (const auto& p : points) {
    const double fx = hi[0] > lo[0] ? (p[0] - lo[0]) / (hi[0] - lo[0]) : 0.5;
    const double fy = hi[1] > lo[1] ? (p[1] - lo[1]) / (hi[1] - lo[1]) : 0.5;
    const auto col = std::min(width - 1, static_cast<std::size_t>(fx * width));
    // first row is the top of the image
    const auto row = height - 1 - std::min(height - 1, static_cast<std::size_t>(fy * height));
    pixels[row * width + col] = 255;
  }
  os << "P5\n";
  for (const auto& line : echo) os << "# " << line << '\n';
  os << width << ' ' << height << "\n255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace tiletopo
