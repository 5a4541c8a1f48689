#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tiletopo/linalg.hpp"
#include "tiletopo/prism.hpp"
#include "tiletopo/tile.hpp"

namespace tiletopo {

// %.17g, lossless for doubles.
std::string format_double(double x);

// Header "# tiletopo cloud d=<d> n=<n>", then each echo line as "# <line>",
// then one comma-separated point per line.
void write_cloud_csv(std::ostream& os, const std::vector<Vec>& points, std::size_t dimension, int level,
                     const std::vector<std::string>& echo = {});

struct CloudFile {
  std::size_t dimension = 0;
  int level = 0;
  std::vector<std::string> comments;  // echo lines without the "# " prefix
  std::vector<Vec> points;
};

CloudFile read_cloud_csv(std::istream& is);

struct Mesh {
  std::vector<Vec> vertices;  // 3-D
  std::vector<std::array<std::size_t, 3>> faces;
};

// Sample grid of the prism pushed through the map: for d = 3 the six faces
// of the prism surface, for d = 2 the prism region placed at z = 0.
Mesh prism_mesh(const Prism& prism, const IterationMap& map, std::size_t resolution);

// ASCII OBJ with v and f records (1-based indices) after "# " echo lines.
void write_obj(std::ostream& os, const Mesh& mesh, const std::vector<std::string>& echo = {});

// Binary PGM (P5) of a planar cloud rasterized onto width x height pixels over
// its bounding box; occupied pixels are 255, the rest 0. Echo lines go into
// header comments.
void write_pgm(std::ostream& os, const std::vector<Vec>& points, std::size_t width, std::size_t height,
               const std::vector<std::string>& echo = {});

}  // namespace tiletopo
