#include "monocomp/io/pgm.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace monocomp::io {

using gallery::Image;

void write_pgm(const std::filesystem::path& path, const Image& img, bool binary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("pgm: cannot open " + path.string());
  double lo = img.data.empty() ? 0.0 : img.data[0];
  double hi = lo;
  for (double v : img.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  out << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n255\n";
  std::size_t col = 0;
  for (double v : img.data) {
    const int g = static_cast<int>(std::clamp((v - lo) / span * 255.0 + 0.5, 0.0, 255.0));
    if (binary) {
      out.put(static_cast<char>(g));
    } else {
      out << g << (++col % img.width == 0 ? '\n' : ' ');
    }
  }
}

namespace {

int next_token(std::istream& in) {
  // skips whitespace and '#' comments
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int v = 0;
  in >> v;
  if (!in) throw std::runtime_error("pgm: parse error");
  return v;
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: unsupported magic " + magic);
  const int w = next_token(in);
  const int h = next_token(in);
  const int maxval = next_token(in);
  if (w <= 0 || h <= 0 || maxval <= 0) throw std::runtime_error("pgm: bad header");
  Image img{static_cast<std::size_t>(w), static_cast<std::size_t>(h), {}};
  img.data.resize(img.width * img.height);
  if (magic == "P2") {
    for (double& v : img.data) v = next_token(in) / static_cast<double>(maxval);
  } else {
    in.get();  // single whitespace after maxval
    const int bytes = maxval < 256 ? 1 : 2;
    for (double& v : img.data) {
      int g = in.get();
      if (bytes == 2) g = (g << 8) | in.get();
      if (!in) throw std::runtime_error("pgm: truncated data");
      v = g / static_cast<double>(maxval);
    }
  }
  return img;
}

}  // namespace monocomp::io
