#include "spdsrc/pnm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace spdsrc {

namespace {

// Skips whitespace and '#' comments between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  if (ch == EOF || !std::isdigit(ch))
    throw ParseError(path + ": malformed PNM header");
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1000000) throw ParseError(path + ": PNM header value out of range");
    ch = in.get();
  }
  if (ch != EOF) in.unget();
  return static_cast<int>(value);
}

}  // namespace

RasterImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  const std::string name = path.string();

  char magic[2] = {0, 0};
  in.read(magic, 2);
  int channels = 0;
  if (magic[0] == 'P' && magic[1] == '5')
    channels = 1;
  else if (magic[0] == 'P' && magic[1] == '6')
    channels = 3;
  else
    throw ParseError(name + ": not a binary PGM (P5) or PPM (P6) file");

  const int width = next_header_int(in, name);
  const int height = next_header_int(in, name);
  const int maxval = next_header_int(in, name);
  if (width < 1 || height < 1) throw ParseError(name + ": empty image");
  if (maxval != 255) throw ParseError(name + ": max-value field must be 255");
  in.get();  // single whitespace byte separating header and raster

  const std::size_t count =
      static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw ParseError(name + ": truncated raster data");

  RasterImage img = make_image(width, height, channels);
  // interleaved on disk, planar in memory
  std::size_t k = 0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) img.at(c, x, y) = double(raw[k++]);
  return img;
}

void write_pnm(const std::filesystem::path& path, const RasterImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n255\n";
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c) {
        const double v = std::round(img.at(c, x, y));
        const unsigned char byte =
            static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
        out.put(static_cast<char>(byte));
      }
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace spdsrc
