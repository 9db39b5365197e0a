#include "spdsrc/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace spdsrc {

RasterImage make_image(int width, int height, int channels) {
  if (width < 1 || height < 1) throw DimensionMismatch("make_image: empty image");
  if (channels != 1 && channels != 3)
    throw DimensionMismatch("make_image: channel count must be 1 or 3");
  RasterImage img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.pixels.assign(static_cast<std::size_t>(width) * height * channels, 0.0);
  return img;
}

namespace {

struct Derivatives {
  double dx, dy, dxx, dyy;
};

Derivatives central_differences(const RasterImage& img, int c, int x, int y) {
  const int xm = std::max(x - 1, 0), xp = std::min(x + 1, img.width - 1);
  const int ym = std::max(y - 1, 0), yp = std::min(y + 1, img.height - 1);
  Derivatives d;
  d.dx = (img.at(c, xp, y) - img.at(c, xm, y)) / 2.0;
  d.dy = (img.at(c, x, yp) - img.at(c, x, ym)) / 2.0;
  d.dxx = img.at(c, xp, y) - 2.0 * img.at(c, x, y) + img.at(c, xm, y);
  d.dyy = img.at(c, x, yp) - 2.0 * img.at(c, x, y) + img.at(c, x, ym);
  return d;
}

}  // namespace

FeatureField feature_stack(const RasterImage& img, const FeatureSpec& spec) {
  if (img.channels != spec.required_channels())
    throw SpecChannelMismatch("feature_stack: image channel count does not match variant");
  if (img.width < 1 || img.height < 1)
    throw DimensionMismatch("feature_stack: empty image");

  FeatureField field;
  field.width = img.width;
  field.height = img.height;
  field.values.resize(spec.feature_dim(),
                      static_cast<Index>(img.width) * img.height);

  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Index col = static_cast<Index>(y) * img.width + x;
      if (spec.variant == FeatureVariant::Gray5) {
        const Derivatives d = central_differences(img, 0, x, y);
        field.values(0, col) = img.at(0, x, y);
        field.values(1, col) = std::abs(d.dx);
        field.values(2, col) = std::abs(d.dy);
        field.values(3, col) = std::abs(d.dxx);
        field.values(4, col) = std::abs(d.dyy);
      } else {
        field.values(0, col) = double(x);
        field.values(1, col) = double(y);
        for (int c = 0; c < 3; ++c) {
          const Derivatives d = central_differences(img, c, x, y);
          field.values(2 + c, col) = img.at(c, x, y);
          field.values(5 + c, col) = std::abs(d.dx);
          field.values(8 + c, col) = std::abs(d.dy);
          field.values(11 + c, col) = std::abs(d.dxx);
          field.values(14 + c, col) = std::abs(d.dyy);
        }
      }
    }
  }
  return field;
}

SpdMatrix region_covariance(const FeatureField& field, const RegionSpec& region,
                            double reg_epsilon) {
  if (region.x0 < 0 || region.y0 < 0 || region.w < 1 || region.h < 1 ||
      region.x0 + region.w > field.width || region.y0 + region.h > field.height)
    throw RegionOutOfBounds("region_covariance: region outside the feature field");
  const Index m = static_cast<Index>(region.w) * region.h;
  if (m < 2)
    throw RegionOutOfBounds("region_covariance: region must contain at least 2 pixels");
  if (reg_epsilon < 0.0)
    throw ValidationError("region_covariance: reg_epsilon must be nonnegative");

  const Index f = field.values.rows();
  MatrixXd samples(f, m);
  Index k = 0;
  for (int y = region.y0; y < region.y0 + region.h; ++y)
    for (int x = region.x0; x < region.x0 + region.w; ++x)
      samples.col(k++) = field.values.col(static_cast<Index>(y) * field.width + x);

  const VectorXd mean = samples.rowwise().mean();
  samples.colwise() -= mean;
  MatrixXd cov = (samples * samples.transpose()) / double(m - 1);
  cov = (cov + cov.transpose()) / 2.0;
  cov.diagonal().array() += reg_epsilon * (cov.trace() / double(f) + 1.0);
  return SpdMatrix(std::move(cov));
}

std::vector<RegionSpec> tile(const RasterImage& img, int tile_w, int tile_h) {
  if (tile_w < 1 || tile_h < 1)
    throw NotDivisible("tile: tile dimensions must be positive");
  if (img.width % tile_w != 0 || img.height % tile_h != 0)
    throw NotDivisible("tile: image dimensions not divisible by tile dimensions");
  std::vector<RegionSpec> regions;
  regions.reserve(static_cast<std::size_t>(img.width / tile_w) * (img.height / tile_h));
  for (int y = 0; y < img.height; y += tile_h)
    for (int x = 0; x < img.width; x += tile_w)
      regions.push_back({x, y, tile_w, tile_h});
  return regions;
}

RasterImage box_downsample(const RasterImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1)
    throw DimensionMismatch("box_downsample: target dimensions must be positive");
  if (out_w > img.width || out_h > img.height)
    throw DimensionMismatch("box_downsample: target larger than source");
  RasterImage out = make_image(out_w, out_h, img.channels);
  const double sx = double(img.width) / double(out_w);
  const double sy = double(img.height) / double(out_h);
  for (int c = 0; c < img.channels; ++c) {
    for (int oy = 0; oy < out_h; ++oy) {
      const double y0 = oy * sy, y1 = (oy + 1) * sy;
      for (int ox = 0; ox < out_w; ++ox) {
        const double x0 = ox * sx, x1 = (ox + 1) * sx;
        double acc = 0.0;
        for (int y = int(std::floor(y0)); y < int(std::ceil(y1)); ++y) {
          const double wy = std::min(y1, double(y + 1)) - std::max(y0, double(y));
          for (int x = int(std::floor(x0)); x < int(std::ceil(x1)); ++x) {
            const double wx = std::min(x1, double(x + 1)) - std::max(x0, double(x));
            acc += wx * wy * img.at(c, std::min(x, img.width - 1),
                                    std::min(y, img.height - 1));
          }
        }
        out.at(c, ox, oy) = acc / (sx * sy);
      }
    }
  }
  return out;
}

}  // namespace spdsrc
