#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spdsrc/spd.hpp"

namespace spdsrc {

/// Raster image with planar channels, values in [0, 255].
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 = gray, 3 = RGB
  std::vector<double> pixels;  // channel-major, row-major within a channel

  double at(int channel, int x, int y) const {
    return pixels[(static_cast<std::size_t>(channel) * height + y) * width + x];
  }
  double& at(int channel, int x, int y) {
    return pixels[(static_cast<std::size_t>(channel) * height + y) * width + x];
  }
};

RasterImage make_image(int width, int height, int channels);

enum class FeatureVariant { Gray5, Color17 };

struct FeatureSpec {
  FeatureVariant variant = FeatureVariant::Gray5;
  double reg_epsilon = 1e-5;

  int feature_dim() const { return variant == FeatureVariant::Gray5 ? 5 : 17; }
  int required_channels() const { return variant == FeatureVariant::Gray5 ? 1 : 3; }
};

struct RegionSpec {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
};

/// Per-pixel feature vectors, one column per pixel (index x + y * width).
struct FeatureField {
  int width = 0;
  int height = 0;
  Eigen::MatrixXd values;  // feature_dim x (width * height)
};

/// Per-pixel feature stack. Gray5 is (I, |Ix|, |Iy|, |Ixx|, |Iyy|); Color17
/// is (x, y, R, G, B, |Rx|, |Gx|, |Bx|, |Ry|, |Gy|, |By|, |Rxx|, |Gxx|,
/// |Bxx|, |Ryy|, |Gyy|, |Byy|). Derivatives are central differences with
/// indices clamped at the borders.
FeatureField feature_stack(const RasterImage& img, const FeatureSpec& spec);

/// Sample covariance of the pixel features over a region, regularized as
/// C0 + reg_epsilon * (trace(C0)/F + 1) * I so constant regions still yield
/// a valid SPD descriptor.
SpdMatrix region_covariance(const FeatureField& field, const RegionSpec& region,
                            double reg_epsilon);

/// Non-overlapping row-major tiling; image dimensions must be divisible by
/// the tile dimensions.
std::vector<RegionSpec> tile(const RasterImage& img, int tile_w, int tile_h);

/// Area-averaging downsample (plain box mean when the ratio is integral).
RasterImage box_downsample(const RasterImage& img, int out_w, int out_h);

}  // namespace spdsrc
