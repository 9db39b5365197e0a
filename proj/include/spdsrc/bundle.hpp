#pragma once

#include <filesystem>
#include <vector>

#include "spdsrc/classifier.hpp"
#include "spdsrc/spd.hpp"

namespace spdsrc {

/// Labeled collection of SPD matrices, the on-disk unit of this toolkit.
/// Serialized as a version-tagged text format:
///   SPDB 1 <d> <N>
///   <label> <v11> <v12> ... <v1d> <v22> ... <vdd>     (N records)
/// with the upper triangle stored row-major and 17 significant digits per
/// value, so finite doubles round-trip bit-exactly.
struct SpdBundle {
  Index dim = 0;
  std::vector<int> labels;
  std::vector<SpdMatrix> matrices;

  Index size() const { return static_cast<Index>(labels.size()); }
};

SpdBundle load_bundle(const std::filesystem::path& path);
void save_bundle(const SpdBundle& bundle, const std::filesystem::path& path);

LabeledGallery to_gallery(const SpdBundle& bundle);

}  // namespace spdsrc
