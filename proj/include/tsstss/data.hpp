#ifndef TSSTSS_DATA_HPP_
#define TSSTSS_DATA_HPP_

#include <cstdint>
#include <string>
#include <utility>

#include "tsstss/represent.hpp"

namespace tsstss {

// Per-class hold-out split: train_per_class columns per class go to train,
// the rest to test, after a seeded per-class shuffle.
struct SplitSpec {
  int train_per_class = 1;
  std::uint64_t seed = 0;
};

// Union-of-subspaces generator for desk-scale verification.
struct SyntheticSpec {
  int classes = 10;
  int subspace_dim = 3;
  int ambient_dim = 50;
  int train_per_class = 20;
  int test_per_class = 10;
  double noise_sigma = 0.01;
  std::uint64_t seed = 7;

  void validate() const;
};

// IDX image/label pair (big-endian, magics 0x803 / 0x801). Pixels are scaled
// to [0, 1]; one column per image.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// One sample per row: integer label, then the feature values.
Dataset load_csv(const std::string& path, bool has_header);

// Inverse of load_csv (no header).
void write_csv(const Dataset& data, const std::string& path);

// Scales every column to unit L2 norm. Rejects all-zero columns.
Dataset normalize_columns(const Dataset& data);

std::pair<Dataset, Dataset> holdout_split(const Dataset& data,
                                          const SplitSpec& spec);

// Keeps the first per-class columns of `data` up to `per_class`; used to cap
// the test side of a split (which is already in seeded-shuffle order).
Dataset take_per_class(const Dataset& data, int per_class);

// Non-overlapping factor x factor mean pooling of column-major-stored
// height x width images.
Dataset downsample_images(const Dataset& data, int height, int width,
                          int factor);

std::pair<Dataset, Dataset> generate_synthetic(const SyntheticSpec& spec);

// Per-class concatenation of two datasets over the same feature dimension.
Dataset concat(const Dataset& a, const Dataset& b);

}  // namespace tsstss

#endif  // TSSTSS_DATA_HPP_
