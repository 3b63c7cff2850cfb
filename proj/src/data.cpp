#include "tsstss/data.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

#include <Eigen/QR>

#include "tsstss/rng.hpp"

namespace tsstss {

void SyntheticSpec::validate() const {
  if (classes < 1 || subspace_dim < 1 || ambient_dim < 1 ||
      train_per_class < 1 || test_per_class < 1)
    throw InvalidInput("SyntheticSpec: all counts must be >= 1");
  if (subspace_dim > ambient_dim)
    throw InvalidInput("SyntheticSpec: subspace_dim > ambient_dim");
  if (noise_sigma < 0)
    throw InvalidInput("SyntheticSpec: noise_sigma must be >= 0");
}

namespace {

std::uint32_t read_u32_be(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw FormatError(path + ": truncated header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw FormatError(images_path + ": cannot open");
  if (std::uint32_t magic = read_u32_be(img, images_path); magic != 0x803)
    throw FormatError(images_path + ": bad magic number (expected 0x00000803)");
  const std::uint32_t n_images = read_u32_be(img, images_path);
  const std::uint32_t n_rows = read_u32_be(img, images_path);
  const std::uint32_t n_cols = read_u32_be(img, images_path);
  if (n_images == 0 || n_rows == 0 || n_cols == 0)
    throw FormatError(images_path + ": zero-sized image file");

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw FormatError(labels_path + ": cannot open");
  if (std::uint32_t magic = read_u32_be(lab, labels_path); magic != 0x801)
    throw FormatError(labels_path + ": bad magic number (expected 0x00000801)");
  const std::uint32_t n_labels = read_u32_be(lab, labels_path);
  if (n_labels != n_images)
    throw FormatError(labels_path + ": " + std::to_string(n_labels) +
                      " labels for " + std::to_string(n_images) + " images");

  const std::size_t pixels = std::size_t(n_rows) * n_cols;
  std::vector<unsigned char> buf(pixels);
  Eigen::MatrixXd features(pixels, n_images);
  for (std::uint32_t i = 0; i < n_images; ++i) {
    if (!img.read(reinterpret_cast<char*>(buf.data()), pixels))
      throw FormatError(images_path + ": truncated at image " +
                        std::to_string(i));
    for (std::size_t p = 0; p < pixels; ++p)
      features(p, i) = buf[p] / 255.0;
  }
  std::vector<unsigned char> raw_labels(n_labels);
  if (!lab.read(reinterpret_cast<char*>(raw_labels.data()), n_labels))
    throw FormatError(labels_path + ": truncated label data");
  std::vector<int> labels(raw_labels.begin(), raw_labels.end());
  return Dataset::build(std::move(features), std::move(labels));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& s, int row, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw FormatError(path + ": non-numeric field '" + s + "' at row " +
                      std::to_string(row));
  return v;
}

int parse_label(const std::string& s, int row, const std::string& path) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw FormatError(path + ": non-integer label '" + s + "' at row " +
                      std::to_string(row));
  return static_cast<int>(v);
}

}  // namespace

Dataset load_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  int row = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1 && has_header) continue;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2)
      throw FormatError(path + ": row " + std::to_string(row) +
                        " has fewer than 2 fields");
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw FormatError(path + ": row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(width));
    labels.push_back(parse_label(fields[0], row, path));
    std::vector<double> feat(width - 1);
    for (std::size_t j = 1; j < width; ++j)
      feat[j - 1] = parse_double(fields[j], row, path);
    rows.push_back(std::move(feat));
  }
  if (rows.empty()) throw FormatError(path + ": no data rows");

  Eigen::MatrixXd features(width - 1, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j + 1 < width; ++j) features(j, i) = rows[i][j];
  return Dataset::build(std::move(features), std::move(labels));
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot open for writing");
  char buf[32];
  for (Eigen::Index i = 0; i < data.count(); ++i) {
    out << data.labels[i];
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.features(j, i));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw FormatError(path + ": write failed");
}

Dataset normalize_columns(const Dataset& data) {
  Dataset out = data;
  for (Eigen::Index i = 0; i < out.count(); ++i) {
    const double norm = out.features.col(i).norm();
    if (norm == 0.0)
      throw InvalidInput("normalize_columns: column " + std::to_string(i) +
                         " is all zeros");
    out.features.col(i) /= norm;
  }
  return out;
}

namespace {

Dataset from_columns(const Dataset& src,
                     const std::vector<Eigen::Index>& columns) {
  Eigen::MatrixXd f(src.dim(), columns.size());
  std::vector<int> l(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    f.col(i) = src.features.col(columns[i]);
    l[i] = src.labels[columns[i]];
  }
  return Dataset::build(std::move(f), std::move(l));
}

}  // namespace

std::pair<Dataset, Dataset> holdout_split(const Dataset& data,
                                          const SplitSpec& spec) {
  if (spec.train_per_class < 1)
    throw InvalidInput("holdout_split: train_per_class must be >= 1");
  for (int c = 0; c < data.num_classes(); ++c)
    if (static_cast<int>(data.class_columns[c].size()) <= spec.train_per_class)
      throw InvalidInput("holdout_split: class " +
                         std::to_string(data.class_ids[c]) + " has " +
                         std::to_string(data.class_columns[c].size()) +
                         " samples, need more than " +
                         std::to_string(spec.train_per_class));

  SeededRng rng(spec.seed);
  std::vector<Eigen::Index> train_cols, test_cols;
  for (int c = 0; c < data.num_classes(); ++c) {
    std::vector<Eigen::Index> cols = data.class_columns[c];
    rng.shuffle(cols);
    for (std::size_t i = 0; i < cols.size(); ++i)
      (static_cast<int>(i) < spec.train_per_class ? train_cols : test_cols)
          .push_back(cols[i]);
  }
  return {from_columns(data, train_cols), from_columns(data, test_cols)};
}

Dataset take_per_class(const Dataset& data, int per_class) {
  if (per_class < 1) throw InvalidInput("take_per_class: per_class must be >= 1");
  std::vector<Eigen::Index> keep;
  for (int c = 0; c < data.num_classes(); ++c) {
    const auto& cols = data.class_columns[c];
    const std::size_t n = std::min<std::size_t>(cols.size(), per_class);
    keep.insert(keep.end(), cols.begin(), cols.begin() + n);
  }
  return from_columns(data, keep);
}

Dataset downsample_images(const Dataset& data, int height, int width,
                          int factor) {
  if (height < 1 || width < 1 || factor < 1)
    throw InvalidInput("downsample_images: counts must be >= 1");
  if (static_cast<Eigen::Index>(height) * width != data.dim())
    throw InvalidInput("downsample_images: height*width = " +
                       std::to_string(std::size_t(height) * width) +
                       " != feature dim " + std::to_string(data.dim()));
  if (height % factor != 0 || width % factor != 0)
    throw InvalidInput("downsample_images: factor does not divide image size");

  const int oh = height / factor;
  const int ow = width / factor;
  Eigen::MatrixXd f(static_cast<Eigen::Index>(oh) * ow, data.count());
  const double scale = 1.0 / (factor * factor);
  for (Eigen::Index i = 0; i < data.count(); ++i) {
    for (int r = 0; r < oh; ++r) {
      for (int c = 0; c < ow; ++c) {
        double sum = 0.0;
        for (int dr = 0; dr < factor; ++dr)
          for (int dc = 0; dc < factor; ++dc)
            sum += data.features((r * factor + dr) * width + c * factor + dc, i);
        f(r * ow + c, i) = sum * scale;
      }
    }
  }
  return Dataset::build(std::move(f), data.labels);
}

std::pair<Dataset, Dataset> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SeededRng rng(spec.seed);

  const Eigen::Index d = spec.ambient_dim;
  Eigen::MatrixXd train_f(d, Eigen::Index(spec.classes) * spec.train_per_class);
  Eigen::MatrixXd test_f(d, Eigen::Index(spec.classes) * spec.test_per_class);
  std::vector<int> train_l(train_f.cols()), test_l(test_f.cols());

  auto draw_sample = [&](const Eigen::MatrixXd& basis) {
    Eigen::VectorXd coeff(spec.subspace_dim);
    for (int i = 0; i < spec.subspace_dim; ++i) coeff[i] = rng.next_gaussian();
    Eigen::VectorXd s = basis * coeff;
    if (spec.noise_sigma > 0)
      for (Eigen::Index i = 0; i < d; ++i)
        s[i] += spec.noise_sigma * rng.next_gaussian();
    return s;
  };

  for (int c = 0; c < spec.classes; ++c) {
    Eigen::MatrixXd raw(d, spec.subspace_dim);
    for (int j = 0; j < spec.subspace_dim; ++j)
      for (Eigen::Index i = 0; i < d; ++i) raw(i, j) = rng.next_gaussian();
    Eigen::MatrixXd basis =
        Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
        Eigen::MatrixXd::Identity(d, spec.subspace_dim);

    for (int i = 0; i < spec.train_per_class; ++i) {
      const Eigen::Index col = Eigen::Index(c) * spec.train_per_class + i;
      train_f.col(col) = draw_sample(basis);
      train_l[col] = c;
    }
    for (int i = 0; i < spec.test_per_class; ++i) {
      const Eigen::Index col = Eigen::Index(c) * spec.test_per_class + i;
      test_f.col(col) = draw_sample(basis);
      test_l[col] = c;
    }
  }
  return {Dataset::build(std::move(train_f), std::move(train_l)),
          Dataset::build(std::move(test_f), std::move(test_l))};
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.dim() != b.dim()) throw InvalidInput("concat: feature dims differ");
  Eigen::MatrixXd f(a.dim(), a.count() + b.count());
  f << a.features, b.features;
  std::vector<int> l = a.labels;
  l.insert(l.end(), b.labels.begin(), b.labels.end());
  return Dataset::build(std::move(f), std::move(l));
}

}  // namespace tsstss
