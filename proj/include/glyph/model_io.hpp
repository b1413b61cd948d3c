#pragma once

// Model file format (all integers little-endian):
//
//   bytes  0..9   magic "GLYPHMODEL"
//   u32           format version (currently 1)
//   u32           feature layout version (must match the library's)
//   u64           training seed
//   u32 + bytes   category string
//   u32           codebook count
//   per codebook:
//     u32 + bytes   class label
//     u32           requested k
//     u32           training sample count
//     u8            reduced flag (1 = fewer distinct samples than k)
//     u32           centroid count
//     u32           dimension (must be 256)
//     f64 x (count*dim)  centroid coordinates, IEEE-754 little-endian
//
// Doubles are stored bit-exactly, so save followed by load reproduces the
// model down to the last centroid bit.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "glyph/classifier.hpp"
#include "glyph/errors.hpp"
#include "glyph/features.hpp"

namespace glyph {

namespace detail {

constexpr char kModelMagic[10] = {'G', 'L', 'Y', 'P', 'H',
                                  'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kModelFormatVersion = 1;
// Guard rails against nonsense sizes in corrupt files.
constexpr std::uint32_t kMaxCodebooks = 1u << 20;
constexpr std::uint32_t kMaxCentroids = 1u << 24;
constexpr std::uint32_t kMaxStringLen = 1u << 16;

inline void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}
inline void put_u64(std::string& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffu));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}
inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}
inline void put_string(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

class ModelReader {
 public:
  explicit ModelReader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint8_t u8() { return raw(1)[0]; }
  std::uint32_t u32() {
    const std::uint8_t* p = raw(4);
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
           std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
  }
  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    return lo | std::uint64_t(u32()) << 32;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t len = u32();
    if (len > kMaxStringLen)
      throw ModelIoError(ModelIoError::Kind::corrupt,
                         "model file: implausible string length");
    const std::uint8_t* p = raw(len);
    return std::string(reinterpret_cast<const char*>(p), len);
  }
  const std::uint8_t* raw(std::size_t count) {
    if (bytes_.size() - pos_ < count)
      throw ModelIoError(ModelIoError::Kind::corrupt,
                         "model file truncated");
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes_.data()) + pos_;
    pos_ += count;
    return p;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  std::string bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline void save_model(const Model& model, const std::filesystem::path& path) {
  std::string out;
  out.append(detail::kModelMagic, sizeof(detail::kModelMagic));
  detail::put_u32(out, detail::kModelFormatVersion);
  detail::put_u32(out, model.feature_layout_version);
  detail::put_u64(out, model.seed);
  detail::put_string(out, model.category);
  detail::put_u32(out, static_cast<std::uint32_t>(model.codebooks.size()));
  for (const auto& cb : model.codebooks) {
    detail::put_string(out, cb.label);
    detail::put_u32(out, static_cast<std::uint32_t>(cb.k_requested));
    detail::put_u32(out, cb.training_count);
    out.push_back(cb.reduced ? '\1' : '\0');
    detail::put_u32(out, static_cast<std::uint32_t>(cb.centroid_count));
    detail::put_u32(out, static_cast<std::uint32_t>(kFeatureCount));
    for (double v : cb.centroids) detail::put_f64(out, v);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw ModelIoError(ModelIoError::Kind::io,
                       "cannot open for writing: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  f.flush();
  if (!f)
    throw ModelIoError(ModelIoError::Kind::io,
                       "write failed: " + path.string());
}

inline Model load_model(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw ModelIoError(ModelIoError::Kind::io,
                       "cannot open for reading: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  if (f.bad())
    throw ModelIoError(ModelIoError::Kind::io, "read failed: " + path.string());

  detail::ModelReader in(std::move(bytes));
  const std::uint8_t* magic = in.raw(sizeof(detail::kModelMagic));
  if (std::memcmp(magic, detail::kModelMagic, sizeof(detail::kModelMagic)) != 0)
    throw ModelIoError(ModelIoError::Kind::corrupt,
                       "not a model file: " + path.string());
  const std::uint32_t format = in.u32();
  if (format != detail::kModelFormatVersion)
    throw ModelIoError(ModelIoError::Kind::version_mismatch,
                       "unsupported model format version " +
                           std::to_string(format));
  Model model;
  model.feature_layout_version = in.u32();
  if (model.feature_layout_version != kFeatureLayoutVersion)
    throw ModelIoError(ModelIoError::Kind::version_mismatch,
                       "feature layout version " +
                           std::to_string(model.feature_layout_version) +
                           " does not match this build (" +
                           std::to_string(kFeatureLayoutVersion) + ")");
  model.seed = in.u64();
  model.category = in.str();
  const std::uint32_t codebook_count = in.u32();
  if (codebook_count > detail::kMaxCodebooks)
    throw ModelIoError(ModelIoError::Kind::corrupt,
                       "model file: implausible codebook count");
  model.codebooks.reserve(codebook_count);
  for (std::uint32_t c = 0; c < codebook_count; ++c) {
    Codebook cb;
    cb.label = in.str();
    cb.k_requested = static_cast<int>(in.u32());
    cb.training_count = in.u32();
    cb.reduced = in.u8() != 0;
    const std::uint32_t centroid_count = in.u32();
    const std::uint32_t dim = in.u32();
    if (dim != static_cast<std::uint32_t>(kFeatureCount))
      throw ModelIoError(ModelIoError::Kind::dimension_mismatch,
                         "codebook '" + cb.label + "' has dimension " +
                             std::to_string(dim) + ", expected " +
                             std::to_string(kFeatureCount));
    if (centroid_count == 0 || centroid_count > detail::kMaxCentroids)
      throw ModelIoError(ModelIoError::Kind::corrupt,
                         "codebook '" + cb.label + "' has bad centroid count");
    cb.centroid_count = centroid_count;
    cb.centroids.resize(static_cast<std::size_t>(centroid_count) *
                        kFeatureCount);
    for (double& v : cb.centroids) v = in.f64();
    model.codebooks.push_back(std::move(cb));
  }
  if (!in.at_end())
    throw ModelIoError(ModelIoError::Kind::corrupt,
                       "model file has trailing bytes: " + path.string());
  return model;
}

}  // namespace glyph
