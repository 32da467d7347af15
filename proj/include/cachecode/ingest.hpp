#ifndef CACHECODE_INGEST_HPP
#define CACHECODE_INGEST_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cachecode/errors.hpp"
#include "cachecode/finite_field.hpp"
#include "cachecode/placement.hpp"

namespace cachecode {

/// Byte files cut into C(K, t) equal segments. Each segment is a bit string
/// read in slices of m * b bits, b = floor(log2 q) bits per base coefficient;
/// slice s of every segment forms the library `slices[s]`.
struct IngestedFiles {
  SchemeParams params;
  ExtField field;
  std::vector<std::string> names;
  std::vector<std::uint64_t> lengths;
  std::uint64_t segment_bytes = 0;
  std::vector<Library> slices;
};

inline int bits_per_coefficient(const PrimeField& F) {
  return static_cast<int>(std::bit_width(F.modulus())) - 1;
}

namespace detail {

inline std::uint32_t read_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t pos, int width) {
  std::uint32_t v = 0;
  for (int i = 0; i < width; ++i, ++pos) {
    const std::uint64_t byte = pos / 8;
    const int bit = (byte < bytes.size()) ? (bytes[byte] >> (7 - pos % 8)) & 1 : 0;
    v = (v << 1) | static_cast<std::uint32_t>(bit);
  }
  return v;
}

inline void write_bits(std::vector<std::uint8_t>& bytes, std::uint64_t pos, int width, std::uint32_t v) {
  for (int i = width - 1; i >= 0; --i, ++pos) {
    const std::uint64_t byte = pos / 8;
    if (byte >= bytes.size()) return;
    if ((v >> i) & 1U) bytes[byte] |= static_cast<std::uint8_t>(0x80U >> (pos % 8));
  }
}

}  // namespace detail

inline IngestedFiles ingest_bytes(const SchemeParams& p, const ExtField& ext, std::vector<std::string> names,
                                  const std::vector<std::vector<std::uint8_t>>& files) {
  if (static_cast<int>(files.size()) != p.N())
    throw InvalidParams("need exactly N = " + std::to_string(p.N()) + " files, got " + std::to_string(files.size()));
  const int b = bits_per_coefficient(ext.base());
  if (b < 1) throw FieldTooSmall("q = 2 carries no whole bit per coefficient under this packing");
  const auto per_file = static_cast<std::uint64_t>(p.segments_per_file());
  std::uint64_t longest = 0;
  for (const auto& f : files) longest = std::max<std::uint64_t>(longest, f.size());
  const std::uint64_t seg_bytes = std::max<std::uint64_t>(1, (longest + per_file - 1) / per_file);
  const std::uint64_t symbol_bits = static_cast<std::uint64_t>(ext.degree()) * static_cast<std::uint64_t>(b);
  const std::uint64_t slice_count = (seg_bytes * 8 + symbol_bits - 1) / symbol_bits;

  const SegmentIndex index(p);
  std::vector<std::vector<ExtElement>> values(slice_count);
  for (auto& v : values) v.reserve(static_cast<std::size_t>(index.size()));
  for (int i = 0; i < index.size(); ++i) {
    const auto seg = index.id(i);
    const auto& file = files[static_cast<std::size_t>(seg.file - 1)];
    const std::uint64_t offset = static_cast<std::uint64_t>(i % static_cast<int>(per_file)) * seg_bytes;
    std::vector<std::uint8_t> bytes(seg_bytes, 0);
    for (std::uint64_t j = 0; j < seg_bytes && offset + j < file.size(); ++j) bytes[j] = file[offset + j];
    for (std::uint64_t s = 0; s < slice_count; ++s) {
      std::vector<std::uint32_t> coeffs(static_cast<std::size_t>(ext.degree()));
      for (int c = 0; c < ext.degree(); ++c)
        coeffs[static_cast<std::size_t>(c)] =
            detail::read_bits(bytes, s * symbol_bits + static_cast<std::uint64_t>(c) * b, b);
      values[s].push_back(ext.from_coeffs(std::move(coeffs)));
    }
  }
  IngestedFiles out{p, ext, std::move(names), {}, seg_bytes, {}};
  for (const auto& f : files) out.lengths.push_back(f.size());
  for (auto& v : values) out.slices.emplace_back(p, ext, std::move(v));
  return out;
}

/// Rebuilds file n from its segments, given as segments[slice][lex subset index].
inline std::vector<std::uint8_t> reassemble_file(const IngestedFiles& in, int n,
                                                 const std::vector<std::vector<ExtElement>>& segments) {
  const int b = bits_per_coefficient(in.field.base());
  const int m = in.field.degree();
  const std::uint64_t symbol_bits = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(b);
  const auto per_file = static_cast<std::size_t>(in.params.segments_per_file());
  std::vector<std::uint8_t> out;
  out.reserve(per_file * in.segment_bytes);
  for (std::size_t i = 0; i < per_file; ++i) {
    std::vector<std::uint8_t> bytes(in.segment_bytes, 0);
    for (std::size_t s = 0; s < segments.size(); ++s)
      for (int c = 0; c < m; ++c)
        detail::write_bits(bytes, s * symbol_bits + static_cast<std::uint64_t>(c) * b, b,
                           segments[s][i].coeffs[static_cast<std::size_t>(c)]);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  out.resize(in.lengths.at(static_cast<std::size_t>(n - 1)));
  return out;
}

inline nlohmann::json sidecar(const IngestedFiles& in, std::uint64_t seed, CacheVariant variant) {
  return {{"schema_version", 1},
          {"N", in.params.N()},
          {"K", in.params.K()},
          {"t", in.params.t()},
          {"q", in.field.base().modulus()},
          {"m", in.field.degree()},
          {"modulus", in.field.modulus()},
          {"seed", seed},
          {"variant", variant_name(variant)},
          {"names", in.names},
          {"lengths", in.lengths},
          {"segment_bytes", in.segment_bytes}};
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path.string());
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

/// The N regular files of `dir` in name order.
inline IngestedFiles ingest_directory(const SchemeParams& p, const ExtField& ext, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() != ".json") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  if (static_cast<int>(paths.size()) != p.N())
    throw InvalidParams(dir.string() + " holds " + std::to_string(paths.size()) + " files, expected N = " +
                        std::to_string(p.N()));
  std::vector<std::string> names;
  std::vector<std::vector<std::uint8_t>> files;
  for (const auto& path : paths) {
    names.push_back(path.filename().string());
    files.push_back(read_file_bytes(path));
  }
  return ingest_bytes(p, ext, std::move(names), files);
}

}  // namespace cachecode

#endif  // CACHECODE_INGEST_HPP
