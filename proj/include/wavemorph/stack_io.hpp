#pragma once

#include "wavemorph/plane.hpp"
#include "wavemorph/wavelet.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wavemorph {

// Both formats: 4-byte magic, little-endian u32 [count, height, width], then
// count*height*width little-endian IEEE-754 float32 values, plane-major and
// row-major within a plane. Values are narrowed to float32 on write.

/// "WST1": the full 48-band stack.
std::vector<std::uint8_t> encode_wst(const SubBandStack& stack);
SubBandStack decode_wst(std::span<const std::uint8_t> bytes);
void write_wst(const std::filesystem::path& path, const SubBandStack& stack);
SubBandStack read_wst(const std::filesystem::path& path);

/// Selected sub-band planes for one image, in selection-rank order.
struct ExportedTensor {
  std::string image_id;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Plane> channels;

  friend bool operator==(const ExportedTensor&, const ExportedTensor&) = default;
};

/// "WSB1": k selected channels.
std::vector<std::uint8_t> encode_wsb(const ExportedTensor& tensor);
ExportedTensor decode_wsb(std::span<const std::uint8_t> bytes);
void write_wsb(const std::filesystem::path& path, const ExportedTensor& tensor);
ExportedTensor read_wsb(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace wavemorph
