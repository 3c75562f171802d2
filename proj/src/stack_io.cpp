#include "wavemorph/stack_io.hpp"

#include "wavemorph/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

namespace wavemorph {

namespace {

constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[off + i]) << (8 * i);
  return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xffffffffULL) throw InputError(std::string(what) + " does not fit in u32");
  return static_cast<std::uint32_t>(v);
}

std::vector<std::uint8_t> encode_planes(const char magic[4], const std::vector<Plane>& planes,
                                        std::size_t width, std::size_t height) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + planes.size() * width * height * 4);
  out.insert(out.end(), magic, magic + 4);
  put_u32(out, checked_u32(planes.size(), "plane count"));
  put_u32(out, checked_u32(height, "height"));
  put_u32(out, checked_u32(width, "width"));
  for (const auto& p : planes) {
    if (p.width() != width || p.height() != height)
      throw InputError("plane dimensions differ from header dimensions");
    for (double v : p.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

struct DecodedPlanes {
  std::size_t width;
  std::size_t height;
  std::vector<Plane> planes;
};

DecodedPlanes decode_planes(const char magic[4], std::span<const std::uint8_t> in) {
  if (in.size() < kHeaderBytes || std::memcmp(in.data(), magic, 4) != 0)
    throw InputError(std::string("missing ") + std::string(magic, 4) + " header");
  const std::size_t count = get_u32(in, 4);
  const std::size_t height = get_u32(in, 8);
  const std::size_t width = get_u32(in, 12);
  const std::size_t expected = kHeaderBytes + count * height * width * 4;
  if (in.size() != expected)
    throw InputError("payload is " + std::to_string(in.size()) + " bytes, header implies " +
                     std::to_string(expected));
  DecodedPlanes d{width, height, {}};
  d.planes.reserve(count);
  std::size_t off = kHeaderBytes;
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<double> data(width * height);
    for (auto& v : data) {
      v = static_cast<double>(std::bit_cast<float>(get_u32(in, off)));
      off += 4;
    }
    d.planes.emplace_back(width, height, std::move(data));
  }
  return d;
}

} // namespace

std::vector<std::uint8_t> encode_wst(const SubBandStack& stack) {
  return encode_planes("WST1", stack.bands(), stack.width(), stack.height());
}

SubBandStack decode_wst(std::span<const std::uint8_t> bytes) {
  auto d = decode_planes("WST1", bytes);
  if (d.planes.size() != static_cast<std::size_t>(kNumSubbands))
    throw InputError("WST1 file holds " + std::to_string(d.planes.size()) + " bands, expected 48");
  return SubBandStack(d.width, d.height, std::move(d.planes));
}

void write_wst(const std::filesystem::path& path, const SubBandStack& stack) {
  write_file_bytes(path, encode_wst(stack));
}

SubBandStack read_wst(const std::filesystem::path& path) { return decode_wst(read_file_bytes(path)); }

std::vector<std::uint8_t> encode_wsb(const ExportedTensor& tensor) {
  if (tensor.channels.empty()) throw InputError("tensor has no channels");
  return encode_planes("WSB1", tensor.channels, tensor.width, tensor.height);
}

ExportedTensor decode_wsb(std::span<const std::uint8_t> bytes) {
  auto d = decode_planes("WSB1", bytes);
  ExportedTensor t;
  t.width = d.width;
  t.height = d.height;
  t.channels = std::move(d.planes);
  return t;
}

void write_wsb(const std::filesystem::path& path, const ExportedTensor& tensor) {
  write_file_bytes(path, encode_wsb(tensor));
}

ExportedTensor read_wsb(const std::filesystem::path& path) {
  auto t = decode_wsb(read_file_bytes(path));
  t.image_id = path.stem().string();
  return t;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("error writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

} // namespace wavemorph
