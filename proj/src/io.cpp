#include "evdkit/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace evdkit {

namespace {

static_assert(sizeof(double) == 8, "FP64 storage assumed");

template <typename T>
void put_le(std::vector<unsigned char>& out, T v) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      out.push_back(raw[sizeof(T) - 1 - i]);
  } else {
    out.insert(out.end(), raw, raw + sizeof(T));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  unsigned char raw[sizeof(T)];
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) raw[i] = p[sizeof(T) - 1 - i];
  } else {
    std::memcpy(raw, p, sizeof(T));
  }
  T v;
  std::memcpy(&v, raw, sizeof(T));
  return v;
}

void write_file(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path);
}

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("cannot open: " + path);
  const std::streamsize size = f.tellg();
  f.seekg(0);
  std::vector<unsigned char> bytes(static_cast<std::size_t>(size));
  if (size > 0) {
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f) throw IoError("read failed: " + path);
  }
  return bytes;
}

struct Header {
  std::uint64_t n = 0;
  const unsigned char* payload = nullptr;
  std::size_t payload_bytes = 0;
};

Header parse_header(const std::vector<unsigned char>& bytes, const char* magic,
                    const std::string& path) {
  if (bytes.size() < 16) throw IoError("truncated header: " + path);
  if (std::memcmp(bytes.data(), magic, 4) != 0)
    throw IoError("bad magic (expected " + std::string(magic) + "): " + path);
  const std::uint32_t version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != 1)
    throw IoError("unsupported version " + std::to_string(version) + ": " + path);
  Header h;
  h.n = get_le<std::uint64_t>(bytes.data() + 8);
  h.payload = bytes.data() + 16;
  h.payload_bytes = bytes.size() - 16;
  return h;
}

}  // namespace

void write_symf(const std::string& path, const SymmetricMatrix& a) {
  std::vector<unsigned char> bytes;
  bytes.reserve(16 + a.data.size() * 8);
  bytes.insert(bytes.end(), {'S', 'Y', 'M', 'F'});
  put_le<std::uint32_t>(bytes, 1);
  put_le<std::uint64_t>(bytes, static_cast<std::uint64_t>(a.n));
  for (double v : a.data) put_le<double>(bytes, v);
  write_file(path, bytes);
}

SymmetricMatrix read_symf(const std::string& path) {
  const auto bytes = read_file(path);
  const Header h = parse_header(bytes, "SYMF", path);
  if (h.n == 0 || h.n > (1u << 20))
    throw IoError("implausible order " + std::to_string(h.n) + ": " + path);
  const int n = static_cast<int>(h.n);
  const std::size_t want = static_cast<std::size_t>(n) * n * 8;
  if (h.payload_bytes != want)
    throw IoError("payload size mismatch: " + path);
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    a.data[i] = get_le<double>(h.payload + i * 8);
  return a;
}

void write_trid(const std::string& path, const TridiagonalMatrix& t) {
  std::vector<unsigned char> bytes;
  bytes.reserve(16 + (t.d.size() + t.e.size()) * 8);
  bytes.insert(bytes.end(), {'T', 'R', 'I', 'D'});
  put_le<std::uint32_t>(bytes, 1);
  put_le<std::uint64_t>(bytes, static_cast<std::uint64_t>(t.d.size()));
  for (double v : t.d) put_le<double>(bytes, v);
  for (double v : t.e) put_le<double>(bytes, v);
  write_file(path, bytes);
}

TridiagonalMatrix read_trid(const std::string& path) {
  const auto bytes = read_file(path);
  const Header h = parse_header(bytes, "TRID", path);
  if (h.n == 0 || h.n > (1u << 26))
    throw IoError("implausible order " + std::to_string(h.n) + ": " + path);
  const int n = static_cast<int>(h.n);
  const std::size_t want = static_cast<std::size_t>(2 * n - 1) * 8;
  if (h.payload_bytes != want)
    throw IoError("payload size mismatch: " + path);
  TridiagonalMatrix t;
  t.d.resize(n);
  t.e.resize(n - 1);
  for (int i = 0; i < n; ++i) t.d[i] = get_le<double>(h.payload + i * 8ull);
  for (int i = 0; i + 1 < n; ++i)
    t.e[i] = get_le<double>(h.payload + (static_cast<std::size_t>(n) + i) * 8);
  return t;
}

}  // namespace evdkit
