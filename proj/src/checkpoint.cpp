#include "snls/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "snls/error.hpp"

namespace snls {
namespace {

constexpr char kMagic[4] = {'S', 'N', 'L', 'S'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes = 8) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(const std::uint8_t* p, int bytes = 8) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const std::uint8_t* p) { return std::bit_cast<double>(get_u64(p)); }

[[noreturn]] void io_error(const std::string& msg) { throw Error(ErrorCode::kIo, msg); }

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const ComplexField& field, double time) {
  const auto n = field.size();
  std::vector<std::uint8_t> out;
  out.reserve(kCheckpointHeaderBytes + 16 * n);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u64(out, kCheckpointVersion, 4);
  put_u64(out, n);
  put_f64(out, field.grid().length());
  put_f64(out, time);
  for (const auto& z : field.values()) {
    put_f64(out, z.real());
    put_f64(out, z.imag());
  }
  return out;
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kCheckpointHeaderBytes) io_error("checkpoint: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) io_error("checkpoint: bad magic");
  const auto version = get_u64(bytes.data() + 4, 4);
  if (version != kCheckpointVersion) {
    io_error("checkpoint: unsupported format_version " + std::to_string(version));
  }
  const auto n = get_u64(bytes.data() + 8);
  const double length = get_f64(bytes.data() + 16);
  const double time = get_f64(bytes.data() + 24);
  if (n > (bytes.size() - kCheckpointHeaderBytes) / 16 ||
      bytes.size() != kCheckpointHeaderBytes + 16 * n) {
    io_error("checkpoint: payload size does not match n_points = " + std::to_string(n));
  }
  std::vector<Complex> values(n);
  const auto* p = bytes.data() + kCheckpointHeaderBytes;
  for (std::size_t j = 0; j < n; ++j, p += 16) values[j] = {get_f64(p), get_f64(p + 8)};
  try {
    return Checkpoint{ComplexField(Grid(n, length), std::move(values)), time};
  } catch (const Error& e) {
    io_error(std::string("checkpoint: ") + e.what());
  }
}

void write_checkpoint(const std::string& path, const ComplexField& field, double time) {
  const auto bytes = encode_checkpoint(field, time);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) io_error("failed writing '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace snls
