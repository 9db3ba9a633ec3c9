#pragma once

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "agsense/data/activity_matrix.hpp"

namespace agsense::data {

// Activity-matrix dataset file:
//
//   magic  "ADM1"
//   u64    record count
//   per record:
//     u32  home-id length + bytes
//     10   ISO-8601 date bytes (YYYY-MM-DD)
//     u8   label (0 = not-agitation, 1 = agitation, 255 = unlabelled)
//     192  little-endian float64 counts, hour-major
//
// Integers little-endian; counts stored as doubles so the record layout is
// uniform. Round-trips are bit-exact.
inline void save_dataset(const std::vector<ActivityMatrix>& matrices,
                         const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  auto write_u32 = [&](uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
  };
  auto write_u64 = [&](uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  os.write("ADM1", 4);
  write_u64(matrices.size());
  for (const auto& m : matrices) {
    write_u32(static_cast<uint32_t>(m.home_id.size()));
    os.write(m.home_id.data(),
             static_cast<std::streamsize>(m.home_id.size()));
    std::string date = m.date.to_string();
    os.write(date.data(), 10);
    char label = static_cast<char>(m.label);
    os.write(&label, 1);
    for (int c : m.counts) {
      double v = static_cast<double>(c);
      uint64_t bits;
      std::memcpy(&bits, &v, 8);
      write_u64(bits);
    }
  }
  if (!os) throw ValidationError("write failed for '" + path + "'");
}

inline std::vector<ActivityMatrix> load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  auto fail = [&](const std::string& what) {
    throw ValidationError("'" + path + "': " + what);
  };
  auto read_u32 = [&]() {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) fail("truncated record");
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  };
  auto read_u64 = [&]() {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) fail("truncated record");
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  };
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ADM1", 4) != 0)
    fail("not an activity-matrix dataset");
  uint64_t count = read_u64();
  std::vector<ActivityMatrix> out;
  out.reserve(count);
  for (uint64_t r = 0; r < count; ++r) {
    ActivityMatrix m;
    uint32_t id_len = read_u32();
    m.home_id.resize(id_len);
    is.read(m.home_id.data(), id_len);
    char date_buf[10];
    is.read(date_buf, 10);
    if (!is) fail("truncated record");
    m.date = parse_date(std::string_view(date_buf, 10));
    char label;
    is.read(&label, 1);
    auto lb = static_cast<uint8_t>(label);
    if (lb != 0 && lb != 1 && lb != 255) fail("invalid label byte");
    m.label = static_cast<DayLabel>(lb);
    for (int i = 0; i < kHoursPerDay * kSensorCount; ++i) {
      uint64_t bits = read_u64();
      double v;
      std::memcpy(&v, &bits, 8);
      if (v < 0.0) fail("negative count");
      m.counts[static_cast<std::size_t>(i)] = static_cast<int>(v);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace agsense::data
