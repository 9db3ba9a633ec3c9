#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "agsense/common/error.hpp"
#include "agsense/nn/network.hpp"
#include "agsense/nn/tensor.hpp"

namespace agsense::io {

// Artifact container: a JSON metadata block plus named float64 tensors.
//
//   magic   "AGC1"
//   u32     format version (1)
//   u64     metadata length, followed by that many UTF-8 JSON bytes
//   u32     tensor count
//   per tensor:
//     u32   name length + bytes
//     u32   rank
//     u64*  extents
//     u64   offset into the payload, in bytes
//   u64     payload length in bytes
//   payload little-endian IEEE-754 doubles
//
// All integers little-endian. Doubles are written bit-exact, so a
// load/save cycle reproduces the file byte for byte.
class Container {
 public:
  nlohmann::json meta = nlohmann::json::object();

  void put(const std::string& name, nn::Tensor tensor) {
    for (auto& e : entries_)
      if (e.name == name)
        throw ValidationError("container: duplicate tensor '" + name + "'");
    entries_.push_back({name, std::move(tensor)});
  }

  const nn::Tensor& get(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e.tensor;
    throw ValidationError("container: missing tensor '" + name + "'");
  }

  bool has(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return true;
    return false;
  }

  std::size_t tensor_count() const { return entries_.size(); }
  const std::string& tensor_name(std::size_t i) const {
    return entries_[i].name;
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open '" + path + "' for writing");
    os.write("AGC1", 4);
    write_u32(os, 1);
    std::string meta_text = meta.dump();
    write_u64(os, meta_text.size());
    os.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));
    write_u32(os, static_cast<uint32_t>(entries_.size()));
    uint64_t offset = 0;
    for (const auto& e : entries_) {
      write_u32(os, static_cast<uint32_t>(e.name.size()));
      os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
      write_u32(os, static_cast<uint32_t>(e.tensor.rank()));
      for (int d = 0; d < e.tensor.rank(); ++d)
        write_u64(os, static_cast<uint64_t>(e.tensor.dim(d)));
      write_u64(os, offset);
      offset += static_cast<uint64_t>(e.tensor.size()) * 8;
    }
    write_u64(os, offset);
    for (const auto& e : entries_)
      for (int i = 0; i < e.tensor.size(); ++i) write_f64(os, e.tensor[i]);
    if (!os) throw ValidationError("write failed for '" + path + "'");
  }

  static Container load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "AGC1", 4) != 0)
      throw ValidationError("'" + path + "' is not an artifact container");
    uint32_t version = read_u32(is, path);
    if (version != 1)
      throw ValidationError("'" + path + "': unsupported container version " +
                            std::to_string(version));
    Container c;
    uint64_t meta_len = read_u64(is, path);
    std::string meta_text(meta_len, '\0');
    is.read(meta_text.data(), static_cast<std::streamsize>(meta_len));
    if (!is) throw ValidationError("'" + path + "': truncated metadata");
    c.meta = nlohmann::json::parse(meta_text, nullptr, false);
    if (c.meta.is_discarded())
      throw ValidationError("'" + path + "': corrupt metadata JSON");

    uint32_t count = read_u32(is, path);
    struct Header {
      std::string name;
      std::vector<int> shape;
      uint64_t offset;
      std::size_t elements;
    };
    std::vector<Header> headers(count);
    for (auto& h : headers) {
      uint32_t name_len = read_u32(is, path);
      h.name.resize(name_len);
      is.read(h.name.data(), name_len);
      uint32_t rank = read_u32(is, path);
      h.elements = 1;
      for (uint32_t d = 0; d < rank; ++d) {
        uint64_t extent = read_u64(is, path);
        h.shape.push_back(static_cast<int>(extent));
        h.elements *= extent;
      }
      h.offset = read_u64(is, path);
      if (!is) throw ValidationError("'" + path + "': truncated manifest");
    }
    uint64_t payload_len = read_u64(is, path);
    std::vector<char> payload(payload_len);
    is.read(payload.data(), static_cast<std::streamsize>(payload_len));
    if (!is) throw ValidationError("'" + path + "': truncated payload");

    for (auto& h : headers) {
      if (h.offset + h.elements * 8 > payload_len)
        throw ValidationError("'" + path + "': tensor '" + h.name +
                              "' overruns payload");
      std::vector<double> data(h.elements);
      for (std::size_t i = 0; i < h.elements; ++i) {
        uint64_t bits = 0;
        const unsigned char* src = reinterpret_cast<const unsigned char*>(
            payload.data() + h.offset + i * 8);
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | src[b];
        double v;
        std::memcpy(&v, &bits, 8);
        data[i] = v;
      }
      c.put(h.name, nn::Tensor(h.shape, std::move(data)));
    }
    return c;
  }

 private:
  struct Entry {
    std::string name;
    nn::Tensor tensor;
  };

  static void write_u32(std::ofstream& os, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
  }
  static void write_u64(std::ofstream& os, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
  }
  static void write_f64(std::ofstream& os, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(os, bits);
  }
  static uint32_t read_u32(std::ifstream& is, const std::string& path) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw ValidationError("'" + path + "': truncated file");
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  static uint64_t read_u64(std::ifstream& is, const std::string& path) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw ValidationError("'" + path + "': truncated file");
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::vector<Entry> entries_;
};

// Network weights <-> container tensors, keyed by parameter name.
inline void store_network(Container& c, const std::string& prefix,
                          nn::Network& net) {
  for (auto& p : net.params()) c.put(prefix + p.name, *p.value);
}

inline void load_network(const Container& c, const std::string& prefix,
                         nn::Network& net) {
  for (auto& p : net.params()) {
    const nn::Tensor& stored = c.get(prefix + p.name);
    if (!stored.same_shape(*p.value))
      throw ValidationError("weight '" + prefix + p.name + "' has shape " +
                            stored.shape_string() + ", expected " +
                            p.value->shape_string());
    *p.value = stored;
  }
}

}  // namespace agsense::io
