#include "intentsim/learn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

namespace intentsim::learn {

using json = nlohmann::json;

namespace {

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {(unsigned char)(v & 0xff), (unsigned char)((v >> 8) & 0xff),
                        (unsigned char)((v >> 16) & 0xff), (unsigned char)((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
  return v;
}

void put_f32_le(std::ostream& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

float get_f32_le(std::istream& in) {
  uint32_t bits = get_u32(in);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

json read_header(std::istream& in, const char* magic, const std::string& path) {
  char m[5];
  in.read(m, 5);
  if (!in || std::memcmp(m, magic, 5) != 0)
    throw std::runtime_error("checkpoint load: bad magic in " + path);
  uint32_t header_len = get_u32(in);
  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (!in) throw std::runtime_error("checkpoint load: truncated header in " + path);
  return json::parse(header);
}

}  // namespace

void save_checkpoint(const std::string& path, const char* magic,
                     const std::vector<nn::ParamView<float>>& params,
                     const std::string& meta_json) {
  json header;
  header["format_version"] = 1;
  header["meta"] = json::parse(meta_json.empty() ? "{}" : meta_json);
  uint64_t total = 0;
  json tensors = json::array();
  for (const auto& p : params) {
    tensors.push_back({{"name", p.name}, {"count", p.value->size()}});
    total += p.value->size();
  }
  header["tensors"] = tensors;
  std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint save: cannot open " + path);
  out.write(magic, 5);
  put_u32(out, uint32_t(header_text.size()));
  out.write(header_text.data(), std::streamsize(header_text.size()));
  put_u64(out, total);
  for (const auto& p : params)
    for (float v : *p.value) put_f32_le(out, v);
  if (!out) throw std::runtime_error("checkpoint save: short write to " + path);
}

std::string load_checkpoint(const std::string& path, const char* magic,
                            std::vector<nn::ParamView<float>>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint load: cannot open " + path);
  json header = read_header(in, magic, path);
  const json& tensors = header.at("tensors");
  if (tensors.size() != params.size())
    throw std::runtime_error("checkpoint load: tensor count mismatch in " + path);
  uint64_t total = get_u64(in);
  uint64_t expect = 0;
  for (size_t i = 0; i < params.size(); ++i) {
    const json& t = tensors[i];
    if (t.at("name").get<std::string>() != params[i].name ||
        t.at("count").get<uint64_t>() != params[i].value->size())
      throw std::runtime_error("checkpoint load: layout mismatch at tensor '" + params[i].name +
                               "' in " + path);
    expect += params[i].value->size();
  }
  if (total != expect) throw std::runtime_error("checkpoint load: blob size mismatch in " + path);
  for (auto& p : params)
    for (float& v : *p.value) v = get_f32_le(in);
  if (!in) throw std::runtime_error("checkpoint load: truncated blob in " + path);
  return header.at("meta").dump();
}

std::string read_checkpoint_meta(const std::string& path, const char* magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint load: cannot open " + path);
  return read_header(in, magic, path).at("meta").dump();
}

}  // namespace intentsim::learn
