#include "pinball/detector_block.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pinball {

namespace {

constexpr size_t kHeaderBytes = 12;

void put_le(std::vector<uint8_t>& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get_le(std::span<const uint8_t> in, size_t offset, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<uint64_t>(in[offset + i]) << (8 * i);
  return v;
}

size_t payload_bytes(int distance, int rounds) {
  const size_t per_layer = static_cast<size_t>(distance * distance - 1) / 2;
  return (static_cast<size_t>(rounds + 1) * per_layer + 7) / 8;
}

}  // namespace

std::vector<int> DetectorBlock::active() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

void DetectorBlock::clear() {
  std::fill(bits.begin(), bits.end(), 0);
  logical_flip = false;
}

size_t record_size(int distance, int rounds) {
  return kHeaderBytes + payload_bytes(distance, rounds) + 1;
}

std::vector<uint8_t> encode_record(const DetectorBlock& block, int rounds, uint64_t shot_index) {
  if (block.layers != rounds + 1 || block.per_layer != (block.distance * block.distance - 1) / 2) {
    throw std::invalid_argument("detector block shape does not match distance and rounds");
  }
  std::vector<uint8_t> out;
  out.reserve(record_size(block.distance, rounds));
  put_le(out, static_cast<uint64_t>(block.distance), 2);
  put_le(out, static_cast<uint64_t>(rounds), 2);
  put_le(out, shot_index, 8);
  const size_t start = out.size();
  out.resize(start + payload_bytes(block.distance, rounds), 0);
  for (int i = 0; i < block.size(); ++i) {
    if (block.bits[i]) out[start + i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  }
  out.push_back(block.logical_flip ? 1 : 0);
  return out;
}

DetectorRecord decode_record(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw std::invalid_argument("truncated record header");
  DetectorRecord rec;
  const int d = static_cast<int>(get_le(bytes, 0, 2));
  rec.rounds = static_cast<int>(get_le(bytes, 2, 2));
  rec.shot_index = get_le(bytes, 4, 8);
  if (d < 3 || d % 2 == 0 || rec.rounds < 1) throw std::invalid_argument("bad record header");
  if (bytes.size() != record_size(d, rec.rounds)) {
    throw std::invalid_argument("record size does not match header");
  }
  rec.block = DetectorBlock(d, rec.rounds + 1, (d * d - 1) / 2);
  for (int i = 0; i < rec.block.size(); ++i) {
    rec.block.bits[i] = (bytes[kHeaderBytes + i / 8] >> (i % 8)) & 1;
  }
  const uint8_t obs = bytes.back();
  if (obs > 1) throw std::invalid_argument("observable byte must be 0 or 1");
  rec.block.logical_flip = obs == 1;
  return rec;
}

void write_record(std::ostream& out, const DetectorBlock& block, int rounds, uint64_t shot_index) {
  const auto bytes = encode_record(block, rounds, shot_index);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

bool read_record(std::istream& in, DetectorRecord& record) {
  std::vector<uint8_t> buf(kHeaderBytes);
  in.read(reinterpret_cast<char*>(buf.data()), kHeaderBytes);
  if (in.gcount() == 0) return false;
  if (static_cast<size_t>(in.gcount()) != kHeaderBytes) {
    throw std::invalid_argument("truncated record header");
  }
  const int d = static_cast<int>(get_le(buf, 0, 2));
  const int rounds = static_cast<int>(get_le(buf, 2, 2));
  if (d < 3 || d % 2 == 0 || rounds < 1) throw std::invalid_argument("bad record header");
  const size_t rest = record_size(d, rounds) - kHeaderBytes;
  buf.resize(kHeaderBytes + rest);
  in.read(reinterpret_cast<char*>(buf.data() + kHeaderBytes), static_cast<std::streamsize>(rest));
  if (static_cast<size_t>(in.gcount()) != rest) throw std::invalid_argument("truncated record");
  record = decode_record(buf);
  return true;
}

}  // namespace pinball
