#include "intentsim/coord/message.hpp"

#include <stdexcept>

namespace intentsim::coord {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v & 0xff));
  out.push_back(uint8_t(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t((v >> (8 * i)) & 0xff));
}

uint16_t get_u16(const std::vector<uint8_t>& b, size_t at) {
  return uint16_t(b[at]) | uint16_t(b[at + 1]) << 8;
}

}  // namespace

std::vector<uint8_t> encode_message(const IntentionMessage& msg) {
  if (msg.waypoints.empty()) throw std::invalid_argument("intention message with no waypoints");
  if (msg.waypoints.size() > 0xffff) throw std::invalid_argument("intention path too long");
  std::vector<uint8_t> out;
  out.reserve(kWireHeaderBytes + 4 * msg.waypoints.size());
  out.push_back(msg.agent_id);
  put_u32(out, msg.seq);
  out.push_back(msg.effector ? 1 : 0);
  put_u16(out, uint16_t(msg.waypoints.size()));
  for (const CellCoord& c : msg.waypoints) {
    if (c.col < 0 || c.col > 0xffff || c.row < 0 || c.row > 0xffff)
      throw std::invalid_argument("waypoint outside wire range");
    put_u16(out, uint16_t(c.col));
    put_u16(out, uint16_t(c.row));
  }
  return out;
}

IntentionMessage decode_message(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < kWireHeaderBytes) throw std::invalid_argument("short intention message");
  IntentionMessage msg;
  msg.agent_id = bytes[0];
  msg.seq = uint32_t(bytes[1]) | uint32_t(bytes[2]) << 8 | uint32_t(bytes[3]) << 16 |
            uint32_t(bytes[4]) << 24;
  msg.effector = bytes[5] != 0;
  uint16_t count = get_u16(bytes, 6);
  if (count == 0) throw std::invalid_argument("intention message with no waypoints");
  if (bytes.size() != kWireHeaderBytes + size_t(count) * 4)
    throw std::invalid_argument("intention message length mismatch");
  msg.waypoints.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    size_t at = kWireHeaderBytes + i * 4;
    msg.waypoints.push_back({int(get_u16(bytes, at)), int(get_u16(bytes, at + 2))});
  }
  return msg;
}

}  // namespace intentsim::coord
