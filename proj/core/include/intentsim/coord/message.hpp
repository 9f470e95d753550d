#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "intentsim/grid/types.hpp"

namespace intentsim::coord {

using grid::CellCoord;

/// The wire unit of intention communication: the sender's committed path as
/// global-frame waypoints, first element the sender's cell at send time.
struct IntentionMessage {
  uint8_t agent_id = 0;
  uint32_t seq = 0;  // strictly increasing per sender
  bool effector = false;
  std::vector<CellCoord> waypoints;
};

/// Wire form, little-endian: u8 agent_id, u32 seq, u8 effector flag,
/// u16 waypoint count, then (u16 col, u16 row) pairs.
std::vector<uint8_t> encode_message(const IntentionMessage& msg);
IntentionMessage decode_message(const std::vector<uint8_t>& bytes);

/// Header bytes of the wire form (everything before the waypoint pairs).
inline constexpr size_t kWireHeaderBytes = 8;

/// Lossy, possibly delayed broadcast medium. Defaults reproduce idealized
/// communication.
struct ChannelModel {
  double drop_probability = 0.0;
  int delay_ticks = 0;
};

struct MailboxEntry {
  IntentionMessage message;
  int64_t sent_tick = 0;
};

/// Per-receiver store of the latest message per sender (latest wins by
/// sequence number; replays and reordered messages are dropped).
class Mailbox {
 public:
  explicit Mailbox(size_t num_senders = 0) : entries_(num_senders) {}

  /// Returns true when the message replaced (or created) the stored entry.
  bool deliver(const IntentionMessage& msg, int64_t sent_tick) {
    auto& slot = entries_[msg.agent_id];
    if (slot && slot->message.seq >= msg.seq) return false;
    slot = MailboxEntry{msg, sent_tick};
    return true;
  }

  const std::optional<MailboxEntry>& from(int sender) const { return entries_[size_t(sender)]; }
  size_t senders() const { return entries_.size(); }

 private:
  std::vector<std::optional<MailboxEntry>> entries_;
};

}  // namespace intentsim::coord
