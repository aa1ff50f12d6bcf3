#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rover/protocol/message.hpp"

namespace rover::proto {

/// Largest payload a frame may carry.
inline constexpr std::uint32_t kMaxPayloadBytes = 65'536;
inline constexpr std::size_t kHeaderBytes = 4;

enum class ProtocolErrc {
  OversizedPayload,  // encoder: message serializes to more than kMaxPayloadBytes
  OversizedLength,   // decoder: length prefix exceeds kMaxPayloadBytes
  CorruptPayload,    // decoder: payload is not a valid message
  InvalidMessage,    // encoder: message violates its field invariants
  PeerGone,
};

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ProtocolErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ProtocolErrc code() const { return code_; }

 private:
  ProtocolErrc code_;
};

using Bytes = std::vector<std::uint8_t>;

/// Length-prefixed frame: 4-byte big-endian payload length, then UTF-8 JSON.
Bytes encode(const Message& msg);

enum class DecodeStatus { Ok, Truncated, CorruptPayload, OversizedLength };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Truncated;
  std::optional<Message> message;
  std::size_t consumed = 0;  // bytes used by the decoded frame; 0 unless Ok
  std::string error;
};

/// Decodes at most one frame from the front of `bytes`. Bytes past
/// `consumed` belong to later frames.
DecodeResult decode(std::span<const std::uint8_t> bytes);

/// JSON object form of a message (the frame payload).
nlohmann::json to_json(const Message& msg);

/// Inverse of to_json. Throws ProtocolError{CorruptPayload}.
Message message_from_json(const nlohmann::json& j);

nlohmann::json snapshot_to_json(const TelemetrySnapshot& snapshot);
TelemetrySnapshot snapshot_from_json(const nlohmann::json& j);

/// Reassembles frames from an arbitrarily chunked byte stream.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);

  /// Next complete message, or nullopt when more bytes are needed.
  /// Throws ProtocolError on a corrupt or oversized frame; the stream is
  /// unusable afterwards.
  std::optional<Message> next();

  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  Bytes buffer_;
  std::size_t offset_ = 0;
};

}  // namespace rover::proto
