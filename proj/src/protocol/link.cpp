#include "rover/protocol/link.hpp"

#include <cmath>
#include <stdexcept>

namespace rover::proto {

void LinkBudget::validate() const {
  if (!(full_strength_range_m > 0.0) || !(full_strength_range_m <= dropout_range_m))
    throw std::invalid_argument("link budget needs 0 < full_strength_range_m <= dropout_range_m");
  if (!(degraded_loss_rate >= 0.0 && degraded_loss_rate <= 1.0))
    throw std::invalid_argument("degraded_loss_rate must lie in [0, 1]");
}

const char* to_string(LinkQuality q) {
  switch (q) {
    case LinkQuality::Full: return "full";
    case LinkQuality::Degraded: return "degraded";
    case LinkQuality::Dead: return "dead";
  }
  return "?";
}

LinkQuality link_quality(double distance_m, const LinkBudget& budget) {
  if (!(distance_m >= 0.0)) throw std::invalid_argument("distance must be non-negative");
  if (distance_m <= budget.full_strength_range_m) return LinkQuality::Full;
  if (distance_m <= budget.dropout_range_m) return LinkQuality::Degraded;
  return LinkQuality::Dead;
}

Bytes TelemetryPublisher::publish(const TelemetrySnapshot& snapshot) {
  Bytes frame = encode(Telemetry{snapshot});
  channel_.send(frame);
  return frame;
}

bool TelemetryReceiver::poll() {
  bool updated = false;
  while (auto datagram = channel_.receive()) {
    const DecodeResult r = decode(*datagram);
    const auto* t = r.status == DecodeStatus::Ok ? std::get_if<Telemetry>(&*r.message) : nullptr;
    if (t == nullptr || r.consumed != datagram->size()) {
      ++rejected_;
      continue;
    }
    ++received_;
    if (latest_ && t->snapshot.t_ms < latest_->t_ms) continue;
    latest_ = t->snapshot;
    updated = true;
  }
  return updated;
}

}  // namespace rover::proto
