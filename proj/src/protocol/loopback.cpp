#include <algorithm>
#include <deque>
#include <mutex>

#include "rover/protocol/codec.hpp"
#include "rover/protocol/transport.hpp"

namespace rover::proto {

namespace {

struct Pipe {
  std::mutex mu;
  std::deque<std::uint8_t> to[2];
  bool closed = false;
};

class LoopbackStream final : public ByteStream {
 public:
  LoopbackStream(std::shared_ptr<Pipe> pipe, int side, std::shared_ptr<LinkGate> gate)
      : pipe_(std::move(pipe)), side_(side), gate_(std::move(gate)) {}
  ~LoopbackStream() override { close(); }

  void write(std::span<const std::uint8_t> bytes) override {
    std::lock_guard lock(pipe_->mu);
    if (pipe_->closed) throw ProtocolError(ProtocolErrc::PeerGone, "loopback closed");
    if (gate_ && !gate_->up.load()) return;
    auto& q = pipe_->to[1 - side_];
    q.insert(q.end(), bytes.begin(), bytes.end());
  }

  ReadResult read_some(std::span<std::uint8_t> out) override {
    std::lock_guard lock(pipe_->mu);
    auto& q = pipe_->to[side_];
    const std::size_t n = std::min(out.size(), q.size());
    std::copy_n(q.begin(), n, out.begin());
    q.erase(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n));
    return {n, pipe_->closed && q.empty()};
  }

  void close() override {
    std::lock_guard lock(pipe_->mu);
    pipe_->closed = true;
  }

 private:
  std::shared_ptr<Pipe> pipe_;
  int side_;
  std::shared_ptr<LinkGate> gate_;
};

struct DatagramQueue {
  std::mutex mu;
  std::deque<std::vector<std::uint8_t>> to[2];
  std::function<bool()> drop;
};

class LoopbackDatagram final : public DatagramChannel {
 public:
  LoopbackDatagram(std::shared_ptr<DatagramQueue> q, int side) : q_(std::move(q)), side_(side) {}

  void send(std::span<const std::uint8_t> datagram) override {
    std::lock_guard lock(q_->mu);
    if (q_->drop && q_->drop()) return;
    q_->to[1 - side_].emplace_back(datagram.begin(), datagram.end());
  }

  std::optional<std::vector<std::uint8_t>> receive() override {
    std::lock_guard lock(q_->mu);
    auto& q = q_->to[side_];
    if (q.empty()) return std::nullopt;
    auto d = std::move(q.front());
    q.pop_front();
    return d;
  }

 private:
  std::shared_ptr<DatagramQueue> q_;
  int side_;
};

}  // namespace

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_loopback_pair(
    std::shared_ptr<LinkGate> gate) {
  auto pipe = std::make_shared<Pipe>();
  return {std::make_unique<LoopbackStream>(pipe, 0, gate),
          std::make_unique<LoopbackStream>(pipe, 1, gate)};
}

std::pair<std::unique_ptr<DatagramChannel>, std::unique_ptr<DatagramChannel>> make_datagram_pair(
    std::function<bool()> drop) {
  auto q = std::make_shared<DatagramQueue>();
  q->drop = std::move(drop);
  return {std::make_unique<LoopbackDatagram>(q, 0), std::make_unique<LoopbackDatagram>(q, 1)};
}

}  // namespace rover::proto
