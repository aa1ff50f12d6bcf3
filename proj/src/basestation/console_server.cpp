#include "rover/basestation/console_server.hpp"

#include <httplib.h>

#include <stdexcept>

namespace rover::base {

using nlohmann::json;

struct ConsoleServer::Impl {
  ConsoleBridge& bridge;
  httplib::Server http;
  std::thread thread;
  std::atomic<bool> stopping{false};

  explicit Impl(ConsoleBridge& b) : bridge(b) {}
};

namespace {

std::string sse(std::uint64_t id, const json& event) {
  return "id: " + std::to_string(id) + "\ndata: " + event.dump() + "\n\n";
}

}  // namespace

ConsoleServer::ConsoleServer(ConsoleBridge& bridge, std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(bridge)) {
  auto& http = impl_->http;
  Impl* self = impl_.get();

  http.Get("/state", [self](const httplib::Request&, httplib::Response& res) {
    res.set_content(self->bridge.state_json().dump(), "application/json");
  });

  http.Get("/live", [self](const httplib::Request&, httplib::Response& res) {
    res.set_header("Cache-Control", "no-cache");
    auto cursor = std::make_shared<std::uint64_t>(self->bridge.feed().last_id());
    auto first = std::make_shared<bool>(true);
    res.set_chunked_content_provider("text/event-stream", [self, cursor, first](std::size_t, httplib::DataSink& sink) {
      if (self->stopping) {
        sink.done();
        return true;
      }
      if (*first) {
        *first = false;
        const std::string s = sse(*cursor, self->bridge.state_json());
        return sink.write(s.data(), s.size());
      }
      const auto events = self->bridge.feed().wait_after(*cursor, std::chrono::milliseconds(250));
      std::string out;
      for (const auto& [id, ev] : events) {
        out += sse(id, ev);
        *cursor = id;
      }
      if (out.empty()) out = ": keepalive\n\n";
      return sink.write(out.data(), out.size());
    });
  });

  http.Post("/command", [self](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
      self->bridge.console_command(body);
      res.status = 202;
      res.set_content(json{{"queued", true}}.dump(), "application/json");
    } catch (const ConsoleRejected& e) {
      res.status = 409;
      res.set_content(json{{"error", "consoleRejected"}, {"reason", e.what()}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", "badCommand"}, {"reason", e.what()}}.dump(), "application/json");
    }
  });

  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    http.set_mount_point("/", ui_dir->string());
  } else {
    http.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("rover base station: console events at /live, commands at POST /command\n", "text/plain");
    });
  }
}

ConsoleServer::~ConsoleServer() { stop(); }

std::uint16_t ConsoleServer::start(const std::string& host, std::uint16_t port) {
  auto& http = impl_->http;
  int bound = port;
  if (port == 0) {
    bound = http.bind_to_any_port(host);
  } else if (!http.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw std::runtime_error("console: cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  http.wait_until_ready();
  return static_cast<std::uint16_t>(bound);
}

void ConsoleServer::stop() {
  if (!impl_) return;
  impl_->stopping = true;
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace rover::base
