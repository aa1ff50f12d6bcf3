#include "rover/basestation/mission_log.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace rover::base {

using nlohmann::json;

const char* to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::Command: return "command";
    case RecordKind::Ack: return "ack";
    case RecordKind::Telemetry: return "telemetry";
    case RecordKind::Session: return "session";
  }
  return "?";
}

std::string LogRecord::to_line() const {
  return json{{"tMs", t_ms}, {"kind", to_string(kind)}, {"data", data}}.dump();
}

LogRecord LogRecord::from_line(const std::string& line) {
  try {
    const auto j = json::parse(line);
    LogRecord r;
    r.t_ms = j.at("tMs").get<std::int64_t>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "command") r.kind = RecordKind::Command;
    else if (kind == "ack") r.kind = RecordKind::Ack;
    else if (kind == "telemetry") r.kind = RecordKind::Telemetry;
    else if (kind == "session") r.kind = RecordKind::Session;
    else throw std::invalid_argument("unknown record kind " + kind);
    r.data = j.at("data");
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad log line: ") + e.what());
  }
}

void MissionLog::append(LogRecord record) {
  if (!records_.empty() && record.t_ms <= records_.back().t_ms)
    throw LogOrderError("log timestamps must strictly increase");
  records_.push_back(std::move(record));
}

std::int64_t MissionLog::next_stamp(std::int64_t now_ms) const {
  if (records_.empty()) return now_ms;
  return std::max(now_ms, records_.back().t_ms + 1);
}

MissionLog MissionLog::read(std::istream& in) {
  MissionLog log;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) log.append(LogRecord::from_line(line));
  return log;
}

AsyncLogWriter::AsyncLogWriter(std::ostream& sink) : sink_(sink), worker_([this] { run(); }) {}

AsyncLogWriter::~AsyncLogWriter() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void AsyncLogWriter::push(std::string line) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(line));
  }
  cv_.notify_all();
}

void AsyncLogWriter::flush() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return queue_.empty() && !writing_; });
}

void AsyncLogWriter::run() {
  std::unique_lock lock(mu_);
  for (;;) {
    cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
    if (queue_.empty()) return;  // stopping and drained
    std::string line = std::move(queue_.front());
    queue_.pop_front();
    writing_ = true;
    lock.unlock();
    sink_ << line << '\n';
    sink_.flush();
    lock.lock();
    writing_ = false;
    cv_.notify_all();
  }
}

std::vector<TrailPoint> trail_from_log(const MissionLog& log) {
  std::vector<TrailPoint> trail;
  for (const auto& r : log.records()) {
    if (r.kind != RecordKind::Telemetry) continue;
    const auto snap = r.data.find("snapshot");
    if (snap == r.data.end() || !snap->contains("fix")) continue;
    const auto& fix = (*snap)["fix"];
    if (!fix.contains("lat") || !fix.contains("lon")) continue;
    trail.push_back({r.t_ms, geo::GeoPoint(fix["lat"].get<double>(), fix["lon"].get<double>())});
  }
  return trail;
}

std::vector<geo::GeoPoint> waypoints_from_log(const MissionLog& log) {
  std::vector<geo::GeoPoint> out;
  for (const auto& r : log.records()) {
    if (r.kind != RecordKind::Command || r.data.value("type", "") != "setWaypoints") continue;
    out.clear();
    for (const auto& p : r.data.at("points")) out.emplace_back(p.at("lat").get<double>(), p.at("lon").get<double>());
  }
  return out;
}

TrailExport export_trail(const MissionLog& log, const ExportOptions& options) {
  const auto trail = trail_from_log(log);
  if (trail.empty()) throw EmptyLog();

  MapView view = options.bounds ? MapView(*options.bounds) : MapView();
  for (const auto& p : trail) view.add_trail_point(p.pos);
  view.set_waypoints(waypoints_from_log(log));
  const Canvas& c = options.canvas;

  std::string svg;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                c.width, c.height, c.width, c.height);
  svg += buf;
  if (options.map_image) {
    std::snprintf(buf, sizeof buf, "<image href=\"%s\" x=\"0\" y=\"0\" width=\"%d\" height=\"%d\"/>\n",
                  options.map_image->c_str(), c.width, c.height);
    svg += buf;
  }
  svg += "<polyline class=\"trail\" fill=\"none\" stroke=\"#d33\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < view.trail().size(); ++i) {
    const auto px = project(view.trail()[i], view.bounds(), c);
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px.x, px.y);
    svg += buf;
  }
  svg += "\"/>\n";
  for (std::size_t i = 0; i < view.waypoints().size(); ++i) {
    const auto px = project(view.waypoints()[i], view.bounds(), c);
    std::snprintf(buf, sizeof buf, "<circle class=\"waypoint\" data-index=\"%zu\" cx=\"%.2f\" cy=\"%.2f\" r=\"6\"/>\n",
                  i, px.x, px.y);
    svg += buf;
  }
  svg += "</svg>\n";

  std::string csv = "t_ms,lat,lon\n";
  for (const auto& p : trail) {
    std::snprintf(buf, sizeof buf, "%" PRId64 ",%.17g,%.17g\n", p.t_ms, p.pos.lat(), p.pos.lon());
    csv += buf;
  }
  return {svg, csv};
}

std::vector<TrailPoint> import_trail_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<TrailPoint> out;
  if (!std::getline(in, line) || line != "t_ms,lat,lon") throw std::invalid_argument("trail csv: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long long t = 0;
    double lat = 0.0, lon = 0.0;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &t, &lat, &lon) != 3)
      throw std::invalid_argument("trail csv: bad row '" + line + "'");
    out.push_back({t, geo::GeoPoint(lat, lon)});
  }
  return out;
}

}  // namespace rover::base
