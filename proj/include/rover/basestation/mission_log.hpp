#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rover/basestation/map.hpp"

namespace rover::base {

enum class RecordKind { Command, Ack, Telemetry, Session };

const char* to_string(RecordKind kind);

struct LogRecord {
  std::int64_t t_ms = 0;
  RecordKind kind = RecordKind::Session;
  nlohmann::json data;

  /// One NDJSON line without the newline: {"tMs":..,"kind":..,"data":..}.
  std::string to_line() const;
  /// Throws std::invalid_argument on a malformed line.
  static LogRecord from_line(const std::string& line);
};

class LogOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Append-only record of a mission. Timestamps strictly increase.
class MissionLog {
 public:
  /// Throws LogOrderError unless record.t_ms exceeds the last timestamp.
  void append(LogRecord record);

  /// Earliest timestamp at or after `now_ms` that append would accept.
  std::int64_t next_stamp(std::int64_t now_ms) const;

  const std::vector<LogRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  /// Reads an NDJSON log. Throws std::invalid_argument or LogOrderError.
  static MissionLog read(std::istream& in);

 private:
  std::vector<LogRecord> records_;
};

/// Writes log lines on a background thread so a slow sink never blocks the
/// caller. Lines are written in push order; the destructor drains the queue.
class AsyncLogWriter {
 public:
  explicit AsyncLogWriter(std::ostream& sink);
  ~AsyncLogWriter();
  AsyncLogWriter(const AsyncLogWriter&) = delete;
  AsyncLogWriter& operator=(const AsyncLogWriter&) = delete;

  void push(std::string line);
  /// Blocks until every pushed line has been written.
  void flush();

 private:
  void run();

  std::ostream& sink_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  bool writing_ = false;
  bool stop_ = false;
  std::thread worker_;
};

struct TrailPoint {
  std::int64_t t_ms = 0;
  geo::GeoPoint pos;

  friend bool operator==(const TrailPoint&, const TrailPoint&) = default;
};

class EmptyLog : public std::runtime_error {
 public:
  EmptyLog() : std::runtime_error("mission log holds no position fix") {}
};

/// Trail of positioned telemetry fixes, in log order.
std::vector<TrailPoint> trail_from_log(const MissionLog& log);

/// Waypoints of the last SetWaypoints command in the log.
std::vector<geo::GeoPoint> waypoints_from_log(const MissionLog& log);

struct TrailExport {
  std::string svg;
  std::string csv;
};

struct ExportOptions {
  Canvas canvas;
  std::optional<Bounds> bounds;           // fixed map rectangle; grown to fit the trail
  std::optional<std::string> map_image;   // background image reference
};

/// SVG polyline of the trail with one marker per waypoint, and a
/// t_ms,lat,lon CSV. Throws EmptyLog when the log has no fix.
TrailExport export_trail(const MissionLog& log, const ExportOptions& options = {});

/// Parses the CSV written by export_trail.
std::vector<TrailPoint> import_trail_csv(const std::string& csv);

}  // namespace rover::base
