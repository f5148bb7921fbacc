#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace vsearch {

struct TraceEvent {
  std::string type;
  std::size_t index = 0;
  nlohmann::json payload;
};

/// Ordered episode event log, serialized as one JSON object per line:
/// {"t": index, "type": ..., "payload": {...}}.
class Trace {
 public:
  void emit(std::string type, nlohmann::json payload);
  const std::vector<TraceEvent>& events() const { return events_; }
  std::string to_jsonl() const;
  static Trace from_jsonl(const std::string& text);

 private:
  std::vector<TraceEvent> events_;
};

}  // namespace vsearch
