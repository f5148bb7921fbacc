#include "vsearch/trace.hpp"

#include <sstream>

#include "vsearch/errors.hpp"

namespace vsearch {

void Trace::emit(std::string type, nlohmann::json payload) {
  events_.push_back({std::move(type), events_.size(), std::move(payload)});
}

std::string Trace::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    nlohmann::ordered_json line;
    line["t"] = e.index;
    line["type"] = e.type;
    line["payload"] = e.payload;
    out += line.dump();
    out += '\n';
  }
  return out;
}

Trace Trace::from_jsonl(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      trace.events_.push_back({j.at("type").get<std::string>(), j.at("t").get<std::size_t>(), j.at("payload")});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad trace line: ") + e.what());
    }
  }
  return trace;
}

}  // namespace vsearch
