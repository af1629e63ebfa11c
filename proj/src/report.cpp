#include "prisyn/report.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace prisyn {

using ojson = nlohmann::ordered_json;

std::string RunReport::to_json() const {
  ojson j;
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["verdict"] = verdict;
  j["reason"] = reason;
  ojson prios = ojson::array();
  for (const auto& [lo, hi] : priorities) prios.push_back({lo, hi});
  j["priorities"] = std::move(prios);
  j["statistics"] = {{"components", components},
                     {"interactions", interactions},
                     {"iterations", iterations},
                     {"wall_seconds", wall_seconds}};
  j["verification"] = verification;
  j["trace"] = trace;
  j["counterexample"] = counterexample;
  return j.dump(2) + "\n";
}

RunReport RunReport::from_json(std::string_view text) {
  try {
    const ojson j = ojson::parse(text);
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.input_digest = j.at("input_digest").get<std::string>();
    r.verdict = j.at("verdict").get<std::string>();
    r.reason = j.at("reason").get<std::string>();
    for (const auto& p : j.at("priorities")) r.priorities.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    const auto& s = j.at("statistics");
    r.components = s.at("components").get<std::size_t>();
    r.interactions = s.at("interactions").get<std::size_t>();
    r.iterations = s.at("iterations").get<std::size_t>();
    r.wall_seconds = s.at("wall_seconds").get<double>();
    r.verification = j.at("verification").get<std::string>();
    r.trace = j.at("trace").get<std::vector<std::string>>();
    r.counterexample = j.at("counterexample").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace prisyn
