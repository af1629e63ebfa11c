#pragma once

// Machine-readable run report written by the command-line tool.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prisyn {

struct RunReport {
  std::string command;
  std::string input_digest;  // fnv1a64 of the model document, hex
  std::string verdict;
  std::string reason;
  std::vector<std::pair<std::string, std::string>> priorities;  // (low, high)
  std::size_t components = 0;
  std::size_t interactions = 0;
  std::size_t iterations = 0;
  double wall_seconds = 0;
  std::string verification;
  std::vector<std::string> trace;
  std::vector<std::string> counterexample;  // one line per step

  bool operator==(const RunReport&) const = default;

  std::string to_json() const;
  /// Throws std::invalid_argument on malformed input.
  static RunReport from_json(std::string_view text);
};

std::string input_digest(std::string_view bytes);

}  // namespace prisyn
