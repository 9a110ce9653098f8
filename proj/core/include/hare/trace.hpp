#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hare {

enum class Decision { kHide, kShow };

struct UserDescriptor {
  std::size_t length_pref = 0;
  double alpha = 0.0;
  double m = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const UserDescriptor&, const UserDescriptor&) = default;
};

struct FeedbackEntry {
  std::size_t index = 0;
  int value = 0;            // 1 accept, 0 reject
  double importance = 0.0;  // r_x under the simulated user; 0 when unknown

  friend bool operator==(const FeedbackEntry&, const FeedbackEntry&) = default;
};

// Record of one pass through the interaction loop.
struct SessionTrace {
  std::string doc_id;
  UserDescriptor user;
  std::vector<Decision> decisions;  // decisions[i] for i in [0, stop_index]
  std::vector<FeedbackEntry> feedback;
  std::vector<std::size_t> shown;   // S, ascending
  std::size_t stop_index = 0;
  double duration_ms = 0.0;

  std::size_t accepted() const {
    std::size_t n = 0;
    for (const auto& f : feedback) n += f.value == 1;
    return n;
  }
};

// Everything except the wall-clock duration is compared.
bool same_interaction(const SessionTrace& a, const SessionTrace& b);

// Compact JSON; duration omitted unless requested.
std::string trace_to_json(const SessionTrace& trace, bool include_timing = false);

}  // namespace hare
