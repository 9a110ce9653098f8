#include "hare/trace.hpp"

#include "json.hpp"

namespace hare {

bool same_interaction(const SessionTrace& a, const SessionTrace& b) {
  return a.doc_id == b.doc_id && a.user == b.user && a.decisions == b.decisions &&
         a.feedback == b.feedback && a.shown == b.shown && a.stop_index == b.stop_index;
}

std::string trace_to_json(const SessionTrace& trace, bool include_timing) {
  using nlohmann::json;
  json j;
  j["doc"] = trace.doc_id;
  j["user"] = {{"l", trace.user.length_pref},
               {"alpha", trace.user.alpha},
               {"m", trace.user.m},
               {"seed", trace.user.seed}};
  std::string decisions;
  for (Decision d : trace.decisions) decisions.push_back(d == Decision::kShow ? 'S' : 'H');
  j["decisions"] = decisions;
  auto& fb = j["feedback"] = json::array();
  for (const auto& f : trace.feedback) {
    fb.push_back({{"index", f.index}, {"value", f.value}, {"importance", f.importance}});
  }
  j["shown"] = trace.shown;
  j["stop"] = trace.stop_index;
  if (include_timing) j["ms"] = trace.duration_ms;
  return j.dump();
}

}  // namespace hare
