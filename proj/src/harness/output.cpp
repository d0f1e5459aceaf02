#include "vsearch/harness/output.hpp"

namespace vsearch::harness {

nlohmann::ordered_json error_list(const std::vector<ErrorEntry>& errors) {
  nlohmann::ordered_json j;
  j["errors"] = nlohmann::ordered_json::array();
  for (const auto& e : errors) {
    nlohmann::ordered_json item{{"code", e.code}, {"message", e.message}};
    if (!e.context.empty()) item["context"] = e.context;
    j["errors"].push_back(item);
  }
  return j;
}

} // namespace vsearch::harness
