#ifndef VSEARCH_HARNESS_OUTPUT_HPP
#define VSEARCH_HARNESS_OUTPUT_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace vsearch::harness {

/// One entry of the machine-readable error list printed on failure.
struct ErrorEntry {
  std::string code;
  std::string message;
  std::string context;
};

/// {"errors": [{"code": ..., "message": ..., "context": ...}, ...]}
nlohmann::ordered_json error_list(const std::vector<ErrorEntry>& errors);

} // namespace vsearch::harness

#endif // VSEARCH_HARNESS_OUTPUT_HPP
