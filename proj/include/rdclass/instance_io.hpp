#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rdclass/probability.hpp"

namespace rdclass {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values for named cost tokens, e.g. {"c": 2.0}. A cost entry given as a
/// string in the JSON is looked up here first, then in the document's own
/// "parameters" object.
using CostParameters = std::map<std::string, double>;

ProblemInstance instance_from_json(const nlohmann::json& doc, const CostParameters& params = {});
ProblemInstance load_instance(const std::filesystem::path& path,
                              const CostParameters& params = {});

/// Canonical JSON form (numbers only, tokens already substituted).
nlohmann::json instance_to_json(const ProblemInstance& instance);

/// FNV-1a 64 over the canonical JSON dump, as 16 hex digits.
std::string instance_digest(const ProblemInstance& instance);

}  // namespace rdclass
