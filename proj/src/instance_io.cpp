#include "rdclass/instance_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <vector>

namespace rdclass {

namespace {

using nlohmann::json;

const json& require_field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw ValidationError(std::string("missing field '") + name + "'");
  return doc.at(name);
}

double to_number(const json& value, const std::string& where, const CostParameters& params,
                 const json* doc_params) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto token = value.get<std::string>();
    if (auto it = params.find(token); it != params.end()) return it->second;
    if (doc_params && doc_params->contains(token) && doc_params->at(token).is_number())
      return doc_params->at(token).get<double>();
    throw ValidationError(where + " uses cost parameter '" + token + "' with no value");
  }
  throw ValidationError(where + " is not a number");
}

Eigen::VectorXd read_vector(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ValidationError(what + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = to_number(arr[i], what + " entry " + std::to_string(i), {}, nullptr);
  return v;
}

Eigen::MatrixXd read_matrix(const json& arr, const std::string& what, std::size_t rows,
                            std::size_t cols, const CostParameters& params,
                            const json* doc_params) {
  if (!arr.is_array()) throw ValidationError(what + " must be an array of rows");
  if (arr.size() != rows) {
    throw ValidationError(what + " has " + std::to_string(arr.size()) + " rows, expected " +
                          std::to_string(rows));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = arr[r];
    const std::string where = what + " row " + std::to_string(r);
    if (!row.is_array() || row.size() != cols) {
      throw ValidationError(where + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          to_number(row[c], where + " entry " + std::to_string(c), params, doc_params);
  }
  return m;
}

std::vector<std::string> read_names(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ValidationError(what + " must be an array of strings");
  std::vector<std::string> names;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ValidationError(what + " must contain only strings");
    names.push_back(v.get<std::string>());
  }
  return names;
}

}  // namespace

ProblemInstance instance_from_json(const json& doc, const CostParameters& params) {
  if (!doc.is_object()) throw ValidationError("instance document must be a JSON object");
  auto labels = read_names(require_field(doc, "labels"), "labels");
  auto data = read_names(require_field(doc, "data_letters"), "data_letters");
  const Eigen::VectorXd prior = read_vector(require_field(doc, "prior"), "prior");
  if (static_cast<std::size_t>(prior.size()) != labels.size()) {
    throw ValidationError("prior has " + std::to_string(prior.size()) + " entries but there are " +
                          std::to_string(labels.size()) + " labels");
  }
  const json* doc_params = doc.contains("parameters") ? &doc.at("parameters") : nullptr;
  Eigen::MatrixXd generation = read_matrix(require_field(doc, "generation"), "generation",
                                           labels.size(), data.size(), {}, nullptr);
  const auto& size_field = require_field(doc, "compressed_size");
  if (!size_field.is_number_integer() || size_field.get<long long>() <= 0) {
    throw ValidationError("compressed_size must be a positive integer");
  }
  const auto compressed = static_cast<std::size_t>(size_field.get<long long>());

  LabelPrior label_prior(prior);
  GenerationChannel channel(std::move(generation));
  auto instance = [&] {
    if (doc.contains("cost") && !doc.at("cost").is_null()) {
      CostMatrix cost(read_matrix(doc.at("cost"), "cost", labels.size(), labels.size(), params,
                                  doc_params));
      return ProblemInstance(std::move(label_prior), std::move(channel), compressed,
                             std::move(cost));
    }
    return ProblemInstance(std::move(label_prior), std::move(channel), compressed);
  }();
  instance.set_names(std::move(labels), std::move(data));
  return instance;
}

ProblemInstance load_instance(const std::filesystem::path& path, const CostParameters& params) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  return instance_from_json(doc, params);
}

json instance_to_json(const ProblemInstance& instance) {
  auto rows = [](const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      out.push_back(std::move(row));
    }
    return out;
  };
  json prior = json::array();
  for (Eigen::Index i = 0; i < instance.label_count(); ++i) prior.push_back(instance.prior()[i]);
  return json{{"labels", instance.label_names()},
              {"prior", prior},
              {"data_letters", instance.data_names()},
              {"generation", rows(instance.generation().matrix())},
              {"compressed_size", instance.compressed_size()},
              {"cost", rows(instance.cost().matrix())}};
}

std::string instance_digest(const ProblemInstance& instance) {
  const std::string text = instance_to_json(instance).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace rdclass
