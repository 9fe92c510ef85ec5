#pragma once

#include <fstream>
#include <string>

#include "hardy/hardy.hpp"

namespace fixture {

inline std::string path(const std::string& name) { return std::string(HARDY_FIXTURE_DIR) + "/" + name; }

inline nlohmann::json load(const std::string& name) {
  std::ifstream in(path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

struct CyclicityCase {
  hardy::BlaschkeProduct product;
  hardy::LacunarySpec spec;
  hardy::NumericPolicy policy;
  std::size_t targets = 0;
  std::size_t iterations = 512;
};

inline CyclicityCase cyclicity_case(const std::string& name) {
  const auto j = load(name);
  auto b = hardy::io::blaschke_from_json(j.at("blaschke"));
  auto spec = hardy::io::lacunary_from_json(j.at("lacunary"), b);
  hardy::NumericPolicy policy;
  if (j.contains("policy")) policy = hardy::io::policy_from_json(j.at("policy"));
  return {b, spec, policy, j.value("targets", std::size_t{8}), j.value("iterations", std::size_t{512})};
}

}  // namespace fixture
