#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "qbn/population.hpp"
#include "qbn/schema.hpp"

namespace testfx {

inline std::string read(const std::string& relative) {
  std::ifstream in(std::filesystem::path(QBN_SOURCE_DIR) / relative, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::shared_ptr<const qbn::Schema> schema_from(std::string_view src) {
  auto parsed = qbn::parse_schema(src);
  if (!parsed) {
    std::ostringstream os;
    for (const auto& d : parsed.diagnostics) os << d << '\n';
    throw std::runtime_error("schema does not parse:\n" + os.str());
  }
  return std::make_shared<const qbn::Schema>(std::move(*parsed.value));
}

inline std::shared_ptr<const qbn::Schema> schema(const std::string& fixture) {
  return schema_from(read("fixtures/" + fixture));
}

inline std::shared_ptr<const qbn::Population> population(std::string_view src, std::shared_ptr<const qbn::Schema> s) {
  auto parsed = qbn::load_population(src, std::move(s));
  if (!parsed) {
    std::ostringstream os;
    for (const auto& d : parsed.diagnostics) os << d << '\n';
    throw std::runtime_error("population does not load:\n" + os.str());
  }
  return std::make_shared<const qbn::Population>(std::move(*parsed.value));
}

inline bool has_code(const std::vector<qbn::Diagnostic>& ds, std::string_view code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

}  // namespace testfx
