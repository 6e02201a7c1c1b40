#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rr/dsl.hpp"
#include "rr/kb.hpp"

namespace rr::test {

inline std::string fixture_path(const std::string& file) { return std::string(RR_FIXTURE_DIR) + "/" + file; }

inline std::string read_fixture(const std::string& file) {
  std::ifstream in(fixture_path(file), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + file);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline UnitSet parse_fixture(const std::string& file) {
  auto r = dsl::parse({read_fixture(file), file});
  if (!r.ok()) throw std::runtime_error(dsl::format(r.errors.front()));
  return r.units;
}

inline ConceptUnit unit_from(const std::string& file) { return parse_fixture(file).front(); }

inline UnitSet parse_text(const std::string& text) {
  auto r = dsl::parse({text});
  if (!r.ok()) throw std::runtime_error(dsl::format(r.errors.front()));
  return r.units;
}

inline KnowledgeBase fixture_kb() { return load(RR_FIXTURE_DIR); }

}  // namespace rr::test
