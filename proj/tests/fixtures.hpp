#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "otmlab/asmparse.hpp"

inline std::string fixture_path(const std::string& rel) { return std::string(OTMLAB_FIXTURES) + "/" + rel; }

inline std::string read_fixture(const std::string& rel) {
  std::ifstream in(fixture_path(rel));
  if (!in) throw std::runtime_error("missing fixture " + rel);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline otmlab::Program fixture_program(const std::string& name) {
  return otmlab::parse_program(read_fixture("programs/" + name + ".otm"));
}
