#pragma once

#include "rpnkit/io.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace rpn::test {

inline std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document loadFixture(const std::string& name) {
  return parse(readFile(std::string(RPNKIT_FIXTURES_DIR) + "/" + name));
}

}  // namespace rpn::test
