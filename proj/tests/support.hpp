#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "udrs/udrs.hpp"

namespace testing_support {

inline std::string read_file(const std::string& name) {
  std::ifstream in(std::string(UDRS_FIXTURES) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline udrs::UdrsDatabase load(const std::string& name) { return udrs::parse_udrs(read_file(name)); }
inline udrs::Model load_model(const std::string& name) { return udrs::parse_model(read_file(name)); }
inline udrs::Drs load_drs(const std::string& name) { return udrs::parse_drs(read_file(name)); }

inline const char* const kUdrsFixtures[] = {
    "u17.udrs", "u19.udrs", "u26a.udrs", "u31.udrs", "u33.udrs", "u41.udrs", "u45.udrs", "u51.udrs", "u53.udrs",
    "everybody-didnt-sleep.udrs", "everybody-didnt-sleep-goal.udrs", "everybody-awake.udrs",
    "slept-or-didnt.udrs", "students-conditional.udrs", "students-buy.udrs", "empty.udrs"};

}  // namespace testing_support
