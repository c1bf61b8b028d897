#pragma once

#include <sstream>

#include "cmaplab/types.hpp"

namespace cmaplab {

// "1.5", "i", "-2i", "1+2i", "0.3-0.25i"
inline cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ConfigError("empty complex literal");
  auto part = [](std::string t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw ConfigError("bad numeric literal '" + t + "'");
    return v;
  };
  // locate a +/- that separates real and imaginary parts (not leading, not exponent)
  int split = -1;
  for (int i = static_cast<int>(s.size()) - 1; i > 0; --i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (s.back() == 'i' || s.back() == 'j') {
    std::string re = "0", im;
    if (split > 0) {
      re = s.substr(0, split);
      im = s.substr(split, s.size() - split - 1);
    } else {
      im = s.substr(0, s.size() - 1);
    }
    return {part(re), part(im)};
  }
  return {part(s), 0.0};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace cmaplab
