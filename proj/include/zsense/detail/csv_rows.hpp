#pragma once

#include <istream>
#include <string>
#include <string_view>

namespace zsense::csv {

template <typename F>
void for_each_row(std::istream& in, std::string_view header, F&& fn) {
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first_content) {
      first_content = false;
      if (line == header) continue;
    }
    fn(std::string_view(line), line_no);
  }
}

}  // namespace zsense::csv
