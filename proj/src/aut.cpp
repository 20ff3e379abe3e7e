#include "bf/aut.hpp"

#include <cctype>
#include <istream>
#include <stdexcept>

namespace bf {

namespace {

[[noreturn]] void malformed(const std::string& line) {
  throw std::runtime_error("malformed .aut line: " + line);
}

std::size_t parse_number(const std::string& line, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
  if (pos == start) malformed(line);
  return std::stoull(line.substr(start, pos - start));
}

void expect(const std::string& line, std::size_t& pos, const char* text) {
  for (const char* c = text; *c; ++c) {
    if (pos >= line.size() || line[pos] != *c) malformed(line);
    ++pos;
  }
}

void skip_spaces(const std::string& line, std::size_t& pos) {
  while (pos < line.size() && line[pos] == ' ') ++pos;
}

}  // namespace

AutData parse_aut(std::istream& is) {
  AutData out;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(".aut input is empty");
  std::size_t pos = 0;
  expect(line, pos, "des");
  skip_spaces(line, pos);
  expect(line, pos, "(");
  skip_spaces(line, pos);
  out.initial = parse_number(line, pos);
  skip_spaces(line, pos);
  expect(line, pos, ",");
  skip_spaces(line, pos);
  out.transition_count = parse_number(line, pos);
  skip_spaces(line, pos);
  expect(line, pos, ",");
  skip_spaces(line, pos);
  out.state_count = parse_number(line, pos);
  skip_spaces(line, pos);
  expect(line, pos, ")");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    pos = 0;
    expect(line, pos, "(");
    std::size_t src = parse_number(line, pos);
    expect(line, pos, ",\"");
    std::size_t label_end = line.rfind('"');
    if (label_end == std::string::npos || label_end < pos) malformed(line);
    std::string label = line.substr(pos, label_end - pos);
    pos = label_end + 1;
    expect(line, pos, ",");
    std::size_t dst = parse_number(line, pos);
    expect(line, pos, ")");
    out.transitions.emplace_back(src, std::move(label), dst);
  }
  if (out.transitions.size() != out.transition_count)
    throw std::runtime_error(".aut header transition count does not match body");
  return out;
}

}  // namespace bf
