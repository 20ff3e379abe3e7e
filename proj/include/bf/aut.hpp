#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "bf/lpe.hpp"

namespace bf {

/// Writes the Aldebaran interchange form: a `des (initial, transitions,
/// states)` header followed by one `(src,"label",dst)` line per
/// transition. Lines are newline-terminated with no trailing whitespace.
template <class State>
void export_aut(const Lts<State>& lts, std::ostream& os) {
  os << "des (" << lts.initial << ", " << lts.transitions.size() << ", " << lts.states.size()
     << ")\n";
  for (const auto& t : lts.transitions)
    os << '(' << t.src << ",\"" << t.label.str() << "\"," << t.dst << ")\n";
}

template <class State>
void export_aut_file(const Lts<State>& lts, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  export_aut(lts, os);
  os.flush();
  if (!os) throw std::runtime_error("failed to write '" + path + "'");
}

/// Parsed .aut content, used to round-trip exports.
struct AutData {
  std::size_t initial = 0;
  std::size_t transition_count = 0;
  std::size_t state_count = 0;
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> transitions;
};

AutData parse_aut(std::istream& is);

}  // namespace bf
