#include "tdtm/vcd.hpp"

#include <vector>

namespace tdtm {

std::string vcd_identifier(std::size_t index) {
  constexpr std::size_t kRadix = 94;  // '!' .. '~'
  std::string id;
  do {
    id.push_back(static_cast<char>('!' + index % kRadix));
    index /= kRadix;
  } while (index != 0);
  return id;
}

void write_vcd(std::ostream& out, const Kernel& kernel, std::string_view top) {
  const auto signals = kernel.signals();

  // Scopes in order of first registration.
  std::vector<std::string_view> scopes;
  for (const auto& s : signals) {
    bool seen = false;
    for (auto sc : scopes) seen = seen || sc == s.scope;
    if (!seen) scopes.push_back(s.scope);
  }

  out << "$version tdtm $end\n";
  out << "$timescale 1ps $end\n";
  out << "$scope module " << top << " $end\n";
  for (auto scope : scopes) {
    out << "$scope module " << scope << " $end\n";
    for (const auto& s : signals) {
      if (s.scope != scope) continue;
      out << "$var wire 1 " << vcd_identifier(s.id.value) << ' ' << s.name << " $end\n";
    }
    out << "$upscope $end\n";
  }
  out << "$upscope $end\n";
  out << "$enddefinitions $end\n";

  out << "#0\n$dumpvars\n";
  for (const auto& s : signals) {
    out << (s.initial_value ? '1' : '0') << vcd_identifier(s.id.value) << '\n';
  }
  out << "$end\n";

  SimTime current = 0;
  for (const auto& c : kernel.trace()) {
    if (c.time != current) {
      current = c.time;
      out << '#' << current << '\n';
    }
    out << (c.value ? '1' : '0') << vcd_identifier(c.signal.value) << '\n';
  }
}

}  // namespace tdtm
