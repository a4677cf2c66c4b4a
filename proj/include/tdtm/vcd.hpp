#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

#include "tdtm/event_kernel.hpp"

namespace tdtm {

// Printable short identifier for the index-th registered signal ("!", "\"", ...).
std::string vcd_identifier(std::size_t index);

// Writes the kernel's recorded trace as a two-valued VCD with a 1 ps timescale.
// Each kernel scope becomes one VCD module nested under `top`; identifiers
// follow signal registration order, so output is byte-stable across runs.
void write_vcd(std::ostream& out, const Kernel& kernel, std::string_view top = "tdtm");

}  // namespace tdtm
