#pragma once

#include <iosfwd>
#include <string>

#include "varharm/grid.hpp"

namespace varharm {

/// Grid-function CSV: header row "n,L,N", one metadata row, then one value
/// per line in row-major order.
void write_csv(std::ostream& os, const GridFunction& f);
void write_csv(const std::string& path, const GridFunction& f);

GridFunction read_csv(std::istream& is);
GridFunction read_csv(const std::string& path);

}  // namespace varharm
