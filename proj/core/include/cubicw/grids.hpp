#pragma once

#include <string>
#include <vector>

namespace cubicw {

/// Grid syntax:
///   "v"            single value
///   "a:b:step"     arithmetic, endpoints included (within rounding slack)
///   "a:b:xFACTOR"  geometric, e.g. "1024:65536:x2"
std::vector<double> parse_grid(const std::string& spec);

/// Integer variant for system sizes; entries must be >= 1 and strictly
/// increasing.
std::vector<long> parse_n_grid(const std::string& spec);

std::string format_grid(const std::vector<double>& grid);

}  // namespace cubicw
