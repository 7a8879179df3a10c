#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace convexlse {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;
using MutSpan = std::span<double>;

}  // namespace convexlse
