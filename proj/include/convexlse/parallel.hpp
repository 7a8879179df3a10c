#pragma once

#include <cstddef>
#include <functional>

namespace convexlse {

// Worker cap for Monte Carlo loops. Results never depend on it: every work
// item writes its own slot and reductions happen in index order afterwards.
void set_max_threads(unsigned n);
unsigned max_threads();

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace convexlse
