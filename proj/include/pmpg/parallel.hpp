#pragma once

#include <cstddef>
#include <functional>

namespace pmpg {

// Thread cap: PMPG_THREADS when set (clamped to >= 1), else all cores.
std::size_t max_threads();

// Runs fn(i) for i in [0, n). Work items must be independent; results should
// be written to index-keyed slots so the outcome is identical for any thread
// count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace pmpg
