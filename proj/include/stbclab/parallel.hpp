#pragma once

#include <cstddef>
#include <functional>

namespace stbclab {

unsigned default_workers();

// Runs fn(begin, end) over a contiguous partition of [0, count) on up to
// `workers` threads. Callers get determinism by writing to disjoint,
// index-addressed slots and reducing sequentially afterwards.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace stbclab
