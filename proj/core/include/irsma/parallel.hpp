#pragma once

#include <cstddef>
#include <functional>

namespace irsma {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). The first exception thrown by any body is rethrown after all
/// workers have stopped.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

std::size_t resolve_threads(std::size_t requested);

} // namespace irsma
