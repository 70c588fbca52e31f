#pragma once

#include <cstddef>
#include <functional>

namespace ersatz {

/// Number of hardware threads, at least 1.
std::size_t default_thread_count();

/// Runs body(0..count-1) on up to `threads` workers (0 means the default).
/// Items are claimed dynamically, so `body` must write only to its own slot.
/// If items throw, the exception of the lowest failing index is rethrown
/// after all workers have stopped.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace ersatz
