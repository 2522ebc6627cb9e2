#ifndef SASFOCUS_THREADING_HPP
#define SASFOCUS_THREADING_HPP

#include <cstddef>
#include <functional>

namespace sasfocus {

/// Process-wide worker pool size for per-image parallel loops.
/// 0 = use hardware concurrency.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs fn(i) for i in [0, n). Each index must touch only its own output
/// slot; reductions over the results happen in index order at the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sasfocus

#endif
