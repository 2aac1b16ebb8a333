#pragma once

#include <cstddef>
#include <functional>

namespace gxr {

/// Worker count used by parallel loops. Defaults to the hardware concurrency,
/// capped by the GXR_THREADS environment variable when set.
int max_threads();
void set_max_threads(int n);

/// Runs body(i) for i in [begin, end) over contiguous chunks. Bodies must write
/// to disjoint outputs; results do not depend on the thread count.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

} // namespace gxr
