#pragma once

#include <cstddef>
#include <functional>

namespace mqc {

// MQC_WORKERS overrides the hardware thread count
int worker_count();

// runs f(i) for i in [0, n); results must be written to per-index slots
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, int workers = 0);

}  // namespace mqc
