#pragma once

#include <cstddef>
#include <functional>

namespace fanno {

/// Worker count used by stage-internal loops. 0 or negative selects hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is processed exactly once and
/// writes only its own outputs, so results do not depend on the worker count.
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body);

}  // namespace fanno
