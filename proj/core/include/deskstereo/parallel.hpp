#pragma once

#include <functional>

namespace deskstereo {

// Deterministic row-parallel helper. Work items write disjoint outputs; the
// result is bit-identical for any thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

int default_threads();
void set_default_threads(int n);

}  // namespace deskstereo
