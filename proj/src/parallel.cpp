#include "magflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace magflow {

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("MAGFLOW_THREADS")) {
    try {
      const long requested = std::stol(cap);
      if (requested >= 1) n = std::min(n, static_cast<std::size_t>(requested));
    } catch (const std::exception&) {
      // Unparseable caps are ignored.
    }
  }
  return n;
}

}  // namespace magflow
