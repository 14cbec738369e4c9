#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>

#include "errors.hpp"

namespace circlekit {

// Limits that bound how much work a single call may do. Threads only change
// wall time, never results.
struct ResourceBudget {
  std::size_t max_bytes = std::size_t{2} << 30;
  unsigned threads = 1;

  static ResourceBudget from_environment() {
    ResourceBudget b;
    if (const char* mb = std::getenv("CIRCLEKIT_MEMORY_MB")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(mb, &end, 10);
      if (end != mb && v > 0) b.max_bytes = static_cast<std::size_t>(v) << 20;
    }
    b.threads = std::max(1u, std::thread::hardware_concurrency());
    return b;
  }

  void require(std::size_t bytes, const std::string& what) const {
    if (bytes > max_bytes) {
      throw ResourceError(what + " needs " + std::to_string(bytes >> 20) +
                          " MiB, budget is " + std::to_string(max_bytes >> 20) + " MiB");
    }
  }
};

}  // namespace circlekit
