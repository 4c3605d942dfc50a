#include "prcsync/parallel.hpp"

#include <cstdlib>
#include <string>

namespace prcsync {

std::size_t worker_count() {
  if (const char* env = std::getenv("PRCSYNC_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace prcsync
