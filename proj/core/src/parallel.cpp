#include "fucik/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fucik {

std::size_t thread_count() {
  if (const char* env = std::getenv("FUCIK_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
      // fall through to auto
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace fucik
