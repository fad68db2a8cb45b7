#include "qew/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace qew {

std::size_t thread_budget() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("QEW_THREADS")) {
    try {
      const long requested = std::stol(env);
      if (requested >= 1) return std::min<std::size_t>(hw, static_cast<std::size_t>(requested));
    } catch (...) {
      // unparsable value: fall through to the hardware default
    }
  }
  return hw;
}

} // namespace qew
