#include "momentlab/runtime.hpp"

#include <cstdlib>

namespace momentlab::runtime {

int thread_count() {
  const char* s = std::getenv("MOMENTLAB_THREADS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || v < 1) return 1;
  if (v > 64) return 64;
  return static_cast<int>(v);
}

}  // namespace momentlab::runtime
