#include "linkcomm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace linkcomm {

unsigned default_thread_count() {
  if (const char* env = std::getenv("LINKCOMM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace linkcomm
