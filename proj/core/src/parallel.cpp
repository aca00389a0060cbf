#include "bgk/parallel.hpp"

#include <cstdlib>
#include <string>

#include <Eigen/Core>

namespace bgk {

int thread_budget() {
  static const int budget = [] {
    const char* env = std::getenv("BGK_THREADS");
    if (!env) return 1;
    try {
      const int n = std::stoi(env);
      return n > 0 ? n : 1;
    } catch (...) {
      return 1;
    }
  }();
  return budget;
}

void apply_thread_budget() { Eigen::setNbThreads(thread_budget()); }

}  // namespace bgk
