#include "reveuler/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>
#include <thread>

#include "reveuler/spectral.hpp"

namespace reveuler {

int worker_count() {
  if (const char* env = std::getenv("REV_EULER_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int configure_parallelism(int workers) {
  const int n = workers > 0 ? workers : worker_count();
  omp_set_num_threads(n);
  configure_threads(n);
  return n;
}

}  // namespace reveuler
