#include "torustwist/parallel.hpp"

#include <omp.h>

#include <stdexcept>

namespace torustwist {

void set_workers(int n) {
  if (n < 1) throw std::invalid_argument("worker count must be at least 1");
  omp_set_num_threads(n);
}

int workers() { return omp_get_max_threads(); }

}  // namespace torustwist
