#ifndef DPAUDIT_PARALLEL_HPP_
#define DPAUDIT_PARALLEL_HPP_

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dpaudit {

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path; the OpenMP path must produce bit-identical results (parallel
// loops only fill independent slots, reductions stay serial).
enum class Exec { serial, openmp };

inline int max_threads(Exec exec) {
#ifdef _OPENMP
  return exec == Exec::openmp ? omp_get_max_threads() : 1;
#else
  (void)exec;
  return 1;
#endif
}

}  // namespace dpaudit

#endif  // DPAUDIT_PARALLEL_HPP_
