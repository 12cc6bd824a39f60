#include "cpnlab/parallel.hpp"

#include <atomic>

namespace cpnlab {

namespace {
std::atomic<Exec> g_exec{
#ifdef _OPENMP
    Exec::Parallel
#else
    Exec::Serial
#endif
};
}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec exec) { g_exec.store(exec); }

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cpnlab
