#pragma once

namespace reveuler {

/// Worker count: REV_EULER_THREADS when set and positive, else hardware concurrency.
int worker_count();
/// Applies worker_count() (or `workers` when positive) to OpenMP and FFTW.
int configure_parallelism(int workers = 0);

}  // namespace reveuler
