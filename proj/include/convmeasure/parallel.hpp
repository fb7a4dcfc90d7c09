#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace convmeasure {

/// Selects between the OpenMP kernels and their serial reference twins.
enum class Execution { serial, parallel };

inline void set_worker_count(int workers)
{
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

inline int worker_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Plain loop. Every batch kernel has this as its reference path.
template <typename Functor>
void serial_for(std::size_t count, Functor&& f)
{
    for (std::size_t i = 0; i < count; ++i) f(i);
}

/// OpenMP loop over independent indices. Falls back to a serial loop when
/// already inside a parallel region, so kernels can nest freely. An exception
/// thrown by any iteration is rethrown after the loop; when several iterations
/// throw, the one with the lowest index wins so failures are reproducible.
template <typename Functor>
void parallel_for(std::size_t count, Functor&& f)
{
#ifdef _OPENMP
    if (omp_in_parallel() || count < 2) {
        serial_for(count, f);
        return;
    }
    const auto n = static_cast<std::int64_t>(count);
    std::exception_ptr error;
    std::int64_t error_index = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(convmeasure_parallel_for_error)
            if (i < error_index) {
                error_index = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
#else
    serial_for(count, f);
#endif
}

template <typename Functor>
void for_each_index(Execution mode, std::size_t count, Functor&& f)
{
    if (mode == Execution::parallel)
        parallel_for(count, f);
    else
        serial_for(count, f);
}

} // namespace convmeasure
