#pragma once

#include <mutex>

namespace bspf::detail {

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex();

}  // namespace bspf::detail
