// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/parallel.hpp"

#include <cstdlib>

namespace shapemetric {

ThreadLimit::ThreadLimit() {
  const char* env = std::getenv("SHAPEMETRIC_THREADS");
  if (env == nullptr) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || n <= 0) return;
  control_ = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                   static_cast<std::size_t>(n));
}

}  // namespace shapemetric
