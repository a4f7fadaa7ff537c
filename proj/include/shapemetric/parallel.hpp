// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

namespace shapemetric {

/// Runs fn(i) for i in [begin, end). Each index writes only its own output
/// slot, so results do not depend on the degree of parallelism.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn, std::size_t grain = 256) {
  if (end <= begin) return;
  tbb::parallel_for(tbb::blocked_range<std::size_t>(begin, end, grain),
                    [&](const tbb::blocked_range<std::size_t>& r) {
                      for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
                    });
}

/// Caps worker threads from SHAPEMETRIC_THREADS for the lifetime of the object.
class ThreadLimit {
 public:
  ThreadLimit();

 private:
  std::unique_ptr<tbb::global_control> control_;
};

}  // namespace shapemetric
