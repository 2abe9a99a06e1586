/*
 * Copyright 2026 The HiGen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HIGEN_PARALLEL_H_
#define HIGEN_PARALLEL_H_

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace higen {

// Runs fn(i) for i in [0, count) on up to `workers` threads, handing out
// indices in increasing order. Used for I/O-bound work (model calls); the
// numeric kernels use OpenMP instead. If any call throws, the exception
// with the smallest index is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(size_t count, size_t workers, Fn&& fn) {
  if (count == 0) return;
  workers = std::max<size_t>(1, std::min(workers, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace higen

#endif  // HIGEN_PARALLEL_H_
