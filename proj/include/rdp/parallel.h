// Copyright 2026 The rdp-lab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RDP_PARALLEL_H_
#define RDP_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rdp {

// Evaluates fn(chunk, begin, end) for the fixed partition of [0, total) into
// chunks of `chunk_size` and returns the results indexed by chunk. Chunks
// are independent, so the caller's ordered merge is deterministic whatever
// the worker count.
template <class Result, class Fn>
std::vector<Result> MapChunks(std::int64_t total, std::int64_t chunk_size,
                              Fn fn) {
  const std::int64_t chunks =
      total <= 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Result> results(static_cast<std::size_t>(chunks));
  const unsigned workers = static_cast<unsigned>(std::min<std::int64_t>(
      chunks, std::max(1u, std::thread::hardware_concurrency())));
  auto run = [&](std::int64_t c) {
    const std::int64_t begin = c * chunk_size;
    const std::int64_t end = std::min(total, begin + chunk_size);
    results[static_cast<std::size_t>(c)] = fn(c, begin, end);
  };
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run(c);
    return results;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::int64_t c = next++; c < chunks; c = next++) {
        try {
          run(c);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace rdp

#endif  // RDP_PARALLEL_H_
