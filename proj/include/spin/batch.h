// Copyright 2026 The SPIN Summarization Authors.
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

#ifndef SPIN_BATCH_H_
#define SPIN_BATCH_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace spin {

// Pulls records from `next` in batches, applies `work` to each record on up
// to `jobs` threads and hands (record, result) to `sink` in input order on
// the calling thread. An exception thrown by `work` is rethrown from the
// sink position of its record, so serial and parallel runs fail at the same
// record.
//
//   next: () -> std::optional<In>
//   work: (const In&) -> Out
//   sink: (In&, Out&&) -> void
template <typename In, typename Next, typename Work, typename Sink>
void ProcessInOrder(Next&& next, std::size_t jobs, Work&& work, Sink&& sink) {
  using Out = decltype(work(std::declval<const In&>()));
  jobs = std::max<std::size_t>(jobs, 1);
  const std::size_t batch_size = jobs == 1 ? 1 : jobs * 16;

  std::vector<In> batch;
  bool exhausted = false;
  while (!exhausted) {
    batch.clear();
    while (batch.size() < batch_size) {
      std::optional<In> item = next();
      if (!item) {
        exhausted = true;
        break;
      }
      batch.push_back(std::move(*item));
    }
    if (batch.empty()) break;

    std::vector<std::optional<Out>> results(batch.size());
    std::vector<std::exception_ptr> errors(batch.size());
    const auto run = [&](std::size_t i) {
      try {
        results[i].emplace(work(std::as_const(batch[i])));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    const std::size_t workers = std::min(jobs, batch.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) run(i);
    } else {
      std::atomic<std::size_t> cursor{0};
      std::vector<std::jthread> threads;
      threads.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
          for (std::size_t i = cursor++; i < batch.size(); i = cursor++) {
            run(i);
          }
        });
      }
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      sink(batch[i], std::move(*results[i]));
    }
  }
}

}  // namespace spin

#endif  // SPIN_BATCH_H_
