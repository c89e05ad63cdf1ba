// Copyright 2026 The conjbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <mutex>

#include "conjbench/clock.hpp"

namespace conjbench {

// Admits at most `budget` calls in any window of length `interval`. Keeps
// the admission times of the last `budget` calls and blocks a caller until
// the oldest of them has left the window.
class RateLimiter {
 public:
  RateLimiter(std::size_t budget, Clock::duration interval, Clock& clock = SystemClock::instance());

  // Blocks until the call may proceed; returns its admission time.
  Clock::time_point acquire();

 private:
  std::size_t budget_;
  Clock::duration interval_;
  Clock& clock_;
  std::mutex mu_;
  std::deque<Clock::time_point> admitted_;
};

}  // namespace conjbench
