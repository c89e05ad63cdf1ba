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

#include "conjbench/rate_limiter.hpp"

#include "conjbench/error.hpp"

namespace conjbench {

RateLimiter::RateLimiter(std::size_t budget, Clock::duration interval, Clock& clock)
    : budget_(budget), interval_(interval), clock_(clock) {
  if (budget_ == 0) throw PreconditionError("rate limit budget must be positive");
}

Clock::time_point RateLimiter::acquire() {
  // Admission is serialised; holding the lock while sleeping keeps
  // admissions in arrival order.
  std::lock_guard lock(mu_);
  while (true) {
    const auto now = clock_.now();
    while (!admitted_.empty() && now - admitted_.front() >= interval_) admitted_.pop_front();
    if (admitted_.size() < budget_) {
      admitted_.push_back(now);
      return now;
    }
    clock_.sleep_for(admitted_.front() + interval_ - now);
  }
}

}  // namespace conjbench
