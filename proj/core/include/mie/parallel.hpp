// Copyright 2026 The mie authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace mie {

/// Worker count used when a caller passes 0: the MIE_WORKERS environment
/// variable if set, otherwise the hardware concurrency.
int default_worker_count();

/// Runs fn(i) for every i in [0, count), distributing indices over at most
/// worker_count threads (0 = default_worker_count()). fn must be safe to
/// call concurrently for distinct indices. The first exception thrown by
/// any task is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, int worker_count, const std::function<void(std::size_t)>& fn);

}  // namespace mie
