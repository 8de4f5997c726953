// include/speechdist/parallel.h

// Copyright 2026  The speechdist Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPEECHDIST_PARALLEL_H_
#define SPEECHDIST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace speechdist {

inline constexpr const char* kJobsEnvVar = "SPEECHDIST_JOBS";

// `requested` > 0 wins; otherwise SPEECHDIST_JOBS, otherwise the hardware
// concurrency (at least 1).
int ResolveJobs(int requested);

// Runs fn(0..n-1) on up to `jobs` threads. If any call throws, the exception
// from the lowest failing index is rethrown after all workers finish.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace speechdist

#endif  // SPEECHDIST_PARALLEL_H_
