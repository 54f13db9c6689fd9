// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

namespace streamcode {

/// Worker count for internally parallel scans. Reads STREAMCODE_THREADS;
/// defaults to 1 so results and timings are reproducible unless the
/// caller opts in. Results are deterministic at any thread count.
unsigned thread_budget();

}  // namespace streamcode
