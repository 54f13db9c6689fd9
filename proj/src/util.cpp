// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/util.hpp"

#include <cstdlib>
#include <string>

namespace streamcode {

unsigned thread_budget() {
    const char* env = std::getenv("STREAMCODE_THREADS");
    if (env == nullptr) return 1;
    try {
        const long v = std::stol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
    return 1;
}

}  // namespace streamcode
