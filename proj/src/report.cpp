// Copyright the streamcode authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "streamcode/report.hpp"

#include <sstream>

namespace streamcode {

std::string VerificationReport::describe() const {
    std::ostringstream out;
    out << "verification: " << (passed ? "PASSED" : "FAILED");
    if (skipped_pairs > 0) out << " (skipped " << skipped_pairs << " untestable pairs)";
    if (!note.empty()) out << "\nnote: " << note;
    if (counterexample) {
        const auto& ce = *counterexample;
        out << "\ncounterexample: i=" << ce.i << " j=" << ce.j
            << " achieved=" << ce.achieved_distance << " required=" << ce.required_distance;
        if (!ce.difference.empty()) out << "\nwitness: " << ce.difference.to_bits();
        if (!ce.second.empty()) out << "\nwitness2: " << ce.second.to_bits();
        if (!ce.note.empty()) out << "\nnote: " << ce.note;
    }
    return out.str();
}

}  // namespace streamcode
