#pragma once

namespace spearsift {

// Selects between the OpenMP kernel and the serial reference loop. Both
// produce identical results; the serial path exists for testing and
// benchmarking.
enum class Execution { Serial, Parallel };

}  // namespace spearsift
