#pragma once

namespace otriage {

// Execution strategy for data-parallel stages. Both modes must produce
// bitwise-identical results; Parallel only changes wall-clock time.
enum class ExecMode { Serial, Parallel };

}  // namespace otriage
