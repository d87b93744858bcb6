#pragma once

namespace cqsim {

// Kernels that have an OpenMP path also keep a plain serial path; the serial
// one is the reference the parallel one is tested against.
enum class Execution { serial, parallel };

} // namespace cqsim
