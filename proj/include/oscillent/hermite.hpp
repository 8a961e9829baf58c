#pragma once

#include <cstdint>

namespace oscillent {

/// Orthonormal harmonic-oscillator eigenfunction h_n(xi) in the dimensionless
/// coordinate xi, via the normalized three-term recurrence
///   h_k = sqrt(2/k) xi h_{k-1} - sqrt((k-1)/k) h_{k-2}.
/// The Gaussian factor is applied at the end in log space, with intermediate
/// rescaling, so large n (1e4 and beyond) and large |xi| neither overflow nor
/// underflow prematurely.
double hermite_function(std::int64_t n, double xi);

} // namespace oscillent
