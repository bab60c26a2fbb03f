#pragma once

// Thin wrappers over FFTW's real-to-real transforms.
//
// Plans are cached per (kind, size) and shared; execution uses the new-array
// interface and is safe from multiple threads.

#include <span>

namespace sks::transform {

/// DST-I of length n (FFTW RODFT00):
///   out[k] = 2 sum_{j=0}^{n-1} in[j] sin(pi (j+1)(k+1) / (n+1)).
void dst1(std::span<const double> in, std::span<double> out);

/// DCT-I of length n >= 2 (FFTW REDFT00):
///   out[k] = in[0] + (-1)^k in[n-1] + 2 sum_{j=1}^{n-2} in[j] cos(pi j k / (n-1)).
void dct1(std::span<const double> in, std::span<double> out);

}  // namespace sks::transform
