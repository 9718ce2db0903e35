#pragma once

// Extended precision for packet offsets. A heavy, slowly spreading mirror
// packet accumulates ~1e8 rad of chirp across its width, so its phase needs
// offsets (x - centroid) good to far below an ulp of the absolute position.
// Offsets are formed in quad precision and the Gaussian exponent in long
// double.

#include <complex>

namespace mirror::detail {

#if defined(__SIZEOF_FLOAT128__)
__extension__ typedef __float128 wide;
#else
typedef long double wide;
#endif

using ld = long double;
using cld = std::complex<long double>;

inline ld narrow(wide x) { return static_cast<ld>(x); }

}  // namespace mirror::detail
