#pragma once

#include "a3w/simd/kernels.hpp"

namespace a3w::simd::detail {

const KernelTable& scalar_table();
#if defined(A3W_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace a3w::simd::detail
