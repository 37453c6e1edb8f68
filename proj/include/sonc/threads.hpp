#pragma once

namespace sonc {

/// Thread count for parallel regions: OpenMP's default, capped by the
/// SONC_SEP_THREADS environment variable when set to a positive integer.
int effective_threads();

}  // namespace sonc
