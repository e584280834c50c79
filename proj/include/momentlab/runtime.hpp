#pragma once

namespace momentlab::runtime {

// Worker count for block-parallel sums: MOMENTLAB_THREADS when set
// (clamped to [1, 64]), otherwise 1.  Hardware is never auto-detected, so
// a default run behaves the same on every machine; the count only changes
// scheduling, never results, because partial sums are always combined in
// fixed block order.
int thread_count();

}  // namespace momentlab::runtime
