#pragma once

namespace emai {

// Keeps freed training buffers in the heap instead of returning them to the
// OS after every batch; the repeated mmap/munmap otherwise dominates runtime.
// Idempotent; a no-op outside glibc.
void tune_allocator();

}  // namespace emai
