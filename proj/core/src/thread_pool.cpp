#include "nashadmm/thread_pool.hpp"

#include <algorithm>
#include <exception>

namespace nashadmm {

ThreadPool::ThreadPool(std::size_t threads)
    : start_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(threads, 1))),
      done_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(threads, 1))),
      errors_(std::max<std::size_t>(threads, 1)) {
  const auto extra = std::max<std::size_t>(threads, 1) - 1;
  workers_.reserve(extra);
  for (std::size_t slot = 1; slot <= extra; ++slot) {
    workers_.emplace_back([this, slot] {
      for (;;) {
        start_.arrive_and_wait();
        if (stopping_) return;
        run_chunk(slot);
        done_.arrive_and_wait();
      }
    });
  }
}

ThreadPool::~ThreadPool() {
  if (!workers_.empty()) {
    stopping_ = true;
    start_.arrive_and_wait();
  }
}

void ThreadPool::run_chunk(std::size_t slot) {
  const auto parts = size();
  const auto begin = count_ * slot / parts;
  const auto end = count_ * (slot + 1) / parts;
  try {
    for (auto i = begin; i < end; ++i) (*body_)(i);
  } catch (...) {
    errors_[slot] = std::current_exception();
  }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (workers_.empty()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  body_ = &body;
  count_ = n;
  std::fill(errors_.begin(), errors_.end(), nullptr);
  start_.arrive_and_wait();
  run_chunk(0);
  done_.arrive_and_wait();
  body_ = nullptr;
  // Lowest slot wins so the reported error does not depend on scheduling.
  for (const auto& e : errors_) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace nashadmm
