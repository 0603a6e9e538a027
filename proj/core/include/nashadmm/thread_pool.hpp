#pragma once

#include <barrier>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nashadmm {

/// Persistent workers for fork-join loops over player indices.
///
/// parallel_for splits [0, n) into contiguous chunks, one per worker, and
/// returns after every chunk is done. Each index must touch disjoint output,
/// which makes results independent of the worker count. Not reentrant.
class ThreadPool {
 public:
  explicit ThreadPool(std::size_t threads);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const noexcept { return workers_.size() + 1; }

  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

 private:
  void run_chunk(std::size_t slot);

  std::vector<std::jthread> workers_;
  std::barrier<> start_;
  std::barrier<> done_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t count_ = 0;
  bool stopping_ = false;
  std::vector<std::exception_ptr> errors_;
};

}  // namespace nashadmm
