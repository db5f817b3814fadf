#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace evdkit {

// Persistent worker pool for block-level data parallelism.  Callers partition
// work into items whose writes are pairwise disjoint; the pool makes no
// ordering promises across items, so numerical determinism must come from the
// items themselves.
class ThreadPool {
 public:
  // width = total lanes including the calling thread; width-1 threads spawn.
  explicit ThreadPool(int width);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int width() const { return static_cast<int>(threads_.size()) + 1; }

  // Runs body(i) for every i in [begin, end), pulling chunks of `grain`
  // items.  Nested calls from inside a pool job execute inline.
  void parallel_for(std::int64_t begin, std::int64_t end, std::int64_t grain,
                    const std::function<void(std::int64_t)>& body);

  // Process-wide pool.  Width comes from set_global_width when called before
  // first use, else EVDKIT_WORKERS, else the logical core count.
  static ThreadPool& global();
  static void set_global_width(int width);

 private:
  void worker_loop();

  std::mutex mu_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  std::vector<std::thread> threads_;

  // Current job; guarded by mu_ for setup, lock-free for chunk pulls.
  const std::function<void(std::int64_t)>* body_ = nullptr;
  std::atomic<std::int64_t> next_{0};
  std::int64_t end_ = 0;
  std::int64_t grain_ = 1;
  std::int64_t pending_ = 0;  // items not yet completed
  std::uint64_t epoch_ = 0;
  bool stop_ = false;
};

int default_worker_count();

}  // namespace evdkit
