#include "evdkit/thread_pool.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <string>

namespace evdkit {

namespace {

thread_local bool inside_pool_job = false;

int global_width_override = 0;

}  // namespace

ThreadPool::ThreadPool(int width) {
  const int spawn = std::max(0, width - 1);
  threads_.reserve(spawn);
  for (int i = 0; i < spawn; ++i) {
    threads_.emplace_back([this] { worker_loop(); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    stop_ = true;
  }
  cv_start_.notify_all();
  for (auto& t : threads_) t.join();
}

void ThreadPool::worker_loop() {
  inside_pool_job = true;
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(std::int64_t)>* body = nullptr;
    {
      std::unique_lock<std::mutex> lk(mu_);
      cv_start_.wait(lk, [&] { return stop_ || (epoch_ != seen && body_); });
      if (stop_) return;
      seen = epoch_;
      body = body_;
    }
    std::int64_t done = 0;
    for (;;) {
      const std::int64_t i = next_.fetch_add(grain_, std::memory_order_relaxed);
      if (i >= end_) break;
      const std::int64_t hi = std::min(end_, i + grain_);
      for (std::int64_t j = i; j < hi; ++j) (*body)(j);
      done += hi - i;
    }
    if (done > 0) {
      std::lock_guard<std::mutex> lk(mu_);
      pending_ -= done;
      if (pending_ == 0) cv_done_.notify_all();
    }
  }
}

void ThreadPool::parallel_for(std::int64_t begin, std::int64_t end,
                              std::int64_t grain,
                              const std::function<void(std::int64_t)>& body) {
  if (end <= begin) return;
  grain = std::max<std::int64_t>(1, grain);
  if (threads_.empty() || inside_pool_job || end - begin == 1) {
    for (std::int64_t i = begin; i < end; ++i) body(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lk(mu_);
    body_ = &body;
    next_.store(begin, std::memory_order_relaxed);
    end_ = end;
    grain_ = grain;
    pending_ = end - begin;
    ++epoch_;
  }
  cv_start_.notify_all();

  std::int64_t done = 0;
  const bool was_inside = inside_pool_job;
  inside_pool_job = true;
  for (;;) {
    const std::int64_t i = next_.fetch_add(grain, std::memory_order_relaxed);
    if (i >= end) break;
    const std::int64_t hi = std::min(end, i + grain);
    for (std::int64_t j = i; j < hi; ++j) body(j);
    done += hi - i;
  }
  inside_pool_job = was_inside;

  std::unique_lock<std::mutex> lk(mu_);
  pending_ -= done;
  cv_done_.wait(lk, [&] { return pending_ == 0; });
  body_ = nullptr;
}

int default_worker_count() {
  if (const char* env = std::getenv("EVDKIT_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

ThreadPool& ThreadPool::global() {
  static std::unique_ptr<ThreadPool> pool = [] {
    const int w =
        global_width_override > 0 ? global_width_override : default_worker_count();
    return std::make_unique<ThreadPool>(w);
  }();
  return *pool;
}

void ThreadPool::set_global_width(int width) {
  global_width_override = std::max(1, width);
}

}  // namespace evdkit
