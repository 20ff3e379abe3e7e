#include "bf/lockcore.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace bf {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t slot) {
  // splitmix64 step over (seed, slot)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (slot + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

BusyForbiddenLock::BusyForbiddenLock(std::size_t slots, ChaosPolicy policy)
    : count_(slots), policy_(policy), slots_(new Slot[slots]) {
  if (slots == 0) throw std::invalid_argument("BusyForbiddenLock: slot count must be positive");
  if (policy.enter_undo_probability < 0 || policy.enter_undo_probability >= 1.0 ||
      policy.leave_reset_probability < 0 || policy.leave_reset_probability >= 1.0)
    throw std::invalid_argument("BusyForbiddenLock: probabilities must lie in [0, 1)");
  for (std::size_t i = 0; i < slots; ++i) slots_[i].rng.seed(mix_seed(policy.seed, i));
}

void BusyForbiddenLock::check_slot(std::size_t slot) const {
  if (slot >= count_) throw std::out_of_range("BusyForbiddenLock: slot out of range");
}

void BusyForbiddenLock::expect_mode(std::size_t slot, std::uint8_t want, std::uint8_t next,
                                    const char* op) {
  std::uint8_t cur = want;
  if (!slots_[slot].mode.compare_exchange_strong(cur, next)) {
    throw std::logic_error(std::string(op) + ": slot " + std::to_string(slot) +
                           " is in the wrong section state");
  }
}

bool BusyForbiddenLock::sometimes(std::size_t slot, double probability) {
  if (probability <= 0.0) return false;
  auto threshold = static_cast<std::uint64_t>(
      probability * static_cast<double>(std::numeric_limits<std::uint64_t>::max()));
  return slots_[slot].rng() < threshold;
}

void BusyForbiddenLock::set_forbidden(std::size_t slot, bool value) {
  slots_[slot].forbidden.store(value);
  slots_[slot].forbidden_stores.fetch_add(1, std::memory_order_relaxed);
}

void BusyForbiddenLock::enter_shared(std::size_t slot) {
  check_slot(slot);
  expect_mode(slot, 0, 1, "enter_shared");
  Slot& s = slots_[slot];
  s.busy.store(true);
  while (s.forbidden.load()) {
    s.busy.store(false);
    // Contention dampener: wait on the writer's mutex for a bounded time,
    // releasing it immediately when acquired.
    if (mutex_.try_lock_for(policy_.timed_lock_timeout)) mutex_.unlock();
    s.busy.store(true);
  }
}

void BusyForbiddenLock::leave_shared(std::size_t slot) {
  check_slot(slot);
  expect_mode(slot, 1, 0, "leave_shared");
  slots_[slot].busy.store(false);
}

void BusyForbiddenLock::enter_exclusive(std::size_t slot) {
  check_slot(slot);
  expect_mode(slot, 0, 2, "enter_exclusive");
  mutex_.lock();
  for (;;) {
    bool all_forbidden = true;
    for (std::size_t r = 0; r < count_; ++r) {
      if (slots_[r].forbidden.load()) continue;
      all_forbidden = false;
      set_forbidden(r, true);
      if (slots_[r].busy.load() || sometimes(slot, policy_.enter_undo_probability))
        set_forbidden(r, false);
    }
    if (all_forbidden) break;
  }
}

void BusyForbiddenLock::leave_exclusive(std::size_t slot) {
  check_slot(slot);
  expect_mode(slot, 2, 0, "leave_exclusive");
  for (;;) {
    bool any_forbidden = false;
    for (std::size_t r = 0; r < count_; ++r) {
      if (!slots_[r].forbidden.load()) continue;
      any_forbidden = true;
      if (sometimes(slot, policy_.leave_reset_probability))
        set_forbidden(r, true);
      else
        set_forbidden(r, false);
    }
    if (!any_forbidden) break;
  }
  mutex_.unlock();
}

bool BusyForbiddenLock::busy_flag(std::size_t slot) const {
  check_slot(slot);
  return slots_[slot].busy.load();
}

bool BusyForbiddenLock::forbidden_flag(std::size_t slot) const {
  check_slot(slot);
  return slots_[slot].forbidden.load();
}

std::uint64_t BusyForbiddenLock::forbidden_store_count(std::size_t slot) const {
  check_slot(slot);
  return slots_[slot].forbidden_stores.load(std::memory_order_relaxed);
}

StressReport run_stress(std::size_t slots, std::size_t readers, std::size_t writers,
                        std::uint64_t ops_per_worker, std::uint64_t seed) {
  if (readers + writers > slots)
    throw std::invalid_argument("run_stress: readers + writers must not exceed slots");

  BusyForbiddenLock lock(slots, ChaosPolicy{.seed = seed});
  StressReport report;
  report.ops_per_slot.assign(slots, 0);

  std::atomic<int> active_readers{0};
  std::atomic<int> active_writers{0};
  std::atomic<std::size_t> max_readers{0};
  std::atomic<std::uint64_t> writer_overlap{0};
  std::atomic<std::uint64_t> reader_writer_overlap{0};

  auto raise_max = [&max_readers](std::size_t seen) {
    std::size_t cur = max_readers.load();
    while (seen > cur && !max_readers.compare_exchange_weak(cur, seen)) {
    }
  };
  // Keeps each section open long enough for workers to actually overlap.
  auto dwell = [](int spins) {
    for (volatile int i = 0; i < spins; ++i) {
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(readers + writers);
  for (std::size_t slot = 0; slot < readers; ++slot) {
    workers.emplace_back([&, slot] {
      for (std::uint64_t i = 0; i < ops_per_worker; ++i) {
        lock.enter_shared(slot);
        int now = active_readers.fetch_add(1) + 1;
        if (active_writers.load() > 0) reader_writer_overlap.fetch_add(1);
        raise_max(static_cast<std::size_t>(now));
        dwell(200);
        active_readers.fetch_sub(1);
        lock.leave_shared(slot);
        report.ops_per_slot[slot]++;
      }
    });
  }
  for (std::size_t w = 0; w < writers; ++w) {
    const std::size_t slot = readers + w;
    workers.emplace_back([&, slot] {
      for (std::uint64_t i = 0; i < ops_per_worker; ++i) {
        lock.enter_exclusive(slot);
        int now = active_writers.fetch_add(1) + 1;
        if (now > 1) writer_overlap.fetch_add(1);
        if (active_readers.load() > 0) reader_writer_overlap.fetch_add(1);
        active_writers.fetch_sub(1);
        lock.leave_exclusive(slot);
        report.ops_per_slot[slot]++;
      }
    });
  }
  for (auto& t : workers) t.join();

  report.max_concurrent_readers = max_readers.load();
  report.writer_overlap_violations = writer_overlap.load();
  report.reader_writer_overlap_violations = reader_writer_overlap.load();
  return report;
}

}  // namespace bf
