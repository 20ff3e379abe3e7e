#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <vector>

namespace bf {

/// Knobs for the nondeterministic branches of the lock. Decisions are
/// drawn from per-slot generators seeded at construction, so a fixed seed
/// gives identical decision streams.
struct ChaosPolicy {
  std::uint64_t seed = 0;
  double enter_undo_probability = 1.0 / 16;   // "sometimes" undo while acquiring
  double leave_reset_probability = 1.0 / 16;  // "sometimes" re-set while releasing
  std::chrono::microseconds timed_lock_timeout{50};
};

/// Readers-writer lock with one busy and one forbidden flag per slot and a
/// single mutex. Readers touch only their own flags; writers drive all
/// forbidden flags under the mutex.
///
/// Slot identity is caller-provided. Operations on distinct slots may run
/// concurrently; operations on one slot must not.
class BusyForbiddenLock {
 public:
  explicit BusyForbiddenLock(std::size_t slots, ChaosPolicy policy = {});

  BusyForbiddenLock(const BusyForbiddenLock&) = delete;
  BusyForbiddenLock& operator=(const BusyForbiddenLock&) = delete;

  std::size_t slots() const { return count_; }

  void enter_shared(std::size_t slot);
  void leave_shared(std::size_t slot);
  void enter_exclusive(std::size_t slot);
  void leave_exclusive(std::size_t slot);

  // Introspection for tests.
  bool busy_flag(std::size_t slot) const;
  bool forbidden_flag(std::size_t slot) const;
  /// Number of stores to the slot's forbidden flag so far.
  std::uint64_t forbidden_store_count(std::size_t slot) const;

 private:
  struct alignas(64) Slot {
    std::atomic<bool> busy{false};
    std::atomic<bool> forbidden{false};
    std::atomic<std::uint8_t> mode{0};  // 0 free, 1 shared, 2 exclusive
    std::atomic<std::uint64_t> forbidden_stores{0};
    std::mt19937_64 rng;  // used only by this slot's own calls
  };

  bool sometimes(std::size_t slot, double probability);
  void set_forbidden(std::size_t slot, bool value);
  void check_slot(std::size_t slot) const;
  void expect_mode(std::size_t slot, std::uint8_t want, std::uint8_t next, const char* op);

  std::size_t count_;
  ChaosPolicy policy_;
  std::unique_ptr<Slot[]> slots_;
  std::timed_mutex mutex_;
};

struct StressReport {
  std::vector<std::uint64_t> ops_per_slot;
  std::size_t max_concurrent_readers = 0;
  std::uint64_t writer_overlap_violations = 0;
  std::uint64_t reader_writer_overlap_violations = 0;

  bool clean() const {
    return writer_overlap_violations == 0 && reader_writer_overlap_violations == 0;
  }
};

/// Spawns `readers` + `writers` workers over distinct slots, each doing
/// `ops_per_worker` enter/leave cycles of its kind. A monitored counter
/// pair is checked at every section entry: at most one writer, and no
/// writer while readers are inside. Violations are counted, not thrown.
StressReport run_stress(std::size_t slots, std::size_t readers, std::size_t writers,
                        std::uint64_t ops_per_worker, std::uint64_t seed);

}  // namespace bf
