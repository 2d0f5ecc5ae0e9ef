#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace maxvar {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Limits on estimated field operations and wall-clock time.
struct Budget {
  std::uint64_t max_ops = std::uint64_t{1} << 34;
  double max_secs = 300.0;

  void require_ops(std::uint64_t estimate, const std::string& what) const {
    if (estimate > max_ops) {
      throw BudgetExceeded(what + ": estimated " + std::to_string(estimate) + " field operations exceeds budget " +
                           std::to_string(max_ops));
    }
  }
};

class Deadline {
 public:
  explicit Deadline(double secs) : secs_(secs), start_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  bool expired() const { return elapsed() > secs_; }

 private:
  double secs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace maxvar
