#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "aclab/diagnostics.hpp"

namespace aclab::verify {

class RunCache;

/// Shared state for one verification pass: the seed for randomized checks
/// and the evolution runs reused across criteria.
class Context {
 public:
  explicit Context(std::uint64_t seed = 20240611);
  ~Context();
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  std::uint64_t seed() const noexcept { return seed_; }
  RunCache& runs() { return *runs_; }

 private:
  std::uint64_t seed_;
  std::unique_ptr<RunCache> runs_;
};

struct Criterion {
  int id;
  std::string_view name;
  std::string_view suite;  // steady | dynamics
  std::function<diag::CheckReport(Context&)> run;
};

/// The sixteen acceptance criteria in order.
const std::vector<Criterion>& criteria();

bool is_suite(std::string_view name);  // steady | dynamics | all

/// Runs a suite; throws Error(Usage) for an unknown name. A criterion that
/// throws is reported as failed with the message in `detail`.
std::vector<diag::CheckReport> run_suite(std::string_view suite, Context& ctx);

diag::CheckReport run_criterion(const Criterion& c, Context& ctx);

}  // namespace aclab::verify
