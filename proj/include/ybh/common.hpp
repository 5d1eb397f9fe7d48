#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ybh {

/// Element of a finite carrier, 0-based.
using Element = std::uint32_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad table, bad spec string, bad braid word.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The object does not satisfy a structural precondition (e.g. not a right quasigroup).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured size cap.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Integer power with overflow saturation to SIZE_MAX.
inline std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > SIZE_MAX / base) return SIZE_MAX;
    out *= base;
  }
  return out;
}

/// Split [0, n) into `jobs` contiguous ranges and run fn(begin, end, worker)
/// on each, one thread per range. jobs <= 1 runs inline.
template <class Fn>
void parallel_ranges(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n < 2 * jobs) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  workers.reserve(jobs);
  const std::size_t chunk = (n + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&fn, &errors, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// One named check of a verification suite.
struct Check {
  explicit Check(std::string name, std::size_t degree = 0, bool asserted = true)
      : name(std::move(name)), degree(degree), asserted(asserted) {}
  Check(std::string name, std::size_t degree, bool asserted, bool passed, std::string counterexample)
      : name(std::move(name)), degree(degree), asserted(asserted), passed(passed),
        counterexample(std::move(counterexample)) {}

  std::string name;
  std::size_t degree = 0;
  bool asserted = true;  // false: informational only
  bool passed = true;
  std::string counterexample;
};

}  // namespace ybh
