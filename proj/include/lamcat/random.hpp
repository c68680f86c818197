#pragma once

#include <cstdint>
#include <random>

namespace lamcat {

/// One independent random stream, identified by (master_seed, stream_index).
///
/// The underlying engine is std::mt19937_64, whose output sequence is fixed by
/// the C++ standard, seeded through std::seed_seq (also fully specified). All
/// derived variates are computed here rather than by <random> distributions,
/// whose algorithms vary between standard libraries. Each call below consumes
/// a documented number of engine outputs:
///   uniform()      exactly one
///   exponential()  exactly one
///   below(m)       one, plus one per (rare) rejection
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  double exponential(double rate);

  // Unbiased integer in [0, m), m >= 1.
  std::uint64_t below(std::uint64_t m);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lamcat
