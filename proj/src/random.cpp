#include "lamcat/random.hpp"

#include <cmath>

#include "lamcat/errors.hpp"

namespace {
__extension__ typedef unsigned __int128 u128;
}

namespace lamcat {

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

std::uint64_t RandomStream::below(std::uint64_t m) {
  if (m == 0) throw DomainError("below: empty range");
  // Lemire's multiply-and-reject.
  u128 product = static_cast<u128>(engine_()) * m;
  auto low = static_cast<std::uint64_t>(product);
  if (low < m) {
    const std::uint64_t threshold = (0 - m) % m;
    while (low < threshold) {
      product = static_cast<u128>(engine_()) * m;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace lamcat
