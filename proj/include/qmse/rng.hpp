#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace qmse {

/// A seeded random stream. The pair (seed, stream) fully determines the
/// sequence of draws; distinct stream ids give statistically independent
/// sequences. A stream is owned by one consumer at a time.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Child stream for a sub-task (a matrix column, a run inside a batch...).
  /// Deterministic in (seed, stream, sub) and does not advance this stream.
  RngStream fork(std::uint64_t sub) const;

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  std::complex<double> complex_normal();  // real and imaginary parts N(0, 1/2)
  std::uint64_t below(std::uint64_t n);   // uniform on {0, ..., n-1}
  std::uint64_t binomial(std::uint64_t trials, double p);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Packs up to three indices into a stream id. Used by the experiment
/// harness so that targets and runs never share a stream.
std::uint64_t derive_stream(std::uint64_t purpose, std::uint64_t a, std::uint64_t b = 0);

}  // namespace qmse
