#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dnls {

/// Owns a pair of FFTW plans for one transform length. Transforms are
/// unnormalized forward and 1/n-normalized inverse, so inverse(forward(x)) = x.
/// Input and output must be distinct buffers.
/// Instances are movable, not copyable; each integration owns its own.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const { return n_; }

  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace dnls
