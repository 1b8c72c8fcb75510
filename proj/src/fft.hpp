#pragma once

// Thin wrapper over FFTW3 used for exact zero-padded convolutions.
// Plans are cached per grid shape behind a mutex; execution uses the
// new-array interface on fftw_malloc'd buffers.

#include <complex>
#include <cstddef>
#include <vector>

namespace zaklab::fft {

// Smallest 2^a 3^b 5^c 7^d >= n.
int next_fast_size(int n);

class Buffer {
 public:
  explicit Buffer(std::size_t n);
  ~Buffer();
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  std::complex<double>* data() { return data_; }
  const std::complex<double>* data() const { return data_; }
  std::size_t size() const { return n_; }
  void zero();

 private:
  std::complex<double>* data_;
  std::size_t n_;
};

// In-place c2c transform over a row-major rank-`rank` grid (rank 1..3).
// sign: -1 forward, +1 backward (FFTW convention, unnormalized).
void transform(std::complex<double>* data, const int* dims, int rank, int sign);

}  // namespace zaklab::fft
