#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace zaklab::fft {

int next_fast_size(int n) {
  if (n <= 1) return 1;
  for (int s = n;; ++s) {
    int r = s;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return s;
  }
}

Buffer::Buffer(std::size_t n) : n_(n) {
  data_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!data_) throw std::bad_alloc();
  zero();
}

Buffer::~Buffer() { fftw_free(data_); }

void Buffer::zero() {
  for (std::size_t i = 0; i < n_; ++i) data_[i] = {0.0, 0.0};
}

namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int, int, int>, fftw_plan> g_plans;

fftw_plan get_plan(const int* dims, int rank, int sign) {
  std::tuple<int, int, int, int, int> key{rank, dims[0], rank > 1 ? dims[1] : 1,
                                          rank > 2 ? dims[2] : 1, sign};
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::size_t total = 1;
  for (int j = 0; j < rank; ++j) total *= static_cast<std::size_t>(dims[j]);
  Buffer scratch(total);
  fftw_plan p = fftw_plan_dft(rank, dims,
                              reinterpret_cast<fftw_complex*>(scratch.data()),
                              reinterpret_cast<fftw_complex*>(scratch.data()),
                              sign, FFTW_ESTIMATE);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  g_plans.emplace(key, p);
  return p;
}

}  // namespace

void transform(std::complex<double>* data, const int* dims, int rank, int sign) {
  fftw_plan p = get_plan(dims, rank, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

}  // namespace zaklab::fft
