#pragma once

// Shared test utilities: independent oracles kept deliberately naive, plus
// the pilot-constant fixture loader.

#include <complex>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "zaklab/torus.hpp"

namespace zaklab::testing {

inline nlohmann::json load_fixture(const char* name) {
  std::string path = std::string(ZAKLAB_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture: " + path);
  return nlohmann::json::parse(in);
}

inline double pilot_constant(const char* key) {
  return load_fixture("pilot_constants.json").at(key).get<double>();
}

// slow double-loop convolution oracle for product(): (1/vol) sum A[m'] B[m-m']
inline FourierField product_oracle(const FourierField& a, const FourierField& b) {
  const auto& lat = a.lattice();
  FourierField out(lat);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.coeffs()[i] == cplx{0.0, 0.0}) continue;
    IVec3 ma = lat.m_at(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b.coeffs()[j] == cplx{0.0, 0.0}) continue;
      IVec3 mb = lat.m_at(j);
      IVec3 m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      if (!lat.contains(m)) continue;
      out.coeffs()[lat.index_of(m)] += a.coeffs()[i] * b.coeffs()[j];
    }
  }
  out *= 1.0 / lat.spec.volume();
  return out;
}

// real-space samples of a field on a P^d uniform grid by direct summation
inline std::vector<cplx> grid_samples(const FourierField& f, int P) {
  const auto& lat = f.lattice();
  const int d = lat.dim();
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= P;
  std::vector<cplx> out(total, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < f.size(); ++i) {
    cplx c = f.coeffs()[i];
    if (c == cplx{0.0, 0.0}) continue;
    IVec3 m = lat.m_at(i);
    for (std::size_t g = 0; g < total; ++g) {
      std::size_t rest = g;
      double phase = 0.0;
      for (int j = d - 1; j >= 0; --j) {
        int gj = rest % P;
        rest /= P;
        phase += kTwoPi * m[j] * gj / double(P);
      }
      out[g] += c * std::polar(1.0, phase);
    }
  }
  for (auto& v : out) v /= lat.spec.volume();
  return out;
}

}  // namespace zaklab::testing
