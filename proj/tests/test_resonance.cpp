#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "zaklab/resonance.hpp"

using namespace zaklab;

TEST_CASE("resonance function on reference pairs") {
  Vec3 k{9.0, -1.0, 0.0}, kp{4.0, -10.0, 0.0};
  CHECK(resonance_M(k, kp, +1, 2) ==
        doctest::Approx(std::abs(10.0 - std::sqrt(82.0))).epsilon(1e-14));
  CHECK(resonance_M(k, kp, -1, 2) ==
        doctest::Approx(10.0 + std::sqrt(82.0)).epsilon(1e-14));

  // k' = 0 collapses to | -sigma |k| - |k|^2 |
  Vec3 zero{0.0, 0.0, 0.0};
  CHECK(resonance_M(k, zero, +1, 2) ==
        doctest::Approx(std::abs(-std::sqrt(82.0) - 82.0)).epsilon(1e-14));
}

TEST_CASE("resonant pair construction at N = 5 on the square torus") {
  ResonantPair p = construct_resonant_pair(5, Vec3{1.0, 1.0, 0.0});
  CHECK(p.n == 10);
  CHECK(p.m_K == IVec3{5, 9, 0});
  CHECK(p.m_Ktilde == IVec3{-4, 10, 0});
  CHECK(p.residual == doctest::Approx(std::sqrt(82.0) - 10.0).epsilon(1e-14));
  CHECK_FALSE(p.near_boundary);
  CHECK_THROWS_AS(construct_resonant_pair(1, Vec3{1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("residual interval membership over N and gamma") {
  for (Vec3 gamma : {Vec3{1.0, 1.0, 0.0}, Vec3{1.0, std::sqrt(2.0), 0.0},
                     Vec3{std::sqrt(3.0), std::sqrt(2.0), 0.0}}) {
    double bound = 1.0 / (gamma[1] * gamma[1]);
    for (int N = 2; N <= 200; ++N) {
      ResonantPair p = construct_resonant_pair(N, gamma);
      CHECK(p.residual > -bound - 1e-9);
      CHECK(p.residual <= bound + 1e-9);
      // the sigma = -1 twin scales like N
      Vec3 D{(2.0 * N - 1.0) / gamma[0], -1.0 / gamma[1], 0.0};
      Vec3 mkp{-p.m_Ktilde[0] / gamma[0], -p.m_Ktilde[1] / gamma[1], 0.0};
      double Mtwin = resonance_M(D, mkp, -1, 2);
      CHECK(Mtwin / N >= 1.0);
      CHECK(Mtwin / N <= 8.0);
    }
  }
}

TEST_CASE("algebraic identity: M at the constructed pair equals |residual|") {
  for (Vec3 gamma : {Vec3{1.0, 1.0, 0.0}, Vec3{std::sqrt(3.0), std::sqrt(2.0), 0.0}}) {
    for (int N : {2, 5, 17, 101, 200}) {
      ResonantPair p = construct_resonant_pair(N, gamma);
      IVec3 mD{p.m_K[0] - p.m_Ktilde[0], p.m_K[1] - p.m_Ktilde[1], 0};
      IVec3 mKp{-p.m_Ktilde[0], -p.m_Ktilde[1], 0};
      CHECK(resonance_M(mD, mKp, gamma, +1, 2) ==
            doctest::Approx(std::abs(p.residual)).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-dimensional dichotomy") {
  // irrational period: M >= c(gamma) |k| for every pair
  TorusSpec spec;
  spec.d = 1;
  spec.gamma = {std::sqrt(2.0), 1.0, 1.0};
  spec.beta = {1.0, 0.0, 0.0};
  double c = one_d_resonance_constant(std::sqrt(2.0));
  CHECK(c == doctest::Approx((std::sqrt(2.0) - 1.0) / std::sqrt(2.0)));
  DualLattice lat(spec, 71);  // |k| <= 71/sqrt(2) ~ 50
  for (int sigma : {+1, -1}) {
    auto recs = enumerate_near_resonant(lat, sigma, 1e9);
    CHECK(!recs.empty());
    for (const auto& r : recs) CHECK(r.M >= c * r.abs_k * (1.0 - 1e-12));
  }

  // integer period: resonances at arbitrarily large |k|
  TorusSpec ispec;
  ispec.d = 1;
  ispec.gamma = {1.0, 1.0, 1.0};
  ispec.beta = {1.0, 0.0, 0.0};
  DualLattice ilat(ispec, 50);
  auto recs = enumerate_near_resonant(ilat, +1, 1.0);
  double big = 0.0;
  for (const auto& r : recs) big = std::max(big, r.abs_k);
  CHECK(big >= 49.0);
}

TEST_CASE("near-resonant enumeration on the square torus") {
  TorusSpec spec;
  spec.d = 2;
  DualLattice lat(spec, 16);
  auto recs = enumerate_near_resonant(lat, +1, 1.0);
  bool found = false;
  for (const auto& r : recs)
    if (r.m_k == IVec3{9, -1, 0} && r.m_kprime == IVec3{4, -10, 0}) found = true;
  CHECK(found);
  // sorted by |k| then M
  for (std::size_t i = 1; i < recs.size(); ++i) {
    CHECK(recs[i - 1].abs_k <= recs[i].abs_k + 1e-15);
    if (recs[i - 1].abs_k == recs[i].abs_k) CHECK(recs[i - 1].M <= recs[i].M + 1e-15);
  }
  // enumeration agrees with the brute-force oracle on a small lattice
  DualLattice small(spec, 6);
  auto fast = enumerate_near_resonant(small, +1, 0.5);
  std::size_t slow_count = 0;
  for (std::size_t i = 0; i < small.size(); ++i)
    for (std::size_t j = 0; j < small.size(); ++j) {
      Vec3 k = small.k_at(i), kp = small.k_at(j);
      if (norm2(k, 2) == 0.0) continue;
      if (resonance_M(k, kp, +1, 2) <= 0.5) ++slow_count;
    }
  CHECK(fast.size() == slow_count);
}

TEST_CASE("exact resonance is empty on a generic irrational torus") {
  TorusSpec spec;
  spec.d = 2;
  spec.gamma = {std::sqrt(3.0), std::sqrt(2.0), 1.0};
  DualLattice lat(spec, 12);
  CHECK(enumerate_near_resonant(lat, +1, 0.0).empty());
}

TEST_CASE("regularity classifier: hand-checked fixture") {
  auto v = [](double s, double l, int d) { return classify_regularity(s, l, d).verdict; };
  CHECK(v(1.0, 0.0, 2) == RegularityVerdict::WellPosed);
  CHECK(v(0.0, -0.5, 2) == RegularityVerdict::NotC2);
  CHECK(v(1.0, 1.0, 3) == RegularityVerdict::Gap);
  CHECK(v(0.5, 0.0, 2) == RegularityVerdict::WellPosed);   // corner of the 2d range
  CHECK(v(1.5, 1.5, 2) == RegularityVerdict::WellPosed);
  CHECK(v(0.4, 0.0, 2) == RegularityVerdict::IllPosed2D);  // l > 2s-1, l >= 0, s < 3/2
  CHECK(v(1.0, 2.5, 2) == RegularityVerdict::IllPosed2D);  // also inside the 2d clause
  CHECK(v(2.0, 3.5, 2) == RegularityVerdict::NotC2);       // l > s+1, s >= 3/2
  CHECK(v(4.0, 1.0, 2) == RegularityVerdict::NotC2);       // l < s-2
  CHECK(v(1.5, 1.0, 3) == RegularityVerdict::WellPosed);
  CHECK(v(1.0, 0.5, 3) == RegularityVerdict::Gap);          // border l = 1/2 open
  CHECK(v(0.3, 0.3, 3) == RegularityVerdict::NotC2);        // l > 2s-1
  CHECK(v(2.0, 1.0, 2) == RegularityVerdict::WellPosed);
  CHECK_THROWS_AS(classify_regularity(0.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(classify_regularity(0.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("classifier verdict string rendering") {
  CHECK(std::string(to_string(RegularityVerdict::WellPosed)) == "WellPosed");
  CHECK(std::string(to_string(RegularityVerdict::Gap)) == "Gap");
}

TEST_CASE("WellPosed and NotC2 are mutually exclusive on a dense grid") {
  for (int d : {2, 3}) {
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j) {
        double s = -2.0 + 6.0 * i / 200.0;
        double l = -2.0 + 6.0 * j / 200.0;
        CHECK_NOTHROW(classify_regularity(s, l, d));  // throws on overlap
      }
  }
}
