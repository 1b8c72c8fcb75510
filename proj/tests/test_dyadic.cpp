#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "zaklab/dyadic.hpp"

using namespace zaklab;

namespace {

DualLattice small_lattice(int kmax = 8) {
  TorusSpec spec;
  spec.d = 2;
  return DualLattice(spec, kmax);
}

SpacetimeSpectrum random_spectrum(const DualLattice& lat, std::uint64_t seed,
                                  int n_tau = 65, double dtau = 0.5) {
  SpacetimeSpectrum s(lat, n_tau, dtau, 1.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : s.values()) v = cplx{g(rng), g(rng)};
  return s;
}

}  // namespace

TEST_CASE("taper profile and dyadic partition of unity") {
  CHECK(eta(0.3) == 1.0);
  CHECK(eta(-1.0) == 1.0);
  CHECK(eta(2.0) == 0.0);
  CHECK(eta(1.5) == doctest::Approx(0.5));
  CHECK(eta(1.2) == eta(-1.2));
  for (double r = 0.0; r <= 300.0; r += 0.37) {
    double sum = 0.0;
    for (double N = 1.0; N <= 1024.0; N *= 2.0) sum += eta_dyadic(N, r);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("frequency projection: supports and reconstruction") {
  DualLattice lat = small_lattice();
  FourierField f(lat);
  f.set({5, 0, 0}, 1.0);  // |k| = 5
  CHECK(std::abs(project_frequency(f, 4).at({5, 0, 0})) > 0.0);
  CHECK(std::abs(project_frequency(f, 8).at({5, 0, 0})) > 0.0);
  CHECK(project_frequency(f, 1).at({5, 0, 0}) == cplx{0.0, 0.0});
  CHECK(project_frequency(f, 32).at({5, 0, 0}) == cplx{0.0, 0.0});

  FourierField g = random_field(lat, 0.0, 1.0, 77, false);
  FourierField sum(lat);
  for (double N = 1.0; N <= 32.0; N *= 2.0) sum += project_frequency(g, N);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(sum.coeffs()[i] - g.coeffs()[i]) <= 1e-12);

  FourierField z(lat);
  CHECK(project_frequency(z, 4).is_zero());
}

TEST_CASE("modulation projection: point masses and reconstruction") {
  DualLattice lat = small_lattice(2);
  SpacetimeSpectrum s(lat, 33, 0.5, 1.0);
  // point mass at tau = 2, k = (1,0): tau + |k|^2 = 3
  int jt = (33 - 1) / 2 + 4;  // tau = 2
  std::size_t ik = lat.index_of({1, 0, 0});
  s.value(jt, ik) = 1.0;

  CHECK(std::abs(project_modulation(s, 2, EquationType::S).value(jt, ik)) ==
        doctest::Approx(0.5));
  CHECK(std::abs(project_modulation(s, 4, EquationType::S).value(jt, ik)) ==
        doctest::Approx(0.5));
  CHECK(std::abs(project_modulation(s, 1, EquationType::S).value(jt, ik)) == 0.0);
  CHECK(std::abs(project_modulation(s, 8, EquationType::S).value(jt, ik)) == 0.0);

  // W-type: |tau| - |k| = 0 at tau = 1, |k| = 1 survives Q_1^W fully
  SpacetimeSpectrum w(lat, 33, 0.5, 1.0);
  int jw = (33 - 1) / 2 + 2;  // tau = 1
  w.value(jw, ik) = 1.0;
  CHECK(project_modulation(w, 1, EquationType::W).value(jw, ik) == cplx{1.0, 0.0});

  // reconstruction over L
  SpacetimeSpectrum r = random_spectrum(lat, 5);
  SpacetimeSpectrum acc(lat, r.n_tau(), r.dtau(), r.delta());
  for (double L = 1.0; L <= 512.0; L *= 2.0) {
    SpacetimeSpectrum piece = project_modulation(r, L, EquationType::Wplus);
    for (std::size_t i = 0; i < acc.values().size(); ++i)
      acc.values()[i] += piece.values()[i];
  }
  for (std::size_t i = 0; i < acc.values().size(); ++i)
    CHECK(std::abs(acc.values()[i] - r.values()[i]) <= 1e-12 * std::abs(r.values()[i]) + 1e-13);
}

TEST_CASE("frequency and modulation projections commute") {
  DualLattice lat = small_lattice(4);
  SpacetimeSpectrum s = random_spectrum(lat, 9, 33, 1.0);
  SpacetimeSpectrum a = project_modulation(project_frequency(s, 4), 8, EquationType::S);
  SpacetimeSpectrum b = project_frequency(project_modulation(s, 8, EquationType::S), 4);
  for (std::size_t i = 0; i < a.values().size(); ++i)
    CHECK(std::abs(a.values()[i] - b.values()[i]) <=
          4e-16 * std::abs(s.values()[i]));  // diagonal multipliers, ulp-level only
}

TEST_CASE("bourgain norm: zero, homogeneity, p-monotonicity") {
  DualLattice lat = small_lattice(4);
  SpacetimeSpectrum z(lat, 33, 1.0, 1.0);
  BourgainParams prm{0.3, 0.5, 1.0, EquationType::S};
  CHECK(bourgain_norm(z, prm) == 0.0);

  SpacetimeSpectrum s = random_spectrum(lat, 31, 65, 0.5);
  double base = bourgain_norm(s, prm);
  SpacetimeSpectrum sc = s;
  sc *= cplx{-2.5, 1.0};
  CHECK(bourgain_norm(sc, prm) == doctest::Approx(std::abs(cplx{-2.5, 1.0}) * base).epsilon(1e-13));

  BourgainParams p2 = prm;
  p2.p = 2.0;
  CHECK(base >= bourgain_norm(s, p2) * (1.0 - 1e-13));
}

TEST_CASE("W+ norm of w equals W- norm of the conjugate spectrum") {
  DualLattice lat = small_lattice(4);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SpacetimeSpectrum w = random_spectrum(lat, seed, 49, 0.75);
    BourgainParams plus{0.4, 0.5, 1.0, EquationType::Wplus};
    BourgainParams minus{0.4, 0.5, 1.0, EquationType::Wminus};
    CHECK(bourgain_norm(w, plus) ==
          doctest::Approx(bourgain_norm(conj_spectrum(w), minus)).epsilon(1e-12));
  }
}

TEST_CASE("windowed transform of a stationary trajectory matches psi_hat") {
  TorusSpec spec;
  spec.d = 1;
  spec.beta = {1.0, 0.0, 0.0};
  DualLattice lat(spec, 1);
  const double delta = 1.0;
  const double dt = 2e-5;
  SampledTrajectory traj;
  traj.t0 = -2.5;
  traj.dt = dt;
  std::size_t n = (std::size_t)std::llround(5.0 / dt) + 1;
  FourierField u0(lat);
  u0.set({1, 0, 0}, cplx{0.7, -0.4});
  traj.states.assign(n, u0);

  WindowGrid grid{65, 0.25};
  SpacetimeSpectrum s = window_and_transform(traj, delta, grid);
  std::size_t ik = lat.index_of({1, 0, 0});
  double scale = std::abs(u0.at({1, 0, 0}));
  for (int jt = 0; jt < s.n_tau(); jt += 4) {
    cplx expected = psi_hat(delta, s.tau(jt)) * u0.at({1, 0, 0});
    CHECK(std::abs(s.value(jt, ik) - expected) <= 1e-8 * 3.0 * scale);
  }
  // other lattice columns stay empty
  CHECK(std::abs(s.value(3, lat.index_of({0, 0, 0}))) == 0.0);

  SampledTrajectory zero = traj;
  for (auto& st : zero.states) st = FourierField(lat);
  SpacetimeSpectrum zs = window_and_transform(zero, delta, grid);
  for (const auto& v : zs.values()) CHECK(v == cplx{0.0, 0.0});

  SampledTrajectory shorttraj = traj;
  shorttraj.states.resize(n / 4);
  CHECK_THROWS_AS(window_and_transform(shorttraj, delta, grid), std::invalid_argument);
}

TEST_CASE("closed-form taper transform agrees with Simpson quadrature") {
  for (double delta : {1.0, 0.25}) {
    for (double tau : {0.0, 0.3, 1.7, kTwoPi / (2.0 * delta), 9.2 / delta}) {
      cplx q = psi_hat(delta, tau);
      CHECK(std::abs(q.imag()) <= 1e-10);
      CHECK(psi_hat_closed(delta, tau) == doctest::Approx(q.real()).epsilon(1e-9));
    }
  }
}

TEST_CASE("psi_delta Besov scaling is uniform over the window sweep") {
  auto fx = zaklab::testing::load_fixture("pilot_constants.json");
  for (double b : {0.25, 0.5}) {
    double worst = 0.0;
    for (double delta = 1.0; delta >= 1.0 / 64.0 - 1e-12; delta /= 2.0) {
      double ratio = psi_besov_norm(delta, b) / std::pow(delta, 0.5 - b);
      worst = std::max(worst, ratio);
    }
    std::string key = b == 0.25 ? "psi_besov_b14" : "psi_besov_b12";
    if (fx.contains(key))
      CHECK(worst <= fx.at(key).get<double>() * 1.1);
    else
      WARN_MESSAGE(false, "pilot constant missing; observed ", key, " = ", worst);
  }
}

TEST_CASE("free Schrodinger waves: windowed X-norm bounded by the data norm") {
  auto fx = zaklab::testing::load_fixture("pilot_constants.json");
  TorusSpec spec;
  spec.d = 2;
  const double delta = 0.5;
  double worst = 0.0;
  for (IVec3 K : {IVec3{1, 0, 0}, IVec3{3, 2, 0}, IVec3{5, 9, 0}, IVec3{8, -7, 0}}) {
    DualLattice lat(spec, IVec3{std::abs(K[0]), std::abs(K[1]), 0});
    FourierField u0(lat);
    u0.set(K, kTwoPi * kTwoPi);
    double k2 = norm2(lat.k_of(K), 2);

    SampledTrajectory traj;
    traj.dt = 1e-3;
    std::size_t half = (std::size_t)std::llround(2.0 * delta / traj.dt) + 2;
    traj.t0 = -double(half) * traj.dt;
    for (std::size_t i = 0; i <= 2 * half; ++i) {
      double t = traj.t0 + traj.dt * i;
      FourierField st = u0;
      st.set(K, u0.at(K) * std::polar(1.0, -k2 * t));
      traj.states.push_back(st);
    }
    SpacetimeSpectrum s = window_and_transform(traj, delta);
    BourgainParams prm{1.0, 0.5, 1.0, EquationType::S};
    double ratio = bourgain_norm(s, prm) / sobolev_norm(u0, 1.0);
    worst = std::max(worst, ratio);
  }
  if (fx.contains("free_wave_xnorm"))
    CHECK(worst <= fx.at("free_wave_xnorm").get<double>() * 1.1);
  else
    WARN_MESSAGE(false, "pilot constant missing; observed free_wave_xnorm = ", worst);
}
