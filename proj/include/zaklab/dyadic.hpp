#pragma once

// Littlewood-Paley machinery: the taper eta, its dyadic partition eta_N,
// frequency / modulation projections, the psi_delta time window, discrete
// spacetime spectra and the X^{s,b,p} norms built on them.
//
// The discrete L^2_{t,x} norm underlying the Bourgain norms is
//   ||v||^2 = dtau * (1/(gamma_1...gamma_d)) * sum over the (tau,k) grid.
// It is a computable surrogate for the continuum norm; every quantitative
// statement about it in the test-suite is a uniform-boundedness sweep.

#include <functional>
#include <vector>

#include "zaklab/torus.hpp"

namespace zaklab {

// Raised-cosine taper: 1 on [-1,1], cos^2(pi(|r|-1)/2) on 1<=|r|<=2, 0 beyond.
// C^1, even, values in [0,1].  (The analytic theory takes a C-infinity bump;
// nothing computed here is sensitive beyond C^1.)
double eta(double r);

// eta_1 = eta, eta_N(r) = eta(r/N) - eta(2r/N) for dyadic N >= 2.
double eta_dyadic(double N, double r);

// Sharp dyadic shell membership used by the counting / estimates modules:
// |r| <= 2 for N = 1, N/2 <= |r| <= 2N for N >= 2.
bool shell_contains(double N, double r);

bool is_dyadic(double N);

enum class EquationType { S, Wplus, Wminus, W };

// Modulation weight: tau + |k|^2 (S), tau +- |k| (W+-), |tau| - |k| (W).
double modulation_weight(EquationType type, double tau, double abs_k);

struct BourgainParams {
  double s = 0.0;
  double b = 0.5;
  double p = 1.0;  // >= 1; HUGE_VAL means the max over L
  EquationType type = EquationType::S;
  void validate() const;
};

class SpacetimeSpectrum {
 public:
  SpacetimeSpectrum() = default;
  // Symmetric uniform tau grid with n_tau odd: tau_j = (j - (n_tau-1)/2)*dtau.
  SpacetimeSpectrum(const DualLattice& lat, int n_tau, double dtau, double delta);

  const DualLattice& lattice() const { return lattice_; }
  int n_tau() const { return n_tau_; }
  double dtau() const { return dtau_; }
  double tau(int j) const { return (j - (n_tau_ - 1) / 2) * dtau_; }
  double tau_max() const { return tau(n_tau_ - 1); }
  double delta() const { return delta_; }

  cplx& value(int jt, std::size_t ik) { return values_[std::size_t(jt) * lattice_.size() + ik]; }
  cplx value(int jt, std::size_t ik) const { return values_[std::size_t(jt) * lattice_.size() + ik]; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }

  SpacetimeSpectrum& operator*=(cplx c);
  SpacetimeSpectrum& operator-=(const SpacetimeSpectrum& o);

 private:
  DualLattice lattice_;
  int n_tau_ = 0;
  double dtau_ = 0.0;
  double delta_ = 1.0;
  std::vector<cplx> values_;
};

// P_N: multiply coefficients by eta_N(|k|).
FourierField project_frequency(const FourierField& f, double N);
SpacetimeSpectrum project_frequency(const SpacetimeSpectrum& u, double N);

// Q_L: multiply by eta_L(modulation weight).
SpacetimeSpectrum project_modulation(const SpacetimeSpectrum& u, double L, EquationType type);

// conj(u) on the spectrum side: v(tau,k) = conj(u(-tau,-k)).
SpacetimeSpectrum conj_spectrum(const SpacetimeSpectrum& u);

// Discrete L^2_{t,x} norm of the spectrum (see header comment).
double spectrum_l2(const SpacetimeSpectrum& u);

// || || {N^s L^b ||P_N Q_L u||_{L^2}} ||_{l^p_L} ||_{l^2_N}
double bourgain_norm(const SpacetimeSpectrum& u, const BourgainParams& params);

// Per-shell L^2 norms, for CSV export: rows of (N, L, norm).
struct ShellNorm {
  double N, L, value;
};
std::vector<ShellNorm> shell_norms(const SpacetimeSpectrum& u, EquationType type);

// psi_delta(t) = eta(t / delta): the same taper used as a time window.
double psi_window(double t, double delta);

// A trajectory sampled uniformly in time: t_i = t0 + i*dt.
struct SampledTrajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<FourierField> states;
};

struct WindowGrid {
  int n_tau = 0;
  double dtau = 0.0;
};

// Default tau grid: tau_max >= 4 * max|k|^2 and spacing <= 1/(8 delta).
WindowGrid default_window_grid(const DualLattice& lat, double delta);

// Multiply by psi_delta in time, then discrete time-Fourier transform per k:
//   u~(tau, k) = dt * sum_i e^{-i tau t_i} psi_delta(t_i) u_hat(t_i, k).
// The sampling interval must contain [-2 delta, 2 delta].
SpacetimeSpectrum window_and_transform(const SampledTrajectory& traj, double delta,
                                       const WindowGrid& grid);
SpacetimeSpectrum window_and_transform(const SampledTrajectory& traj, double delta);

// ||psi_delta||_{B^b_{2,1}} computed from a scalar quadrature of psi_hat on
// an adapted tau grid; used by the window scaling sweeps.
double psi_besov_norm(double delta, double b);

// Fourier transform of psi_delta at tau by composite Simpson quadrature.
cplx psi_hat(double delta, double tau, int panels = 4096);
// Closed form of the same transform (the taper's transform is elementary).
double psi_hat_closed(double delta, double tau);

}  // namespace zaklab
