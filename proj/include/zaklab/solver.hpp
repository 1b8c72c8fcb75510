#pragma once

// Time evolution of the Zakharov system through its first-order reduction
//   i du/dt + Lap u = (lambda/2)(w + conj w) u
//   i dw/dt - <grad> w = -<grad>^{-1} Lap_beta(|u|^2) - <grad>^{-1}(w+conj w)/2
// with w = n + i <grad>^{-1} dn/dt, plus Picard-iteration diagnostics and the
// quadratic Duhamel iterates of the original (wave-form) integral equations.
//
// Constants must be normalized to c0 = 1, alpha = (1,...,1) before solving;
// beta, lambda, gamma stay general.

#include <optional>
#include <vector>

#include "zaklab/dyadic.hpp"
#include "zaklab/torus.hpp"

namespace zaklab {

enum class Scheme { ExponentialIntegrator, StrangSplitting };
enum class DuhamelQuadrature { Midpoint, TwoPointGauss };

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  Scheme scheme = Scheme::ExponentialIntegrator;
  DuhamelQuadrature quadrature = DuhamelQuadrature::Midpoint;
  int sample_every = 1;   // conservation-report cadence, in steps
  int snap_every = 0;     // full state snapshots (0 = endpoints only)
  bool disable_coupling = false;  // drop the quadratic terms (linear flows)
  void validate() const;
};

struct ZakharovState {
  double t = 0.0;
  FourierField u;
  FourierField w;
};

// w0 = n0 + i <grad>^{-1} n1 (inputs must be real fields)
FourierField reduce_first_order(const FourierField& n0, const FourierField& n1);
// n  = Re w
FourierField wave_real_part(const FourierField& w);
// dn/dt = <grad> Im w
FourierField wave_time_derivative(const FourierField& w);

class ZakharovSolver {
 public:
  ZakharovSolver(const DualLattice& lat, const SolverConfig& cfg);

  ZakharovState step(const ZakharovState& z) const;
  // advance by n steps of size -dt (time reversal uses the same kernels)
  ZakharovState step_back(const ZakharovState& z) const;

  double stability_budget() const;  // dt * max |k|^2, recorded in metadata
  const SolverConfig& config() const { return cfg_; }

 private:
  ZakharovState advance(const ZakharovState& z, double h) const;
  ZakharovState advance_exponential(const ZakharovState& z, double h) const;
  ZakharovState advance_strang(const ZakharovState& z, double h) const;

  DualLattice lat_;
  SolverConfig cfg_;
  SymbolTable tab_;
};

struct TrajectorySample {
  double t = 0.0;
  double mass_u = 0.0;
  std::optional<double> hamiltonian;
  double Hs_u = 0.0;
  double Hl_n = 0.0;
  double Hlm1_nt = 0.0;
};

struct EvolveResult {
  std::vector<TrajectorySample> report;
  std::vector<ZakharovState> snapshots;
  double stability_budget = 0.0;
};

// (s, l) fix the norms reported per sample; the Hamiltonian column is filled
// when alpha = beta = (1,..,1), c0 = lambda = 1 and n1 has zero mean.
EvolveResult evolve(const FourierField& u0, const FourierField& n0, const FourierField& n1,
                    const SolverConfig& cfg, double s, double l);

// Quadratic Picard iterates of the wave-form integral equations:
//   u2(t) = -i lambda int_0^t e^{i(t-t')Lap}[(cos(t'|grad|) n0
//                 + sin(t'|grad|)/|grad| n1) e^{it'Lap} u0] dt'
//   n2(t) = -int_0^t sin((t-t')|grad|)/|grad| Lap_beta[e^{it'Lap}u0
//                 conj(e^{it'Lap}u0)] dt'
// by composite 4-point Gauss quadrature (panels = 0 lets the phase scale
// choose); sin(s|grad|)/|grad| takes the value s at k = 0.
struct QuadraticIterates {
  FourierField u2;
  FourierField n2;
};
QuadraticIterates duhamel_quadratic(const FourierField& u0, const FourierField& n0,
                                    const FourierField& n1, double t, int panels = 0);

// ---- Picard iteration diagnostics ----------------------------------------

struct PicardParams {
  double s = 1.0;
  double l = 0.0;
  double delta = 0.1;   // window scale, <= 1
  int iterations = 6;
  double dt = 1e-3;     // trajectory sampling step on [-2 delta, 2 delta]
};

struct PicardIterationStats {
  int iter = 0;
  double diff_X = 0.0;    // X^{s,1/2,1}_S x X^{l,1/2,1}_{W+} of the increment
  double diff_CtH = 0.0;  // sup_{|t|<=delta} H^s x H^l of the increment
  double ratio_X = 0.0;   // vs previous increment (0 on the first)
  double ratio_CtH = 0.0;
};

struct PicardResult {
  std::vector<PicardIterationStats> stats;
  SampledTrajectory u_traj;  // final iterate
  SampledTrajectory w_traj;
  double data_norm = 0.0;    // r = sqrt(||u0||_{H^s}^2 + ||w0||_{H^l}^2)
  bool diverged = false;     // contraction ratio above 1 persistently
};

PicardResult picard_iterate(const FourierField& u0, const FourierField& w0,
                            const PicardParams& params);

}  // namespace zaklab
