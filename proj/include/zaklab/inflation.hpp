#pragma once

// Norm-inflation laboratory: the explicit two-mode counterexample data built
// on the resonant pair (K_N, Ktilde_N), closed-form quadratic iterates and
// their lower-bound probes, full-solver inflation sweeps, and the
// Bourgain-space bilinear-estimate counterexample ratios.

#include <optional>
#include <vector>

#include "zaklab/resonance.hpp"
#include "zaklab/solver.hpp"
#include "zaklab/torus.hpp"

namespace zaklab {

enum class CounterexampleCase { I, II, III, IV };

struct CounterexampleData {
  CounterexampleCase cse;
  int N = 0;
  ResonantPair pair;  // meaningful for cases I and II
  FourierField u0, n0, n1;
};

// case I : u0 = N^{-s} f_N, n0 = N^{-l} g_N, n1 = 0
//          (f_N = e^{iK.x} + e^{iKt.x}, g_N = cos((K - Kt).x))
// case II : u0 = N^{-s} f_N, n0 = n1 = 0
// case III: u0 = 1, n0 = N^{-l} cos((N/g1) x1), n1 = 0
// case IV : u0 = 1 + N^{-s} e^{i(N/g1) x1}, n0 = n1 = 0
// The lattice is sized so the data sit inside half the truncation cube.
CounterexampleData make_counterexample(CounterexampleCase cse, int N, const TorusSpec& spec,
                                       double s, double l);

// F_x u^(2)[u0,n0,0](t, K_N) for case-I data, exact oscillatory integrals.
cplx closed_form_u2_hat(double t, int N, double s, double l, const TorusSpec& spec);
// F_x n^(2)[u0](t, K_N - Kt_N) for u0 = N^{-s} f_N.
cplx closed_form_n2_hat(double t, int N, double s, const TorusSpec& spec);
// case-III value at (N/g1, 0) and case-IV value at (N/g1, 0).
cplx closed_form_u2_hat_case3(double t, int N, double l, const TorusSpec& spec);
cplx closed_form_n2_hat_case4(double t, int N, double s, const TorusSpec& spec);

// || n^(2)[N^{-sprime} f_N](t) ||_{H^{lprime}} in closed form.
double closed_form_n2_norm(double t, int N, double sprime, double lprime,
                           const TorusSpec& spec);

// Scaled non-C^2 probes at the designated times; bounded below uniformly in N.
//   case III: N^{l+2} |F_x u^(2)(g1^2/(100 N^2), (N/g1, 0))|
//   case IV : N^{s+1} |F_x n^(2)(pi g1/(2N), (N/g1, 0))|
double not_c2_probe(CounterexampleCase cse, int N, const TorusSpec& spec, double s,
                    double l);

struct InflationConfig {
  TorusSpec torus;       // d = 2
  double s = 0.0, l = 0.5;
  double sprime = 0.6, lprime = 0.4;
  std::vector<int> N_list{16, 32, 64, 128, 256, 512};
  double t = 0.01;
  int solver_N_max = 128;  // full-solver runs capped for the truncation budget
  int solver_steps = 48;
  // derived by validate(): the auxiliary regularities of the proof
  double s_plus = 0.0, s_minus = 0.0, l_minus = 0.0;
  void validate();
};

struct InflationPerN {
  int N = 0;
  double closed_norm = 0.0;              // ||n^(2)||_{H^{l'}} closed form
  std::optional<double> solver_norm;     // ||n_N(t)||_{H^{l'}} when run
  double u0_Hs = 0.0;                    // ||u0_N||_{H^s}, must decay
  double u0_Hsprime = 0.0;               // ||u0_N||_{H^{s'}}, must stabilize
};

struct InflationReport {
  std::vector<InflationPerN> per_N;
  double slope_closed = 0.0;
  double residual_closed = 0.0;
  std::optional<double> slope_solver;
  std::optional<double> residual_solver;
  double predicted_slope = 0.0;  // l' - 2s' + 1
};

InflationReport run_inflation_experiment(const InflationConfig& cfg);

// ---- Bourgain-space counterexample ratios ---------------------------------

enum class BourgainCounterexample { UW, VWbar, UVbarWave, VUbarWave };

// Ratio of the two sides of the bilinear estimate on the indicator-window
// spectra; grows like N^{-l} (Schroedinger cases) or N^{l+1-2s} (wave cases).
double bourgain_counterexample_ratio(int N, double s, double l, double b, double p,
                                     BourgainCounterexample which, const TorusSpec& spec);

}  // namespace zaklab
