#include "zaklab/inflation.hpp"

#include <algorithm>
#include <cmath>

#include "zaklab/dyadic.hpp"
#include "zaklab/estimates.hpp"

namespace zaklab {

namespace {

// E(a, t) = int_0^t e^{i a s} ds, stable near a = 0
cplx osc_integral(double a, double t) {
  double x = a * t;
  if (std::abs(x) < 1e-8)
    return cplx{t, 0.0} * (cplx{1.0, 0.0} + cplx{0.0, 0.5} * x + cplx{-x * x / 6.0, 0.0});
  return (std::polar(1.0, x) - cplx{1.0, 0.0}) / cplx{0.0, a};
}

struct PairGeometry {
  ResonantPair pr;
  Vec3 K, Kt, D;
  double absK2, absKt2, absD;
  double R;     // |D| + |K|^2 - |Kt|^2  (resonant phase)
  double Rbar;  // -|D| + |K|^2 - |Kt|^2 (nonresonant twin)
  double D_beta2;
};

PairGeometry pair_geometry(int N, const TorusSpec& spec) {
  PairGeometry g;
  g.pr = construct_resonant_pair(N, spec.gamma, spec.d);
  const double g1 = spec.gamma[0], g2 = spec.gamma[1];
  g.K = Vec3{g.pr.m_K[0] / g1, g.pr.m_K[1] / g2, 0.0};
  g.Kt = Vec3{g.pr.m_Ktilde[0] / g1, g.pr.m_Ktilde[1] / g2, 0.0};
  g.D = Vec3{g.K[0] - g.Kt[0], g.K[1] - g.Kt[1], 0.0};
  g.absK2 = norm2(g.K, 2);
  g.absKt2 = norm2(g.Kt, 2);
  g.absD = norm(g.D, 2);
  g.R = g.absD + g.absK2 - g.absKt2;
  g.Rbar = -g.absD + g.absK2 - g.absKt2;
  g.D_beta2 = spec.beta[0] * g.D[0] * g.D[0] + spec.beta[1] * g.D[1] * g.D[1];
  return g;
}

}  // namespace

CounterexampleData make_counterexample(CounterexampleCase cse, int N, const TorusSpec& spec,
                                       double s, double l) {
  if (spec.d != 2) throw std::invalid_argument("make_counterexample: d must be 2");
  if (N < 2) throw std::invalid_argument("make_counterexample: N must be >= 2");
  const double vol = spec.volume();

  CounterexampleData out;
  out.cse = cse;
  out.N = N;

  if (cse == CounterexampleCase::I || cse == CounterexampleCase::II) {
    out.pair = construct_resonant_pair(N, spec.gamma, spec.d);
    IVec3 mK = out.pair.m_K, mKt = out.pair.m_Ktilde;
    IVec3 km{2 * std::max(std::abs(mK[0]), std::abs(mKt[0])),
             2 * std::max(std::abs(mK[1]), std::abs(mKt[1])), 0};
    DualLattice lat(spec, km);
    out.u0 = FourierField(lat);
    double amp = std::pow((double)N, -s) * vol;
    out.u0.set(mK, amp);
    out.u0.set(mKt, amp);
    out.n0 = FourierField(lat, true);
    if (cse == CounterexampleCase::I) {
      IVec3 mD{mK[0] - mKt[0], mK[1] - mKt[1], 0};
      IVec3 mDn{-mD[0], -mD[1], 0};
      double namp = std::pow((double)N, -l) * vol / 2.0;
      out.n0.set(mD, namp);
      out.n0.set(mDn, namp);
    }
    out.n1 = FourierField(lat, true);
    return out;
  }

  IVec3 km{2 * N, 2, 0};
  DualLattice lat(spec, km);
  out.u0 = FourierField(lat);
  out.n0 = FourierField(lat, true);
  out.n1 = FourierField(lat, true);
  if (cse == CounterexampleCase::III) {
    out.u0.set(IVec3{0, 0, 0}, vol);
    double namp = std::pow((double)N, -l) * vol / 2.0;
    out.n0.set(IVec3{N, 0, 0}, namp);
    out.n0.set(IVec3{-N, 0, 0}, namp);
  } else {  // IV
    out.u0.set(IVec3{0, 0, 0}, vol);
    out.u0.set(IVec3{N, 0, 0}, std::pow((double)N, -s) * vol);
  }
  return out;
}

cplx closed_form_u2_hat(double t, int N, double s, double l, const TorusSpec& spec) {
  PairGeometry g = pair_geometry(N, spec);
  const double vol = spec.volume();
  const cplx lambda = spec.lambda;
  cplx integral = osc_integral(g.R, t) + osc_integral(g.Rbar, t);
  return cplx{0.0, -1.0} * lambda * (vol / 4.0) *
         std::pow((double)N, -s - l) * std::polar(1.0, -t * g.absK2) * integral;
}

cplx closed_form_n2_hat(double t, int N, double s, const TorusSpec& spec) {
  PairGeometry g = pair_geometry(N, spec);
  const double vol = spec.volume();
  // n2_hat(t, D) = -N^{-2s} vol (|D|_beta^2 / (2i |D|))
  //                 [ e^{it|D|} E(-R, t) - e^{-it|D|} E(-Rbar, t) ]
  cplx bracket = std::polar(1.0, t * g.absD) * osc_integral(-g.R, t) -
                 std::polar(1.0, -t * g.absD) * osc_integral(-g.Rbar, t);
  return -std::pow((double)N, -2.0 * s) * vol * g.D_beta2 / (2.0 * g.absD) *
         (bracket / cplx{0.0, 1.0});
}

cplx closed_form_u2_hat_case3(double t, int N, double l, const TorusSpec& spec) {
  const double P = N / spec.gamma[0];
  const double vol = spec.volume();
  cplx integral = osc_integral(P * P + P, t) + osc_integral(P * P - P, t);
  return cplx{0.0, -1.0} * spec.lambda * (vol / 4.0) * std::pow((double)N, -l) *
         std::polar(1.0, -t * P * P) * integral;
}

cplx closed_form_n2_hat_case4(double t, int N, double s, const TorusSpec& spec) {
  const double P = N / spec.gamma[0];
  const double vol = spec.volume();
  cplx bracket = std::polar(1.0, t * P) * osc_integral(-(P * P + P), t) -
                 std::polar(1.0, -t * P) * osc_integral(-(P * P - P), t);
  return -spec.beta[0] * P * vol * std::pow((double)N, -s) *
         (bracket / cplx{0.0, 2.0});
}

double closed_form_n2_norm(double t, int N, double sprime, double lprime,
                           const TorusSpec& spec) {
  PairGeometry g = pair_geometry(N, spec);
  double bD = std::sqrt(1.0 + g.absD * g.absD);
  double amp = std::abs(closed_form_n2_hat(t, N, sprime, spec));
  // two conjugate modes at +-D
  return std::sqrt(2.0 / spec.gamma_product()) * std::pow(bD, lprime) * amp;
}

double not_c2_probe(CounterexampleCase cse, int N, const TorusSpec& spec, double s,
                    double l) {
  const double g1 = spec.gamma[0];
  if (cse == CounterexampleCase::III) {
    double t = g1 * g1 / (100.0 * (double)N * N);
    return std::pow((double)N, l + 2.0) * std::abs(closed_form_u2_hat_case3(t, N, l, spec));
  }
  if (cse == CounterexampleCase::IV) {
    double t = (kTwoPi / 4.0) * g1 / N;  // pi g1 / (2N)
    return std::pow((double)N, s + 1.0) * std::abs(closed_form_n2_hat_case4(t, N, s, spec));
  }
  throw std::invalid_argument("not_c2_probe: case must be III or IV");
}

void InflationConfig::validate() {
  torus.validate();
  if (torus.d != 2) throw std::invalid_argument("InflationConfig: d must be 2");
  if (!(t != 0.0)) throw std::invalid_argument("InflationConfig: t must be nonzero");
  if (N_list.size() < 5)
    throw std::invalid_argument("InflationConfig: need at least 5 dyadic N values");
  if (!(s < sprime)) throw std::invalid_argument("InflationConfig: needs s < s'");
  if (!(l >= lprime)) throw std::invalid_argument("InflationConfig: needs l >= l'");
  if (sprime < 1.0) {
    if (!(0.0 < 2.0 * sprime - 1.0 && 2.0 * sprime - 1.0 < lprime && lprime < 1.0))
      throw std::invalid_argument("InflationConfig: needs 0 < 2s'-1 < l' < 1");
    s_plus = (lprime + 1.0) / 2.0;
    s_minus = 0.0;
    l_minus = 0.0;
  } else {
    if (!(1.0 < 2.0 * sprime - 1.0 && 2.0 * sprime - 1.0 < lprime &&
          lprime < sprime + 0.5))
      throw std::invalid_argument("InflationConfig: needs 1 < 2s'-1 < l' < s'+1/2");
    s_plus = lprime;
    l_minus = s_plus - 1.0;
    s_minus = (l_minus + 1.0) / 2.0;
  }
}

InflationReport run_inflation_experiment(const InflationConfig& cfg_in) {
  InflationConfig cfg = cfg_in;
  cfg.validate();
  const TorusSpec& spec = cfg.torus;
  const double vol = spec.volume();

  InflationReport rep;
  rep.predicted_slope = cfg.lprime - 2.0 * cfg.sprime + 1.0;

  std::vector<double> Ns, closed;
  std::vector<double> Ns_solver, solved;
  for (int N : cfg.N_list) {
    InflationPerN row;
    row.N = N;
    row.closed_norm = closed_form_n2_norm(cfg.t, N, cfg.sprime, cfg.lprime, spec);

    PairGeometry g = pair_geometry(N, spec);
    double bK = std::sqrt(1.0 + g.absK2), bKt = std::sqrt(1.0 + g.absKt2);
    double base = vol / std::sqrt(spec.gamma_product());
    row.u0_Hs = base * std::pow((double)N, -cfg.sprime) *
                std::sqrt(std::pow(bK, 2.0 * cfg.s) + std::pow(bKt, 2.0 * cfg.s));
    row.u0_Hsprime = base * std::pow((double)N, -cfg.sprime) *
                     std::sqrt(std::pow(bK, 2.0 * cfg.sprime) +
                               std::pow(bKt, 2.0 * cfg.sprime));

    if (N <= cfg.solver_N_max) {
      CounterexampleData data =
          make_counterexample(CounterexampleCase::II, N, spec, cfg.sprime, 0.0);
      SolverConfig scfg;
      scfg.T = std::abs(cfg.t);
      scfg.dt = scfg.T / cfg.solver_steps;
      scfg.scheme = Scheme::StrangSplitting;
      scfg.sample_every = cfg.solver_steps;
      EvolveResult ev = evolve(data.u0, data.n0, data.n1, scfg, cfg.sprime, cfg.lprime);
      row.solver_norm = ev.report.back().Hl_n;
      Ns_solver.push_back(N);
      solved.push_back(*row.solver_norm);
    }
    Ns.push_back(N);
    closed.push_back(row.closed_norm);
    rep.per_N.push_back(row);
  }

  ScalingFit fc = fit_scaling(Ns, closed, 5);
  rep.slope_closed = fc.slope;
  rep.residual_closed = fc.residual_stderr;
  if (Ns_solver.size() >= 3) {
    ScalingFit fs = fit_scaling(Ns_solver, solved, 3);
    rep.slope_solver = fs.slope;
    rep.residual_solver = fs.residual_stderr;
  }
  return rep;
}

// ---- Bourgain counterexample ratios ---------------------------------------

namespace {

struct ModProfile {
  double theta_min = 0.0;
  double dtheta = 0.0;
  std::vector<double> vals;
};

ModProfile indicator_profile(double center, double halfwidth, double dtheta) {
  ModProfile p;
  p.dtheta = dtheta;
  p.theta_min = center - halfwidth - 2.0 * dtheta;
  int n = (int)std::ceil((2.0 * halfwidth + 4.0 * dtheta) / dtheta) + 1;
  p.vals.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double th = p.theta_min + i * dtheta;
    if (std::abs(th - center) <= halfwidth) p.vals[i] = 1.0;
  }
  return p;
}

// convolution of two indicators of halfwidth W at centers c1, c2: a tent
ModProfile tent_profile(double c1, double c2, double W, double dtheta) {
  ModProfile p;
  p.dtheta = dtheta;
  double center = c1 + c2;
  p.theta_min = center - 2.0 * W - 2.0 * dtheta;
  int n = (int)std::ceil((4.0 * W + 4.0 * dtheta) / dtheta) + 1;
  p.vals.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double th = p.theta_min + i * dtheta;
    p.vals[i] = std::max(0.0, 2.0 * W - std::abs(th - center));
  }
  return p;
}

// X^{s,b,p} norm of a single-k spectrum with modulation profile `prof`
double xnorm_single_k(double abs_k, double s, double b, double p, const ModProfile& prof,
                      double gamma_prod) {
  double nfac = 0.0;
  double kcap = std::max(2.0 * abs_k, 2.0);
  for (double Nq = 1.0; Nq <= 2.0 * kcap; Nq *= 2.0) {
    double w = eta_dyadic(Nq, abs_k);
    nfac += w * w * std::pow(Nq, 2.0 * s);
  }
  nfac = std::sqrt(nfac);

  double theta_max = std::abs(prof.theta_min) +
                     prof.dtheta * (double)prof.vals.size() + 1.0;
  std::vector<double> perL;
  for (double L = 1.0; L / 2.0 <= theta_max; L *= 2.0) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < prof.vals.size(); ++i) {
      if (prof.vals[i] == 0.0) continue;
      double th = prof.theta_min + prof.dtheta * i;
      double w = eta_dyadic(L, th);
      s2 += w * w * prof.vals[i] * prof.vals[i];
    }
    perL.push_back(std::pow(L, b) * std::sqrt(s2 * prof.dtheta / gamma_prod));
  }
  double inner;
  if (std::isinf(p)) {
    inner = *std::max_element(perL.begin(), perL.end());
  } else {
    inner = 0.0;
    for (double v : perL) inner += std::pow(v, p);
    inner = std::pow(inner, 1.0 / p);
  }
  return nfac * inner;
}

}  // namespace

double bourgain_counterexample_ratio(int N, double s, double l, double b, double p,
                                     BourgainCounterexample which, const TorusSpec& spec) {
  if (spec.d != 2) throw std::invalid_argument("bourgain_counterexample_ratio: d must be 2");
  PairGeometry g = pair_geometry(N, spec);
  const double A = 1.0 / (spec.gamma[1] * spec.gamma[1]);
  const double W = 10.0 * A;
  const double dtheta = A / 64.0;
  const double gp = spec.gamma_product();
  const double absK = std::sqrt(g.absK2), absKt = std::sqrt(g.absKt2);
  const double mult = std::abs(g.D_beta2) / std::sqrt(1.0 + g.absD * g.absD);

  ModProfile box = indicator_profile(0.0, W, dtheta);
  double u_norm = xnorm_single_k(absK, s, b, p, box, gp);
  double v_norm = xnorm_single_k(absKt, s, b, p, box, gp);
  double w_norm = xnorm_single_k(g.absD, l, b, p, box, gp);

  switch (which) {
    case BourgainCounterexample::UW: {
      // u.w lands at Ktilde with S-modulation center -R
      ModProfile tent = tent_profile(-g.R, 0.0, W, dtheta);
      double lhs = xnorm_single_k(absKt, s, b - 1.0, p, tent, gp);
      return lhs / (u_norm * w_norm);
    }
    case BourgainCounterexample::VWbar: {
      // v.conj(w) lands at K with S-modulation center +R
      ModProfile tent = tent_profile(g.R, 0.0, W, dtheta);
      double lhs = xnorm_single_k(absK, s, b - 1.0, p, tent, gp);
      return lhs / (v_norm * w_norm);
    }
    case BourgainCounterexample::UVbarWave: {
      // u.conj(v) lands at D with W- modulation center -R
      ModProfile tent = tent_profile(-g.R, 0.0, W, dtheta);
      double lhs = mult * xnorm_single_k(g.absD, l, b - 1.0, p, tent, gp);
      return lhs / (u_norm * v_norm);
    }
    case BourgainCounterexample::VUbarWave: {
      ModProfile tent = tent_profile(g.R, 0.0, W, dtheta);
      double lhs = mult * xnorm_single_k(g.absD, l, b - 1.0, p, tent, gp);
      return lhs / (u_norm * v_norm);
    }
  }
  return 0.0;
}

}  // namespace zaklab
