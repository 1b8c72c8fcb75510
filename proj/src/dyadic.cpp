#include "zaklab/dyadic.hpp"

#include <algorithm>
#include <cmath>

namespace zaklab {

double eta(double r) {
  double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  double c = std::cos((kTwoPi / 4.0) * (a - 1.0));  // cos(pi(a-1)/2)
  return c * c;
}

double eta_dyadic(double N, double r) {
  if (N <= 1.0) return eta(r);
  return eta(r / N) - eta(2.0 * r / N);
}

bool shell_contains(double N, double r) {
  double a = std::abs(r);
  if (N <= 1.0) return a <= 2.0;
  return a >= N / 2.0 && a <= 2.0 * N;
}

bool is_dyadic(double N) {
  if (N < 1.0) return false;
  double l = std::log2(N);
  return std::abs(l - std::round(l)) < 1e-12;
}

double modulation_weight(EquationType type, double tau, double abs_k) {
  switch (type) {
    case EquationType::S: return tau + abs_k * abs_k;
    case EquationType::Wplus: return tau + abs_k;
    case EquationType::Wminus: return tau - abs_k;
    case EquationType::W: return std::abs(tau) - abs_k;
  }
  return 0.0;
}

void BourgainParams::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("BourgainParams: p must be >= 1");
}

SpacetimeSpectrum::SpacetimeSpectrum(const DualLattice& lat, int n_tau, double dtau,
                                     double delta)
    : lattice_(lat), n_tau_(n_tau), dtau_(dtau), delta_(delta),
      values_(std::size_t(n_tau) * lat.size(), cplx{0.0, 0.0}) {
  if (n_tau < 1 || n_tau % 2 == 0)
    throw std::invalid_argument("SpacetimeSpectrum: n_tau must be odd and positive");
  if (!(dtau > 0.0)) throw std::invalid_argument("SpacetimeSpectrum: dtau must be positive");
}

SpacetimeSpectrum& SpacetimeSpectrum::operator*=(cplx c) {
  for (auto& v : values_) v *= c;
  return *this;
}

SpacetimeSpectrum& SpacetimeSpectrum::operator-=(const SpacetimeSpectrum& o) {
  if (n_tau_ != o.n_tau_ || dtau_ != o.dtau_ || !(lattice_ == o.lattice_))
    throw std::invalid_argument("spectrum grids differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

FourierField project_frequency(const FourierField& f, double N) {
  if (!is_dyadic(N)) throw std::invalid_argument("project_frequency: N must be dyadic >= 1");
  FourierField g(f.lattice(), f.real_flag());
  const auto& lat = f.lattice();
  for (std::size_t i = 0; i < f.size(); ++i)
    g.coeffs()[i] = eta_dyadic(N, norm(lat.k_at(i), lat.dim())) * f.coeffs()[i];
  return g;
}

SpacetimeSpectrum project_frequency(const SpacetimeSpectrum& u, double N) {
  if (!is_dyadic(N)) throw std::invalid_argument("project_frequency: N must be dyadic >= 1");
  SpacetimeSpectrum v = u;
  const auto& lat = u.lattice();
  const std::size_t nk = lat.size();
  std::vector<double> w(nk);
  for (std::size_t i = 0; i < nk; ++i) w[i] = eta_dyadic(N, norm(lat.k_at(i), lat.dim()));
  for (int jt = 0; jt < u.n_tau(); ++jt)
    for (std::size_t i = 0; i < nk; ++i) v.value(jt, i) *= w[i];
  return v;
}

SpacetimeSpectrum project_modulation(const SpacetimeSpectrum& u, double L, EquationType type) {
  if (!is_dyadic(L)) throw std::invalid_argument("project_modulation: L must be dyadic >= 1");
  SpacetimeSpectrum v = u;
  const auto& lat = u.lattice();
  const std::size_t nk = lat.size();
  std::vector<double> absk(nk);
  for (std::size_t i = 0; i < nk; ++i) absk[i] = norm(lat.k_at(i), lat.dim());
  for (int jt = 0; jt < u.n_tau(); ++jt) {
    double tau = u.tau(jt);
    for (std::size_t i = 0; i < nk; ++i)
      v.value(jt, i) *= eta_dyadic(L, modulation_weight(type, tau, absk[i]));
  }
  return v;
}

SpacetimeSpectrum conj_spectrum(const SpacetimeSpectrum& u) {
  SpacetimeSpectrum v(u.lattice(), u.n_tau(), u.dtau(), u.delta());
  const auto& lat = u.lattice();
  for (int jt = 0; jt < u.n_tau(); ++jt) {
    int jr = u.n_tau() - 1 - jt;  // tau -> -tau
    for (std::size_t i = 0; i < lat.size(); ++i) {
      IVec3 m = lat.m_at(i);
      IVec3 mn{-m[0], -m[1], -m[2]};
      v.value(jt, lat.index_of(mn)) = std::conj(u.value(jr, i));
    }
  }
  return v;
}

double spectrum_l2(const SpacetimeSpectrum& u) {
  double acc = 0.0;
  for (const auto& v : u.values()) acc += std::norm(v);
  return std::sqrt(acc * u.dtau() / u.lattice().spec.gamma_product());
}

namespace {

// dyadic shells with eta_N(r) != 0; at most two for any r
template <typename Fn>
void for_each_shell(double r, double cap, Fn&& fn) {
  double a = std::abs(r);
  double N = 1.0;
  if (a > 2.0) N = std::exp2(std::max(0.0, std::floor(std::log2(a)) - 1.0));
  for (; N <= cap; N *= 2.0) {
    if (N >= 2.0 && a <= N / 2.0) break;
    double w = eta_dyadic(N, a);
    if (w != 0.0) fn(N, w);
  }
}

int dyadic_index(double N) { return (int)std::llround(std::log2(N)); }

double lp_combine(const std::vector<double>& xs, double p) {
  if (xs.empty()) return 0.0;
  if (std::isinf(p)) return *std::max_element(xs.begin(), xs.end());
  if (p == 1.0) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : xs) s += x * x;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double x : xs) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

namespace {

// single pass over the nonzero grid points; each contributes to at most two
// N-shells and two L-shells
std::vector<std::vector<double>> shell_sq_sums(const SpacetimeSpectrum& u,
                                               EquationType type, int& nN, int& nL) {
  const auto& lat = u.lattice();
  const std::size_t nk = lat.size();
  const int nt = u.n_tau();
  std::vector<double> absk(nk);
  double kmax_abs = 0.0;
  for (std::size_t i = 0; i < nk; ++i) {
    absk[i] = norm(lat.k_at(i), lat.dim());
    kmax_abs = std::max(kmax_abs, absk[i]);
  }
  double wmax = 1.0;
  for (double tau : {u.tau(0), u.tau(nt - 1), 0.0}) {
    wmax = std::max(wmax, std::abs(modulation_weight(type, tau, 0.0)));
    wmax = std::max(wmax, std::abs(modulation_weight(type, tau, kmax_abs)));
  }
  nN = dyadic_index(std::exp2(std::ceil(std::log2(std::max(2.0 * kmax_abs, 1.0))))) + 2;
  nL = dyadic_index(std::exp2(std::ceil(std::log2(2.0 * wmax)))) + 2;

  std::vector<std::vector<double>> bins(nN, std::vector<double>(nL, 0.0));
  const double kcap = std::exp2(nN - 1), lcap = std::exp2(nL - 1);
  for (std::size_t i = 0; i < nk; ++i) {
    // collect this column's nonzero taus first
    bool any = false;
    for (int jt = 0; jt < nt && !any; ++jt) any = u.value(jt, i) != cplx{0.0, 0.0};
    if (!any) continue;
    for (int jt = 0; jt < nt; ++jt) {
      double a2 = std::norm(u.value(jt, i));
      if (a2 == 0.0) continue;
      double mw = modulation_weight(type, u.tau(jt), absk[i]);
      for_each_shell(absk[i], kcap, [&](double N, double wN) {
        for_each_shell(mw, lcap, [&](double L, double wL) {
          bins[dyadic_index(N)][dyadic_index(L)] += a2 * wN * wN * wL * wL;
        });
      });
    }
  }
  return bins;
}

}  // namespace

double bourgain_norm(const SpacetimeSpectrum& u, const BourgainParams& params) {
  params.validate();
  int nN = 0, nL = 0;
  auto bins = shell_sq_sums(u, params.type, nN, nL);
  const double wnorm = u.dtau() / u.lattice().spec.gamma_product();
  double acc_N = 0.0;
  for (int iN = 0; iN < nN; ++iN) {
    std::vector<double> per_L(nL);
    for (int iL = 0; iL < nL; ++iL)
      per_L[iL] = std::pow(std::exp2(iL), params.b) * std::sqrt(bins[iN][iL] * wnorm);
    double inner = lp_combine(per_L, params.p);
    acc_N += std::pow(std::exp2(iN), 2.0 * params.s) * inner * inner;
  }
  return std::sqrt(acc_N);
}

std::vector<ShellNorm> shell_norms(const SpacetimeSpectrum& u, EquationType type) {
  int nN = 0, nL = 0;
  auto bins = shell_sq_sums(u, type, nN, nL);
  const double wnorm = u.dtau() / u.lattice().spec.gamma_product();
  std::vector<ShellNorm> out;
  for (int iN = 0; iN < nN; ++iN)
    for (int iL = 0; iL < nL; ++iL)
      out.push_back({std::exp2(iN), std::exp2(iL), std::sqrt(bins[iN][iL] * wnorm)});
  return out;
}

double psi_window(double t, double delta) { return eta(t / delta); }

WindowGrid default_window_grid(const DualLattice& lat, double delta) {
  double k2max = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    k2max = std::max(k2max, norm2(lat.k_at(i), lat.dim()));
  double tau_max = std::max(4.0 * k2max, 8.0);
  double dtau = std::min(1.0 / (8.0 * delta), tau_max / 64.0);
  int half = static_cast<int>(std::ceil(tau_max / dtau));
  return WindowGrid{2 * half + 1, dtau};
}

SpacetimeSpectrum window_and_transform(const SampledTrajectory& traj, double delta,
                                       const WindowGrid& grid) {
  if (traj.states.empty() || traj.dt <= 0.0)
    throw std::invalid_argument("window_and_transform: empty or invalid trajectory");
  const double t_end = traj.t0 + traj.dt * (traj.states.size() - 1);
  if (traj.t0 > -2.0 * delta + 1e-12 || t_end < 2.0 * delta - 1e-12)
    throw std::invalid_argument(
        "window_and_transform: sampling interval too short for the window support");

  const auto& lat = traj.states.front().lattice();
  SpacetimeSpectrum spec(lat, grid.n_tau, grid.dtau, delta);

  const std::size_t nk = lat.size();
  const std::size_t nt = traj.states.size();
  std::vector<double> w(nt);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < nt; ++i) {
    w[i] = psi_window(traj.t0 + traj.dt * i, delta);
    if (w[i] != 0.0) active.push_back(i);
  }
  // columns that are nonzero in some windowed state
  std::vector<std::size_t> cols;
  {
    std::vector<char> nz(nk, 0);
    for (std::size_t i : active) {
      const auto& c = traj.states[i].coeffs();
      for (std::size_t ik = 0; ik < nk; ++ik)
        if (c[ik] != cplx{0.0, 0.0}) nz[ik] = 1;
    }
    for (std::size_t ik = 0; ik < nk; ++ik)
      if (nz[ik]) cols.push_back(ik);
  }
  for (int jt = 0; jt < grid.n_tau; ++jt) {
    double tau = spec.tau(jt);
    for (std::size_t i : active) {
      double t = traj.t0 + traj.dt * i;
      cplx phase = std::polar(w[i] * traj.dt, -tau * t);
      const auto& c = traj.states[i].coeffs();
      for (std::size_t ik : cols) spec.value(jt, ik) += phase * c[ik];
    }
  }
  return spec;
}

SpacetimeSpectrum window_and_transform(const SampledTrajectory& traj, double delta) {
  return window_and_transform(traj, delta,
                              default_window_grid(traj.states.front().lattice(), delta));
}

cplx psi_hat(double delta, double tau, int panels) {
  // composite Simpson over [-2 delta, 2 delta]
  const double a = -2.0 * delta, b = 2.0 * delta;
  const int n = 2 * panels;
  const double h = (b - a) / n;
  cplx acc{0.0, 0.0};
  for (int i = 0; i <= n; ++i) {
    double t = a + i * h;
    double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += wgt * std::polar(psi_window(t, delta), -tau * t);
  }
  return acc * (h / 3.0);
}

double psi_hat_closed(double delta, double tau) {
  // psi_hat(x) = -pi^2 (sin x + sin 2x) / (x (x^2 - pi^2)) for the taper;
  // psi_delta_hat(tau) = delta * psi_hat(delta tau)
  const double pi = kTwoPi / 2.0;
  double x = std::abs(delta * tau);
  double val;
  if (x < 1e-5) {
    val = 3.0 + x * x * (3.0 / (pi * pi) - 1.5);
  } else if (std::abs(x - pi) < 1e-6) {
    val = -0.5;
  } else {
    val = -pi * pi * (std::sin(x) + std::sin(2.0 * x)) / (x * (x * x - pi * pi));
  }
  return delta * val;
}

double psi_besov_norm(double delta, double b) {
  // sum_L L^b || eta_L psi_delta_hat ||_{L^2(R)}, using the closed form of
  // the taper transform on a tau grid wide enough that the dyadic tail is
  // negligible (psi_hat decays like tau^-3).
  const double tau_hi = 4096.0 / delta;
  const double dtau = std::min(0.02 / delta, 0.25);
  const int n = static_cast<int>(std::ceil(tau_hi / dtau));
  std::vector<double> amps(n + 1);
  for (int i = 0; i <= n; ++i) amps[i] = std::abs(psi_hat_closed(delta, i * dtau));

  double total = 0.0;
  for (double L = 1.0; L / 2.0 <= tau_hi; L *= 2.0) {
    double s2 = 0.0;
    int i_lo = L <= 1.0 ? 0 : (int)std::floor(L / (2.0 * dtau));
    int i_hi = std::min(n, (int)std::ceil(2.0 * L / dtau));
    for (int i = i_lo; i <= i_hi; ++i) {
      double wL = eta_dyadic(L, i * dtau);
      if (wL == 0.0) continue;
      double a2 = amps[i] * amps[i] * wL * wL;
      s2 += (i == 0 ? 1.0 : 2.0) * a2;  // even integrand
    }
    total += std::pow(L, b) * std::sqrt(s2 * dtau);
  }
  return total;
}

}  // namespace zaklab
