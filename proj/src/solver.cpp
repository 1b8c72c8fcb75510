#include "zaklab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace zaklab {

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be positive");
  if (dt > T + 1e-15) throw std::invalid_argument("SolverConfig: dt must not exceed T");
  if (sample_every < 1) throw std::invalid_argument("SolverConfig: sample_every >= 1");
}

FourierField reduce_first_order(const FourierField& n0, const FourierField& n1) {
  if (n0.realness_defect() > 1e-12 || n1.realness_defect() > 1e-12)
    throw std::invalid_argument("reduce_first_order: n0, n1 must be real fields");
  FourierField w = apply_multiplier(n1, Symbol::BracketInv);
  w *= cplx{0.0, 1.0};
  w += n0;
  w.set_real_flag(false);
  return w;
}

FourierField wave_real_part(const FourierField& w) {
  FourierField n = w;
  n += conj_field(w);
  n *= 0.5;
  n.set_real_flag(true);
  return n;
}

FourierField wave_time_derivative(const FourierField& w) {
  FourierField im = w;
  im -= conj_field(w);
  im *= cplx{0.0, -0.5};  // Im w
  FourierField nt = apply_multiplier(im, Symbol::Bracket);
  nt.set_real_flag(true);
  return nt;
}

ZakharovSolver::ZakharovSolver(const DualLattice& lat, const SolverConfig& cfg)
    : lat_(lat), cfg_(cfg), tab_(lat) {
  cfg_.validate();
  const auto& spec = lat.spec;
  if (spec.c0 != 1.0)
    throw std::invalid_argument("solver requires the normalization c0 = 1 (rescale first)");
  for (int j = 0; j < spec.d; ++j)
    if (spec.alpha[j] != 1.0)
      throw std::invalid_argument(
          "solver requires the normalization alpha = (1,...,1) (rescale first)");
}

double ZakharovSolver::stability_budget() const {
  double k2 = 0.0;
  for (double v : tab_.abs_k2) k2 = std::max(k2, v);
  return cfg_.dt * k2;
}

namespace {

void check_finite(const FourierField& f, const char* what) {
  for (const auto& c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::runtime_error(std::string("numerical abort: non-finite value in ") + what);
}

void phase_schrodinger(FourierField& u, double t, const SymbolTable& tab) {
  for (std::size_t i = 0; i < u.size(); ++i)
    u.coeffs()[i] *= std::polar(1.0, -t * tab.abs_k2[i]);
}

void phase_wave(FourierField& w, double t, const SymbolTable& tab) {
  for (std::size_t i = 0; i < w.size(); ++i)
    w.coeffs()[i] *= std::polar(1.0, -t * tab.brack[i]);
}

struct Nonlinearity {
  FourierField Nu, Nw;
};

// N_u = -i (lambda/2)(w + conj w) u,  N_w = i <grad>^{-1}[Lap_beta(|u|^2) + n]
Nonlinearity eval_nonlinearity(const FourierField& u, const FourierField& w,
                               const SymbolTable& tab) {
  const cplx lambda = u.lattice().spec.lambda;
  FourierField n = w;
  n += conj_field(w);
  n *= 0.5;

  Nonlinearity out;
  out.Nu = product(n, u);
  out.Nu *= cplx{0.0, -1.0} * lambda;

  FourierField uu = product(u, conj_field(u));
  FourierField src = apply_multiplier(uu, Symbol::LaplaceBeta, tab);
  src += n;
  out.Nw = apply_multiplier(src, Symbol::BracketInv, tab);
  out.Nw *= cplx{0.0, 1.0};
  return out;
}

}  // namespace

ZakharovState ZakharovSolver::advance_exponential(const ZakharovState& z, double h) const {
  ZakharovState out;
  out.t = z.t + h;
  if (cfg_.disable_coupling) {
    out.u = z.u;
    out.w = z.w;
    phase_schrodinger(out.u, h, tab_);
    phase_wave(out.w, h, tab_);
    return out;
  }

  auto flow = [&](FourierField u, FourierField w, double t) {
    phase_schrodinger(u, t, tab_);
    phase_wave(w, t, tab_);
    return std::pair{std::move(u), std::move(w)};
  };

  Nonlinearity N0 = eval_nonlinearity(z.u, z.w, tab_);

  if (cfg_.quadrature == DuhamelQuadrature::Midpoint) {
    // exponential Euler to the midpoint, then midpoint Duhamel
    auto [uh, wh] = flow(z.u + (h / 2.0) * cplx{1.0, 0.0} * N0.Nu,
                         z.w + (h / 2.0) * cplx{1.0, 0.0} * N0.Nw, h / 2.0);
    Nonlinearity Nh = eval_nonlinearity(uh, wh, tab_);
    auto [u1, w1] = flow(z.u, z.w, h);
    auto [gu, gw] = flow(h * cplx{1.0, 0.0} * Nh.Nu, h * cplx{1.0, 0.0} * Nh.Nw, h / 2.0);
    out.u = u1 + gu;
    out.w = w1 + gw;
  } else {
    // two-point Gauss nodes with exponential-Euler predictors
    const double c1 = 0.5 - 0.5 / std::sqrt(3.0);
    const double c2 = 0.5 + 0.5 / std::sqrt(3.0);
    FourierField acc_u(z.u.lattice()), acc_w(z.w.lattice());
    for (double c : {c1, c2}) {
      double s = c * h;
      auto [us, ws] = flow(z.u + s * cplx{1.0, 0.0} * N0.Nu,
                           z.w + s * cplx{1.0, 0.0} * N0.Nw, s);
      Nonlinearity Ns = eval_nonlinearity(us, ws, tab_);
      auto [gu, gw] = flow((h / 2.0) * cplx{1.0, 0.0} * Ns.Nu,
                           (h / 2.0) * cplx{1.0, 0.0} * Ns.Nw, h - s);
      acc_u += gu;
      acc_w += gw;
    }
    auto [u1, w1] = flow(z.u, z.w, h);
    out.u = u1 + acc_u;
    out.w = w1 + acc_w;
  }
  check_finite(out.u, "u");
  check_finite(out.w, "w");
  return out;
}

namespace {

// physical-space samples on a zero-padded grid; exact for band-limited data
struct PhysGrid {
  int dims[3] = {1, 1, 1};
  std::size_t total = 1;
  int d = 0;

  explicit PhysGrid(const DualLattice& lat) {
    d = lat.dim();
    for (int j = 0; j < d; ++j) {
      dims[j] = fft::next_fast_size(2 * lat.axis_size(j) - 1);
      total *= static_cast<std::size_t>(dims[j]);
    }
  }

  std::size_t grid_index(const DualLattice& lat, const IVec3& m) const {
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j) {
      int mj = m[j] < 0 ? m[j] + dims[j] : m[j];
      idx = idx * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(mj);
    }
    (void)lat;
    return idx;
  }

  void to_phys(const FourierField& f, fft::Buffer& buf) const {
    buf.zero();
    const auto& lat = f.lattice();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.coeffs()[i] == cplx{0.0, 0.0}) continue;
      buf.data()[grid_index(lat, lat.m_at(i))] = f.coeffs()[i];
    }
    fft::transform(buf.data(), dims, d, +1);
    const double scale = 1.0 / lat.spec.volume();
    for (std::size_t i = 0; i < total; ++i) buf.data()[i] *= scale;
  }

  FourierField from_phys(const fft::Buffer& buf, const DualLattice& lat) const {
    fft::Buffer work(total);
    std::copy(buf.data(), buf.data() + total, work.data());
    fft::transform(work.data(), dims, d, -1);
    const double scale = lat.spec.volume() / static_cast<double>(total);
    FourierField out(lat);
    for (std::size_t i = 0; i < out.size(); ++i)
      out.coeffs()[i] = work.data()[grid_index(lat, lat.m_at(i))] * scale;
    return out;
  }
};

}  // namespace

ZakharovState ZakharovSolver::advance_strang(const ZakharovState& z, double h) const {
  ZakharovState out;
  out.t = z.t + h;
  out.u = z.u;
  out.w = z.w;
  phase_schrodinger(out.u, h / 2.0, tab_);
  phase_wave(out.w, h / 2.0, tab_);

  if (!cfg_.disable_coupling) {
    // the coupling substep is exactly solvable: n = Re w is constant along
    // it, so u picks up the pointwise phase e^{-i lambda h n(x)} and w gains
    // i h <grad>^{-1}[Lap_beta(|u|^2) + n]
    PhysGrid grid(lat_);
    fft::Buffer ubuf(grid.total), nbuf(grid.total);
    grid.to_phys(out.u, ubuf);
    FourierField n = wave_real_part(out.w);
    grid.to_phys(n, nbuf);

    const cplx lambda = lat_.spec.lambda;
    fft::Buffer uu(grid.total);
    for (std::size_t i = 0; i < grid.total; ++i) {
      cplx mid = ubuf.data()[i] * std::exp(cplx{0.0, -1.0} * lambda * (h / 2.0) *
                                            nbuf.data()[i].real());
      uu.data()[i] = mid * std::conj(mid);  // |u(h/2)|^2, exact for real lambda
      ubuf.data()[i] *= std::exp(cplx{0.0, -1.0} * lambda * h * nbuf.data()[i].real());
    }
    out.u = grid.from_phys(ubuf, lat_);
    FourierField uu_hat = grid.from_phys(uu, lat_);
    FourierField src = apply_multiplier(uu_hat, Symbol::LaplaceBeta, tab_);
    src += n;
    FourierField dw = apply_multiplier(src, Symbol::BracketInv, tab_);
    dw *= cplx{0.0, 1.0} * h;
    out.w += dw;
  }

  phase_schrodinger(out.u, h / 2.0, tab_);
  phase_wave(out.w, h / 2.0, tab_);
  check_finite(out.u, "u");
  check_finite(out.w, "w");
  return out;
}

ZakharovState ZakharovSolver::advance(const ZakharovState& z, double h) const {
  return cfg_.scheme == Scheme::StrangSplitting ? advance_strang(z, h)
                                                : advance_exponential(z, h);
}

ZakharovState ZakharovSolver::step(const ZakharovState& z) const {
  return advance(z, cfg_.dt);
}

ZakharovState ZakharovSolver::step_back(const ZakharovState& z) const {
  return advance(z, -cfg_.dt);
}

EvolveResult evolve(const FourierField& u0, const FourierField& n0, const FourierField& n1,
                    const SolverConfig& cfg, double s, double l) {
  const DualLattice& lat = u0.lattice();
  ZakharovSolver solver(lat, cfg);

  const auto& spec = lat.spec;
  bool ham_ok = spec.lambda == cplx{1.0, 0.0} && n1.at(IVec3{0, 0, 0}) == cplx{0.0, 0.0};
  for (int j = 0; j < spec.d && ham_ok; ++j)
    ham_ok = spec.alpha[j] == 1.0 && spec.beta[j] == 1.0;

  ZakharovState z;
  z.t = 0.0;
  z.u = u0;
  z.w = reduce_first_order(n0, n1);

  EvolveResult out;
  out.stability_budget = solver.stability_budget();
  const long long nsteps = std::llround(cfg.T / cfg.dt);

  auto record = [&](const ZakharovState& st) {
    TrajectorySample smp;
    smp.t = st.t;
    smp.mass_u = mass(st.u);
    FourierField n = wave_real_part(st.w);
    FourierField nt = wave_time_derivative(st.w);
    if (ham_ok) {
      // the flow preserves the mean-zero velocity sector; scheme residue at
      // the origin is projected out before evaluating the Hamiltonian
      FourierField nt0 = nt;
      nt0.set(IVec3{0, 0, 0}, cplx{0.0, 0.0});
      smp.hamiltonian = hamiltonian(st.u, n, nt0);
    }
    smp.Hs_u = sobolev_norm(st.u, s);
    smp.Hl_n = sobolev_norm(n, l);
    smp.Hlm1_nt = sobolev_norm(nt, l - 1.0);
    out.report.push_back(smp);
  };

  record(z);
  out.snapshots.push_back(z);
  for (long long i = 1; i <= nsteps; ++i) {
    z = solver.step(z);
    if (i % cfg.sample_every == 0 || i == nsteps) record(z);
    if (cfg.snap_every > 0 && (i % cfg.snap_every == 0)) out.snapshots.push_back(z);
  }
  if (cfg.snap_every <= 0 || (nsteps % std::max(1, cfg.snap_every)) != 0)
    out.snapshots.push_back(z);
  return out;
}

QuadraticIterates duhamel_quadratic(const FourierField& u0, const FourierField& n0,
                                    const FourierField& n1, double t, int panels) {
  const DualLattice& lat = u0.lattice();
  SymbolTable tab(lat);
  const cplx lambda = lat.spec.lambda;

  double omega = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    omega = std::max(omega, tab.abs_k2[i] + tab.abs_k[i]);
  if (panels <= 0)
    panels = std::max(16, (int)std::ceil(2.5 * std::abs(t) * omega));

  // 4-point Gauss-Legendre on [-1, 1]
  const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                        0.8611363115940526};
  const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                        0.3478548451374538};

  FourierField u2(lat), n2(lat);
  const double hpanel = t / panels;
  for (int p = 0; p < panels; ++p) {
    double a = p * hpanel;
    for (int q = 0; q < 4; ++q) {
      double tp = a + (gx[q] + 1.0) * 0.5 * hpanel;
      double wq = gw[q] * 0.5 * hpanel;

      // free flows at t'
      FourierField uf = u0;
      phase_schrodinger(uf, tp, tab);
      FourierField nf(lat);
      for (std::size_t i = 0; i < lat.size(); ++i) {
        double ak = tab.abs_k[i];
        cplx c = n0.coeffs()[i] * std::cos(tp * ak);
        c += n1.coeffs()[i] * (ak > 0.0 ? std::sin(tp * ak) / ak : tp);
        nf.coeffs()[i] = c;
      }

      FourierField fu = product(nf, uf);
      // e^{i(t-t')Lap} applied to the integrand, weight w_q
      phase_schrodinger(fu, t - tp, tab);
      fu *= wq;
      u2 += fu;

      FourierField uu = product(uf, conj_field(uf));
      FourierField fw = apply_multiplier(uu, Symbol::LaplaceBeta, tab);
      for (std::size_t i = 0; i < lat.size(); ++i) {
        double ak = tab.abs_k[i];
        double kern = ak > 0.0 ? std::sin((t - tp) * ak) / ak : (t - tp);
        fw.coeffs()[i] *= kern * wq;
      }
      n2 += fw;
    }
  }
  u2 *= cplx{0.0, -1.0} * lambda;
  n2.set_real_flag(true);
  QuadraticIterates out;
  out.u2 = std::move(u2);
  out.n2 = std::move(n2);
  return out;
}

// ---- Picard iteration -----------------------------------------------------

namespace {

struct Trajectories {
  SampledTrajectory u, w;
};

// Phi applied to sampled trajectories: marching trapezoid Duhamel with the
// exact linear phases between samples, outward from t = 0 in both directions.
Trajectories apply_picard_map(const FourierField& u0, const FourierField& w0,
                              const Trajectories& in, const SymbolTable& tab) {
  const DualLattice& lat = u0.lattice();
  const cplx lambda = lat.spec.lambda;
  const std::size_t n = in.u.states.size();
  const double dt = in.u.dt;
  const std::size_t c = static_cast<std::size_t>(std::llround(-in.u.t0 / dt));

  // integrands
  std::vector<FourierField> Fu(n), Gw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FourierField& u = in.u.states[i];
    const FourierField& w = in.w.states[i];
    FourierField twice_n = w;
    twice_n += conj_field(w);
    FourierField nn = 0.5 * cplx{1.0, 0.0} * twice_n;
    Fu[i] = product(nn, u);
    FourierField uu = product(u, conj_field(u));
    FourierField src = apply_multiplier(uu, Symbol::LaplaceBeta, tab);
    src += nn;
    Gw[i] = apply_multiplier(src, Symbol::BracketInv, tab);
  }

  auto march = [&](std::vector<FourierField>& F, bool schrodinger) {
    std::vector<FourierField> V(n, FourierField(lat));
    auto phase = [&](FourierField& f, double t) {
      if (schrodinger)
        phase_schrodinger(f, t, tab);
      else
        phase_wave(f, t, tab);
    };
    for (std::size_t i = c; i + 1 < n; ++i) {
      FourierField step = V[i];
      step += (dt / 2.0) * cplx{1.0, 0.0} * F[i];
      phase(step, dt);
      step += (dt / 2.0) * cplx{1.0, 0.0} * F[i + 1];
      V[i + 1] = std::move(step);
    }
    for (std::size_t i = c; i > 0; --i) {
      FourierField step = V[i];
      step += (-dt / 2.0) * cplx{1.0, 0.0} * F[i];
      phase(step, -dt);
      step += (-dt / 2.0) * cplx{1.0, 0.0} * F[i - 1];
      V[i - 1] = std::move(step);
    }
    return V;
  };

  std::vector<FourierField> Vu = march(Fu, true);
  std::vector<FourierField> Vw = march(Gw, false);

  Trajectories out;
  out.u.t0 = in.u.t0;
  out.u.dt = dt;
  out.w.t0 = in.w.t0;
  out.w.dt = dt;
  out.u.states.resize(n, FourierField(lat));
  out.w.states.resize(n, FourierField(lat));
  for (std::size_t i = 0; i < n; ++i) {
    double t = in.u.t0 + dt * i;
    FourierField uf = u0;
    phase_schrodinger(uf, t, tab);
    out.u.states[i] = uf + (cplx{0.0, -1.0} * lambda) * Vu[i];
    FourierField wf = w0;
    phase_wave(wf, t, tab);
    out.w.states[i] = wf + cplx{0.0, 1.0} * Vw[i];
  }
  return out;
}

}  // namespace

PicardResult picard_iterate(const FourierField& u0, const FourierField& w0,
                            const PicardParams& params) {
  if (!(params.delta > 0.0) || params.delta > 1.0)
    throw std::invalid_argument("picard_iterate: delta must lie in (0, 1]");
  const DualLattice& lat = u0.lattice();
  SymbolTable tab(lat);

  const double delta = params.delta;
  const std::size_t half = (std::size_t)std::ceil(2.0 * delta / params.dt);
  const std::size_t n = 2 * half + 1;
  const double dt = params.dt;
  const double t0 = -(double)half * dt;

  // zeroth iterate: the free flows
  Trajectories cur;
  cur.u.t0 = cur.w.t0 = t0;
  cur.u.dt = cur.w.dt = dt;
  cur.u.states.resize(n, FourierField(lat));
  cur.w.states.resize(n, FourierField(lat));
  for (std::size_t i = 0; i < n; ++i) {
    double t = t0 + dt * i;
    FourierField uf = u0;
    phase_schrodinger(uf, t, tab);
    cur.u.states[i] = std::move(uf);
    FourierField wf = w0;
    phase_wave(wf, t, tab);
    cur.w.states[i] = std::move(wf);
  }

  PicardResult out;
  out.data_norm = std::hypot(sobolev_norm(u0, params.s), sobolev_norm(w0, params.l));

  WindowGrid grid = default_window_grid(lat, delta);
  BourgainParams bu{params.s, 0.5, 1.0, EquationType::S};
  BourgainParams bw{params.l, 0.5, 1.0, EquationType::Wplus};

  double prev_X = 0.0, prev_C = 0.0;
  int bad = 0;
  for (int it = 1; it <= params.iterations; ++it) {
    Trajectories next = apply_picard_map(u0, w0, cur, tab);

    // increment norms
    SampledTrajectory du, dw;
    du.t0 = dw.t0 = t0;
    du.dt = dw.dt = dt;
    du.states.reserve(n);
    dw.states.reserve(n);
    double ct = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      du.states.push_back(next.u.states[i] - cur.u.states[i]);
      dw.states.push_back(next.w.states[i] - cur.w.states[i]);
      double t = t0 + dt * i;
      if (std::abs(t) <= delta + 1e-12)
        ct = std::max(ct, std::hypot(sobolev_norm(du.states.back(), params.s),
                                     sobolev_norm(dw.states.back(), params.l)));
    }
    double dX = std::hypot(bourgain_norm(window_and_transform(du, delta, grid), bu),
                           bourgain_norm(window_and_transform(dw, delta, grid), bw));

    PicardIterationStats st;
    st.iter = it;
    st.diff_X = dX;
    st.diff_CtH = ct;
    st.ratio_X = prev_X > 0.0 ? dX / prev_X : 0.0;
    st.ratio_CtH = prev_C > 0.0 ? ct / prev_C : 0.0;
    out.stats.push_back(st);
    if (st.ratio_X > 1.0 && it >= 2) {
      if (++bad >= 2) out.diverged = true;
    } else {
      bad = 0;
    }
    prev_X = dX;
    prev_C = ct;
    cur = std::move(next);
  }
  out.u_traj = std::move(cur.u);
  out.w_traj = std::move(cur.w);
  return out;
}

}  // namespace zaklab
