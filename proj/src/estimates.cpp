#include "zaklab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace zaklab {

const char* to_string(InteractionClass c) {
  switch (c) {
    case InteractionClass::HighModulation: return "HighModulation";
    case InteractionClass::HighLow: return "HighLow";
    case InteractionClass::VeryLowWave: return "VeryLowWave";
    case InteractionClass::MiddleHighHigh: return "MiddleHighHigh";
    case InteractionClass::LowHighHighD3: return "LowHighHigh_d3";
    case InteractionClass::LowHighHighD2: return "LowHighHigh_d2";
  }
  return "?";
}

InteractionClass interaction_class_from_string(const std::string& s) {
  for (auto c : {InteractionClass::HighModulation, InteractionClass::HighLow,
                 InteractionClass::VeryLowWave, InteractionClass::MiddleHighHigh,
                 InteractionClass::LowHighHighD3, InteractionClass::LowHighHighD2})
    if (s == to_string(c)) return c;
  throw std::invalid_argument("unknown interaction class: " + s);
}

double DyadicBlockSpec::Nmax() const { return std::max({N0, N1, N2}); }
double DyadicBlockSpec::Nmin() const { return std::min({N0, N1, N2}); }
double DyadicBlockSpec::Nmed() const { return N0 + N1 + N2 - Nmax() - Nmin(); }
double DyadicBlockSpec::Lmax() const { return std::max({L0, L1, L2}); }
double DyadicBlockSpec::Lmin() const { return std::min({L0, L1, L2}); }
double DyadicBlockSpec::Lmed() const { return L0 + L1 + L2 - Lmax() - Lmin(); }

void DyadicBlockSpec::validate(int d) const {
  for (double v : {N0, N1, N2, L0, L1, L2})
    if (!is_dyadic(v) && !(v == 0.0 && cls == InteractionClass::LowHighHighD2))
      throw std::invalid_argument("DyadicBlockSpec: shells must be dyadic >= 1");
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("DyadicBlockSpec: sigma");
  auto comparable = [](double a, double b) { return a <= 2 * b && b <= 2 * a; };
  switch (cls) {
    case InteractionClass::HighModulation:
      if (!(Lmax() >= Nmax() * Nmax() / 8.0))
        throw std::invalid_argument("HighModulation: needs L_max >= N_max^2 / 8");
      break;
    case InteractionClass::HighLow:
      if (!(N1 >= 4 * N2 || N2 >= 4 * N1))
        throw std::invalid_argument("HighLow: needs N1, N2 separated by a factor 4");
      break;
    case InteractionClass::VeryLowWave:
      if (!(N0 <= 8.0)) throw std::invalid_argument("VeryLowWave: needs N0 <= 8");
      break;
    case InteractionClass::MiddleHighHigh:
      if (!(N0 >= 8.0)) throw std::invalid_argument("MiddleHighHigh: needs N0 >= 8");
      if (!(N0 <= 8 * N1) || !comparable(N1, N2))
        throw std::invalid_argument("MiddleHighHigh: needs N0 <~ N1 ~ N2");
      if (!(N1 <= 8 * Lmax()) || !(Lmax() <= N1 * N1 / 8.0))
        throw std::invalid_argument("MiddleHighHigh: needs N1 <~ L_max << N1^2");
      break;
    case InteractionClass::LowHighHighD3:
      if (d < 3) throw std::invalid_argument("LowHighHigh_d3: needs d >= 3");
      if (!(N0 >= 8.0) || !(N0 <= 8 * N1) || !comparable(N1, N2))
        throw std::invalid_argument("LowHighHigh_d3: needs 1 << N0 <~ N1 ~ N2");
      if (!(Lmax() <= N1 / 8.0))
        throw std::invalid_argument("LowHighHigh_d3: needs L_max <= N1 / 8");
      break;
    case InteractionClass::LowHighHighD2:
      if (d != 2) throw std::invalid_argument("LowHighHigh_d2: needs d = 2");
      if (!comparable(N1, N2) || !(N1 >= 8.0))
        throw std::invalid_argument("LowHighHigh_d2: needs 1 << N1 ~ N2");
      if (!(Lmax() <= N1 / 8.0))
        throw std::invalid_argument("LowHighHigh_d2: needs L_max <= N1 / 8");
      break;
  }
}

double paper_bound(const DyadicBlockSpec& s, int d, double eps) {
  switch (s.cls) {
    case InteractionClass::HighModulation:
      return std::sqrt(s.Lmax()) * std::pow(s.Lmed(), 0.25) * std::pow(s.Lmin(), 0.25) *
             std::pow(s.Nmin(), d / 2.0) / s.Nmax();
    case InteractionClass::HighLow: {
      double nlo = std::min(s.N1, s.N2), nhi = std::max(s.N1, s.N2);
      return std::sqrt(s.Lmax()) * std::pow(s.Lmed(), 0.25 + eps) *
             std::pow(s.Lmin(), 0.25 + eps) * std::pow(nlo, d / 2.0 - eps) / nhi;
    }
    case InteractionClass::VeryLowWave:
      return std::pow(s.L0 * s.L1 * s.L2, 1.0 / 6.0);
    case InteractionClass::MiddleHighHigh:
      return std::pow(s.Lmax(), 0.375 + eps) * std::pow(s.Lmed(), 0.375 + eps) *
             std::pow(s.Lmin(), 0.25) * std::pow(s.N0, (d - 2) / 2.0) *
             std::pow(s.N0 / s.N1, eps);
    case InteractionClass::LowHighHighD3:
      return std::pow(s.Lmax(), 0.375) * std::pow(s.Lmed(), 0.375) *
             std::pow(s.N0, (d - 2) / 2.0);
    case InteractionClass::LowHighHighD2:
      return std::pow(s.Lmax(), 0.375) * std::pow(s.Lmed(), 0.375);
  }
  return 0.0;
}

double BlockFunction::sq_sum() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

namespace {

// hull and mask of a modulation window around `shift`:
// tau in shift + W(L), W(1) = [-2,2], W(L) = +-[L/2, 2L]
void window_hull(double L, double shift, double dtau, int& j_lo, int& len) {
  double lo = shift - (L <= 1.0 ? 2.0 : 2.0 * L);
  double hi = shift + (L <= 1.0 ? 2.0 : 2.0 * L);
  j_lo = (int)std::ceil(lo / dtau - 1e-9);
  int j_hi = (int)std::floor(hi / dtau + 1e-9);
  len = std::max(0, j_hi - j_lo + 1);
}

bool window_member(double L, double shift, double tau) {
  double x = std::abs(tau - shift);
  if (L <= 1.0) return x <= 2.0 + 1e-12;
  return x >= L / 2.0 - 1e-12 && x <= 2.0 * L + 1e-12;
}

}  // namespace

TrilinearProblem::TrilinearProblem(const DyadicBlockSpec& spec, const DualLattice& lat,
                                   int d, double dtau_override)
    : lat_(lat), d_(d) {
  spec.validate(d);
  dtau_ = dtau_override > 0.0 ? dtau_override : spec.Lmin() / 8.0;
  measure_ = dtau_ / lat.spec.gamma_product();

  auto build = [&](BlockFunction& b, double N, double L, EquationType type,
                   bool undecomposed) {
    b.dtau = dtau_;
    for (std::size_t i = 0; i < lat_.size(); ++i) {
      double ak = norm(lat_.k_at(i), d_);
      bool in_shell = undecomposed ? ak >= 8.0 : shell_contains(N, ak);
      if (!in_shell) continue;
      double shift = 0.0;
      switch (type) {
        case EquationType::S: shift = -ak * ak; break;
        case EquationType::Wplus: shift = -ak; break;
        case EquationType::Wminus: shift = ak; break;
        default: throw std::invalid_argument("block type must be S or W+-");
      }
      BlockFunction::Slot s;
      s.m = lat_.m_at(i);
      window_hull(L, shift, dtau_, s.j_lo, s.len);
      if (s.len == 0) continue;
      s.off = b.values.size();
      b.slots.push_back(s);
      b.values.resize(b.values.size() + s.len, 0.0);
      for (int j = 0; j < s.len; ++j)
        b.mask.push_back(window_member(L, shift, (s.j_lo + j) * dtau_) ? 1 : 0);
    }
  };

  EquationType ftype = spec.sigma > 0 ? EquationType::Wplus : EquationType::Wminus;
  build(f_, spec.N0, spec.L0, ftype, spec.cls == InteractionClass::LowHighHighD2);
  build(g1_, spec.N1, spec.L1, EquationType::S, false);
  build(g2_, spec.N2, spec.L2, EquationType::S, false);
  if (f_.dof() + g1_.dof() + g2_.dof() > 10'000'000)
    throw std::invalid_argument("TrilinearProblem: more than 1e7 degrees of freedom");
  build_pairs();
}

TrilinearProblem::TrilinearProblem(Bilinear, double Nf, double N1, double L1, double N2,
                                   double L2, EquationType g2_type, const DualLattice& lat,
                                   int d, double dtau_override)
    : lat_(lat), d_(d) {
  dtau_ = dtau_override > 0.0 ? dtau_override : std::min(L1, L2) / 8.0;
  measure_ = dtau_ / lat.spec.gamma_product();

  auto build_g = [&](BlockFunction& b, double N, double L, EquationType type) {
    b.dtau = dtau_;
    for (std::size_t i = 0; i < lat_.size(); ++i) {
      double ak = norm(lat_.k_at(i), d_);
      if (!shell_contains(N, ak)) continue;
      double shift = type == EquationType::S      ? -ak * ak
                     : type == EquationType::Wplus ? -ak
                                                    : ak;
      BlockFunction::Slot s;
      s.m = lat_.m_at(i);
      window_hull(L, shift, dtau_, s.j_lo, s.len);
      if (s.len == 0) continue;
      s.off = b.values.size();
      b.slots.push_back(s);
      b.values.resize(b.values.size() + s.len, 0.0);
      for (int j = 0; j < s.len; ++j)
        b.mask.push_back(window_member(L, shift, (s.j_lo + j) * dtau_) ? 1 : 0);
    }
  };
  build_g(g1_, N1, L1, EquationType::S);
  build_g(g2_, N2, L2, g2_type);

  // free-tau f: hull per k0 covers all achievable j1 - j2 differences
  f_.dtau = dtau_;
  std::unordered_map<std::size_t, std::pair<int, int>> hulls;  // lattice idx -> [lo,hi]
  for (const auto& s1 : g1_.slots)
    for (const auto& s2 : g2_.slots) {
      IVec3 m0{s1.m[0] - s2.m[0], s1.m[1] - s2.m[1], s1.m[2] - s2.m[2]};
      if (!lat_.contains(m0)) continue;
      if (!shell_contains(Nf, norm(lat_.k_of(m0), d_))) continue;
      int lo = s1.j_lo - (s2.j_lo + s2.len - 1);
      int hi = (s1.j_lo + s1.len - 1) - s2.j_lo;
      auto [it, fresh] = hulls.try_emplace(lat_.index_of(m0), std::make_pair(lo, hi));
      if (!fresh) {
        it->second.first = std::min(it->second.first, lo);
        it->second.second = std::max(it->second.second, hi);
      }
    }
  for (auto& [idx, h] : hulls) {
    BlockFunction::Slot s;
    s.m = lat_.m_at(idx);
    s.j_lo = h.first;
    s.len = h.second - h.first + 1;
    s.off = f_.values.size();
    f_.slots.push_back(s);
    f_.values.resize(f_.values.size() + s.len, 0.0);
  }
  f_.mask.assign(f_.values.size(), 1);
  if (f_.dof() + g1_.dof() + g2_.dof() > 10'000'000)
    throw std::invalid_argument("TrilinearProblem: more than 1e7 degrees of freedom");
  build_pairs();
}

void TrilinearProblem::build_pairs() {
  std::unordered_map<std::size_t, std::uint32_t> f_index;
  for (std::uint32_t i = 0; i < f_.slots.size(); ++i)
    f_index.emplace(lat_.index_of(f_.slots[i].m), i);
  pairs_.clear();
  for (std::uint32_t a = 0; a < g1_.slots.size(); ++a) {
    const auto& s1 = g1_.slots[a];
    for (std::uint32_t b = 0; b < g2_.slots.size(); ++b) {
      const auto& s2 = g2_.slots[b];
      IVec3 m0{s1.m[0] - s2.m[0], s1.m[1] - s2.m[1], s1.m[2] - s2.m[2]};
      if (!lat_.contains(m0)) continue;
      auto it = f_index.find(lat_.index_of(m0));
      if (it == f_index.end()) continue;
      const auto& sf = f_.slots[it->second];
      int base = s1.j_lo - s2.j_lo - sf.j_lo;
      // overlap test: j0 range [base - (len2-1), base + len1 - 1] vs [0, lenf)
      if (base + s1.len - 1 < 0 || base - (s2.len - 1) >= sf.len) continue;
      pairs_.push_back({it->second, a, b, base});
    }
  }
}

double TrilinearProblem::form() const {
  double acc = 0.0;
  for (const auto& p : pairs_) {
    const auto& sf = f_.slots[p.sf];
    const auto& s1 = g1_.slots[p.s1];
    const auto& s2 = g2_.slots[p.s2];
    const double* vf = f_.values.data() + sf.off;
    const double* v1 = g1_.values.data() + s1.off;
    const double* v2 = g2_.values.data() + s2.off;
    for (int b = 0; b < s2.len; ++b) {
      double w = v2[b];
      if (w == 0.0) continue;
      int j0 = p.base - b;
      int a_lo = std::max(0, -j0);
      int a_hi = std::min(s1.len - 1, sf.len - 1 - j0);
      double s = 0.0;
      for (int a = a_lo; a <= a_hi; ++a) s += v1[a] * vf[j0 + a];
      acc += s * w;
    }
  }
  return acc * measure_ * measure_;  // raw * dtau^2 / |gamma|^2
}

double TrilinearProblem::block_norm(const BlockFunction& b) const {
  return std::sqrt(b.sq_sum() * measure_);
}

double TrilinearProblem::update_f() {
  std::vector<double> acc(f_.values.size(), 0.0);
  for (const auto& p : pairs_) {
    const auto& sf = f_.slots[p.sf];
    const auto& s1 = g1_.slots[p.s1];
    const auto& s2 = g2_.slots[p.s2];
    double* out = acc.data() + sf.off;
    const double* v1 = g1_.values.data() + s1.off;
    const double* v2 = g2_.values.data() + s2.off;
    for (int b = 0; b < s2.len; ++b) {
      double w = v2[b];
      if (w == 0.0) continue;
      int j0 = p.base - b;
      int a_lo = std::max(0, -j0);
      int a_hi = std::min(s1.len - 1, sf.len - 1 - j0);
      for (int a = a_lo; a <= a_hi; ++a) out[j0 + a] += v1[a] * w;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (!f_.mask[i]) acc[i] = 0.0;
  double nrm = 0.0;
  for (double v : acc) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (std::size_t i = 0; i < acc.size(); ++i) f_.values[i] = acc[i] / nrm;
  return nrm;  // objective in raw units
}

double TrilinearProblem::update_g1() {
  std::vector<double> acc(g1_.values.size(), 0.0);
  for (const auto& p : pairs_) {
    const auto& sf = f_.slots[p.sf];
    const auto& s1 = g1_.slots[p.s1];
    const auto& s2 = g2_.slots[p.s2];
    const double* vf = f_.values.data() + sf.off;
    double* out = acc.data() + s1.off;
    const double* v2 = g2_.values.data() + s2.off;
    for (int b = 0; b < s2.len; ++b) {
      double w = v2[b];
      if (w == 0.0) continue;
      int j0 = p.base - b;
      int a_lo = std::max(0, -j0);
      int a_hi = std::min(s1.len - 1, sf.len - 1 - j0);
      for (int a = a_lo; a <= a_hi; ++a) out[a] += vf[j0 + a] * w;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (!g1_.mask[i]) acc[i] = 0.0;
  double nrm = 0.0;
  for (double v : acc) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (std::size_t i = 0; i < acc.size(); ++i) g1_.values[i] = acc[i] / nrm;
  return nrm;
}

double TrilinearProblem::update_g2() {
  std::vector<double> acc(g2_.values.size(), 0.0);
  for (const auto& p : pairs_) {
    const auto& sf = f_.slots[p.sf];
    const auto& s1 = g1_.slots[p.s1];
    const auto& s2 = g2_.slots[p.s2];
    const double* vf = f_.values.data() + sf.off;
    const double* v1 = g1_.values.data() + s1.off;
    double* out = acc.data() + s2.off;
    for (int b = 0; b < s2.len; ++b) {
      int j0 = p.base - b;
      int a_lo = std::max(0, -j0);
      int a_hi = std::min(s1.len - 1, sf.len - 1 - j0);
      double s = 0.0;
      for (int a = a_lo; a <= a_hi; ++a) s += v1[a] * vf[j0 + a];
      out[b] += s;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (!g2_.mask[i]) acc[i] = 0.0;
  double nrm = 0.0;
  for (double v : acc) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (std::size_t i = 0; i < acc.size(); ++i) g2_.values[i] = acc[i] / nrm;
  return nrm;
}

void TrilinearProblem::randomize(BlockFunction& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double nrm = 0.0;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    b.values[i] = b.mask[i] ? unif(rng) : 0.0;
    nrm += b.values[i] * b.values[i];
  }
  nrm = std::sqrt(nrm);
  if (nrm > 0.0)
    for (auto& v : b.values) v /= nrm;
}

TrilinearProblem::MaxResult TrilinearProblem::alternating_max(double tol, int max_iter,
                                                              int restarts,
                                                              std::uint64_t seed) {
  MaxResult best;
  best.restarts = restarts;
  if (pairs_.empty() || f_.dof() == 0 || g1_.dof() == 0 || g2_.dof() == 0) {
    best.converged = true;
    return best;
  }
  const double unit = std::sqrt(measure_);  // constant = raw objective * unit
  std::vector<double> bf, b1, b2;
  for (int r = 0; r < restarts; ++r) {
    randomize(g1_, seed * 1000003ULL + 2 * r);
    randomize(g2_, seed * 1000003ULL + 2 * r + 1);
    update_f();
    double prev = 0.0;
    bool conv = false;
    int it = 0;
    std::vector<double> hist;
    for (; it < max_iter; ++it) {
      update_g1();
      update_g2();
      double raw = update_f();
      if (!hist.empty() && raw < hist.back() * (1.0 - 1e-12))
        throw std::logic_error("alternating_max: objective decreased");
      hist.push_back(raw);
      if (prev > 0.0 && raw - prev < tol * raw) {
        conv = true;
        ++it;
        break;
      }
      prev = raw;
    }
    double val = (hist.empty() ? 0.0 : hist.back()) * unit;
    if (val > best.constant) {
      best.constant = val;
      best.iterations = it;
      best.converged = conv;
      best.history.assign(hist.begin(), hist.end());
      for (auto& h : best.history) h *= unit;
      bf = f_.values;
      b1 = g1_.values;
      b2 = g2_.values;
    }
  }
  if (!bf.empty()) {
    f_.values = bf;
    g1_.values = b1;
    g2_.values = b2;
  }
  return best;
}

TrilinearResult sharp_constant(const DyadicBlockSpec& spec, const DualLattice& lat, int d,
                               double tol, int max_iter, int restarts, std::uint64_t seed,
                               double dtau_override) {
  TrilinearProblem prob(spec, lat, d, dtau_override);
  auto r = prob.alternating_max(tol, max_iter, restarts, seed);
  TrilinearResult out;
  out.spec = spec;
  out.constant = r.constant;
  out.paper_bound = paper_bound(spec, d);
  out.ratio = out.paper_bound > 0.0 ? out.constant / out.paper_bound : 0.0;
  out.iterations = r.iterations;
  out.restarts = restarts;
  out.converged = r.converged;
  return out;
}

namespace {

BilinearResult finish_bilinear(TrilinearProblem& prob, double Lsmall, double Lbig,
                               double Nref, double Nmin, int d, double tol, int max_iter,
                               int restarts, std::uint64_t seed) {
  auto r = prob.alternating_max(tol, max_iter, restarts, seed);
  BilinearResult out;
  out.constant = r.constant;
  out.paper_bound = std::sqrt(Lsmall) * std::sqrt(Lbig / Nref + 1.0) *
                    std::pow(Nmin, (d - 1) / 2.0);
  out.ratio = out.paper_bound > 0.0 ? out.constant / out.paper_bound : 0.0;
  out.iterations = r.iterations;
  return out;
}

}  // namespace

BilinearResult bilinear_strichartz_constant_i(double N0, double N1, double L1, double N2,
                                              double L2, const DualLattice& lat, int d,
                                              double tol, int max_iter, int restarts,
                                              std::uint64_t seed) {
  TrilinearProblem prob(TrilinearProblem::Bilinear{}, N0, N1, L1, N2, L2, EquationType::S,
                        lat, d);
  return finish_bilinear(prob, std::min(L1, L2), std::max(L1, L2), N0,
                         std::min({N0, N1, N2}), d, tol, max_iter, restarts, seed);
}

BilinearResult bilinear_strichartz_constant_ii(double N2, double N0, double L0, int sigma,
                                               double N1, double L1, const DualLattice& lat,
                                               int d, double tol, int max_iter, int restarts,
                                               std::uint64_t seed) {
  // (conj(w) u)~(zeta) = integral of u~(zeta1) conj(w~)(zeta1 - zeta): the
  // pairing f(zeta) g1(zeta1) g2(zeta0) with zeta = zeta1 - zeta0 and g2 the
  // W block.
  TrilinearProblem prob(TrilinearProblem::Bilinear{}, N2, N1, L1, N0, L0,
                        sigma > 0 ? EquationType::Wplus : EquationType::Wminus, lat, d);
  return finish_bilinear(prob, std::min(L0, L1), std::max(L0, L1), N1,
                         std::min({N0, N1, N2}), d, tol, max_iter, restarts, seed);
}

ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y,
                       int min_points) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_scaling: size mismatch");
  if ((int)x.size() < min_points)
    throw std::invalid_argument("fit_scaling: insufficient sweep points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_scaling: nonpositive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  double n = (double)lx.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14) throw std::invalid_argument("fit_scaling: degenerate sweep");
  ScalingFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = (int)lx.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double r = ly[i] - fit.intercept - fit.slope * lx[i];
    ss += r * r;
  }
  fit.residual_stderr = lx.size() > 2 ? std::sqrt(ss / (n - 2.0)) : 0.0;
  return fit;
}

}  // namespace zaklab
