#include "zaklab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fft.hpp"

namespace zaklab {

void TorusSpec::validate() const {
  if (d < 1 || d > 3) throw std::invalid_argument("TorusSpec: d must be 1, 2 or 3");
  bool beta_all_zero = true;
  for (int j = 0; j < d; ++j) {
    if (!(gamma[j] > 0.0)) throw std::invalid_argument("TorusSpec: gamma must be positive");
    if (!(alpha[j] > 0.0)) throw std::invalid_argument("TorusSpec: alpha must be positive");
    if (beta[j] != 0.0) beta_all_zero = false;
  }
  if (!(c0 > 0.0)) throw std::invalid_argument("TorusSpec: c0 must be positive");
  if (lambda == cplx{0.0, 0.0}) throw std::invalid_argument("TorusSpec: lambda must be nonzero");
  if (beta_all_zero) throw std::invalid_argument("TorusSpec: beta must not vanish identically");
}

double TorusSpec::gamma_product() const {
  double p = 1.0;
  for (int j = 0; j < d; ++j) p *= gamma[j];
  return p;
}

double TorusSpec::volume() const {
  double v = gamma_product();
  for (int j = 0; j < d; ++j) v *= kTwoPi;
  return v;
}

DualLattice::DualLattice(const TorusSpec& s, const IVec3& km) : spec(s), kmax(km) {
  spec.validate();
  for (int j = 0; j < spec.d; ++j)
    if (kmax[j] < 0) throw std::invalid_argument("DualLattice: kmax must be nonnegative");
  for (int j = spec.d; j < 3; ++j) kmax[j] = 0;
}

DualLattice::DualLattice(const TorusSpec& s, int km_all)
    : DualLattice(s, IVec3{km_all, km_all, km_all}) {}

std::size_t DualLattice::size() const {
  std::size_t n = 1;
  for (int j = 0; j < spec.d; ++j) n *= static_cast<std::size_t>(axis_size(j));
  return n;
}

bool DualLattice::contains(const IVec3& m) const {
  for (int j = 0; j < spec.d; ++j)
    if (m[j] < -kmax[j] || m[j] > kmax[j]) return false;
  for (int j = spec.d; j < 3; ++j)
    if (m[j] != 0) return false;
  return true;
}

std::size_t DualLattice::index_of(const IVec3& m) const {
  std::size_t idx = 0;
  for (int j = 0; j < spec.d; ++j)
    idx = idx * static_cast<std::size_t>(axis_size(j)) +
          static_cast<std::size_t>(m[j] + kmax[j]);
  return idx;
}

IVec3 DualLattice::m_at(std::size_t idx) const {
  IVec3 m{0, 0, 0};
  for (int j = spec.d - 1; j >= 0; --j) {
    int n = axis_size(j);
    m[j] = static_cast<int>(idx % n) - kmax[j];
    idx /= n;
  }
  return m;
}

Vec3 DualLattice::k_of(const IVec3& m) const {
  Vec3 k{0.0, 0.0, 0.0};
  for (int j = 0; j < spec.d; ++j) k[j] = m[j] / spec.gamma[j];
  return k;
}

Vec3 DualLattice::k_at(std::size_t idx) const { return k_of(m_at(idx)); }

double norm2(const Vec3& k, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += k[j] * k[j];
  return s;
}

double norm(const Vec3& k, int d) { return std::sqrt(norm2(k, d)); }

double bracket(const Vec3& k, int d) { return std::sqrt(1.0 + norm2(k, d)); }

SymbolTable::SymbolTable(const DualLattice& lat) {
  std::size_t n = lat.size();
  abs_k2.resize(n);
  alpha_sym.resize(n);
  beta_sym.resize(n);
  brack.resize(n);
  abs_k.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 k = lat.k_at(i);
    double a = 0.0, b = 0.0, r2 = 0.0;
    for (int j = 0; j < lat.dim(); ++j) {
      r2 += k[j] * k[j];
      a += lat.spec.alpha[j] * k[j] * k[j];
      b += lat.spec.beta[j] * k[j] * k[j];
    }
    abs_k2[i] = r2;
    alpha_sym[i] = a;
    beta_sym[i] = b;
    brack[i] = std::sqrt(1.0 + r2);
    abs_k[i] = std::sqrt(r2);
  }
}

FourierField::FourierField(const DualLattice& lat, bool real_flag)
    : lattice_(lat), coeff_(lat.size(), cplx{0.0, 0.0}), real_flag_(real_flag) {}

cplx FourierField::at(const IVec3& m) const {
  if (!lattice_.contains(m)) return {0.0, 0.0};
  return coeff_[lattice_.index_of(m)];
}

void FourierField::set(const IVec3& m, cplx v) {
  if (!lattice_.contains(m))
    throw std::out_of_range("FourierField::set: multi-index outside the truncation");
  coeff_[lattice_.index_of(m)] = v;
}

bool FourierField::is_zero() const {
  for (const auto& c : coeff_)
    if (c != cplx{0.0, 0.0}) return false;
  return true;
}

double FourierField::realness_defect() const {
  double amax = 0.0;
  for (const auto& c : coeff_) amax = std::max(amax, std::abs(c));
  if (amax == 0.0) return 0.0;
  double dmax = 0.0;
  for (std::size_t i = 0; i < coeff_.size(); ++i) {
    IVec3 m = lattice_.m_at(i);
    IVec3 mn{-m[0], -m[1], -m[2]};
    dmax = std::max(dmax, std::abs(coeff_[lattice_.index_of(mn)] - std::conj(coeff_[i])));
  }
  return dmax / amax;
}

void FourierField::check_realness() const {
  if (real_flag_ && realness_defect() > 1e-12)
    throw std::runtime_error("FourierField: conjugate symmetry violated on a real field");
}

FourierField& FourierField::operator*=(cplx c) {
  for (auto& v : coeff_) v *= c;
  return *this;
}

FourierField& FourierField::operator+=(const FourierField& o) {
  if (!(lattice_ == o.lattice_)) throw std::invalid_argument("field lattices differ");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += o.coeff_[i];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  if (!(lattice_ == o.lattice_)) throw std::invalid_argument("field lattices differ");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= o.coeff_[i];
  return *this;
}

FourierField operator*(cplx c, const FourierField& f) {
  FourierField g = f;
  g *= c;
  return g;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }

FourierField conj_field(const FourierField& f) {
  FourierField g(f.lattice(), f.real_flag());
  const auto& lat = f.lattice();
  for (std::size_t i = 0; i < f.size(); ++i) {
    IVec3 m = lat.m_at(i);
    IVec3 mn{-m[0], -m[1], -m[2]};
    g.coeffs()[lat.index_of(mn)] = std::conj(f.coeffs()[i]);
  }
  return g;
}

double sobolev_norm(const FourierField& f, double s) {
  const auto& lat = f.lattice();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double a = std::abs(f.coeffs()[i]);
    if (a == 0.0) continue;
    acc += std::pow(1.0 + norm2(lat.k_at(i), lat.dim()), s) * a * a;
  }
  return std::sqrt(acc / lat.spec.gamma_product());
}

double mass(const FourierField& f) {
  double acc = 0.0;
  for (const auto& c : f.coeffs()) acc += std::norm(c);
  return std::sqrt(acc / f.lattice().spec.volume());
}

FourierField apply_multiplier(const FourierField& f, Symbol sym, const SymbolTable& tab) {
  FourierField g(f.lattice(), f.real_flag());
  const std::size_t n = f.size();
  switch (sym) {
    case Symbol::LaplaceAlpha:
      for (std::size_t i = 0; i < n; ++i) g.coeffs()[i] = -tab.alpha_sym[i] * f.coeffs()[i];
      break;
    case Symbol::LaplaceBeta:
      for (std::size_t i = 0; i < n; ++i) g.coeffs()[i] = -tab.beta_sym[i] * f.coeffs()[i];
      break;
    case Symbol::Bracket:
      for (std::size_t i = 0; i < n; ++i) g.coeffs()[i] = tab.brack[i] * f.coeffs()[i];
      break;
    case Symbol::BracketInv:
      for (std::size_t i = 0; i < n; ++i) g.coeffs()[i] = f.coeffs()[i] / tab.brack[i];
      break;
    case Symbol::ModGrad:
      for (std::size_t i = 0; i < n; ++i) g.coeffs()[i] = tab.abs_k[i] * f.coeffs()[i];
      break;
    case Symbol::ModGradInv: {
      IVec3 zero{0, 0, 0};
      if (f.at(zero) != cplx{0.0, 0.0})
        throw std::domain_error("|grad|^{-1} refused: nonzero coefficient at k = 0");
      for (std::size_t i = 0; i < n; ++i)
        g.coeffs()[i] = tab.abs_k[i] > 0.0 ? f.coeffs()[i] / tab.abs_k[i] : cplx{0.0, 0.0};
      break;
    }
  }
  return g;
}

FourierField apply_multiplier(const FourierField& f, Symbol sym) {
  SymbolTable tab(f.lattice());
  return apply_multiplier(f, sym, tab);
}

namespace {

// Exact linear convolution conv[m] = sum_{m'} A[m'] B[m-m'] restricted to the
// common truncation, via FFT on a grid padded to >= 2*(2*kmax+1)-1 per axis.
FourierField convolve_truncated(const FourierField& a, const FourierField& b) {
  const auto& lat = a.lattice();
  const int d = lat.dim();
  int dims[3] = {1, 1, 1};
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) {
    dims[j] = fft::next_fast_size(2 * lat.axis_size(j) - 1);
    total *= static_cast<std::size_t>(dims[j]);
  }

  auto scatter = [&](const FourierField& f, fft::Buffer& buf) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.coeffs()[i] == cplx{0.0, 0.0}) continue;
      IVec3 m = lat.m_at(i);
      std::size_t idx = 0;
      for (int j = 0; j < d; ++j) {
        int mj = m[j] < 0 ? m[j] + dims[j] : m[j];
        idx = idx * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(mj);
      }
      buf.data()[idx] = f.coeffs()[i];
    }
  };

  fft::Buffer A(total), B(total);
  scatter(a, A);
  scatter(b, B);
  fft::transform(A.data(), dims, d, -1);
  fft::transform(B.data(), dims, d, -1);
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) A.data()[i] *= B.data()[i] * inv;
  fft::transform(A.data(), dims, d, +1);

  FourierField out(lat);
  for (std::size_t i = 0; i < out.size(); ++i) {
    IVec3 m = lat.m_at(i);
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j) {
      int mj = m[j] < 0 ? m[j] + dims[j] : m[j];
      idx = idx * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(mj);
    }
    out.coeffs()[i] = A.data()[idx];
  }
  return out;
}

// Direct sparse convolution, used when both fields have few nonzero modes.
FourierField convolve_sparse(const FourierField& a, const FourierField& b,
                             const std::vector<std::size_t>& ia,
                             const std::vector<std::size_t>& ib) {
  const auto& lat = a.lattice();
  FourierField out(lat);
  for (std::size_t i : ia) {
    IVec3 ma = lat.m_at(i);
    cplx va = a.coeffs()[i];
    for (std::size_t j : ib) {
      IVec3 mb = lat.m_at(j);
      IVec3 m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      if (!lat.contains(m)) continue;
      out.coeffs()[lat.index_of(m)] += va * b.coeffs()[j];
    }
  }
  return out;
}

}  // namespace

FourierField product(const FourierField& a, const FourierField& b) {
  if (!(a.lattice() == b.lattice()))
    throw std::invalid_argument("product: field lattices differ");
  std::vector<std::size_t> ia, ib;
  const std::size_t sparse_cap = 4096;
  for (std::size_t i = 0; i < a.size() && ia.size() <= sparse_cap; ++i)
    if (a.coeffs()[i] != cplx{0.0, 0.0}) ia.push_back(i);
  for (std::size_t i = 0; i < b.size() && ib.size() <= sparse_cap; ++i)
    if (b.coeffs()[i] != cplx{0.0, 0.0}) ib.push_back(i);

  FourierField conv;
  if (ia.size() <= sparse_cap && ib.size() <= sparse_cap &&
      ia.size() * ib.size() <= 16 * a.size()) {
    conv = convolve_sparse(a, b, ia, ib);
  } else {
    conv = convolve_truncated(a, b);
  }
  conv *= 1.0 / a.lattice().spec.volume();
  return conv;
}

double hamiltonian(const FourierField& u, const FourierField& n, const FourierField& nt) {
  const auto& lat = u.lattice();
  const auto& spec = lat.spec;
  for (int j = 0; j < spec.d; ++j)
    if (spec.alpha[j] != 1.0 || spec.beta[j] != 1.0)
      throw std::invalid_argument("hamiltonian requires alpha = beta = (1,...,1)");
  if (spec.c0 != 1.0 || spec.lambda != cplx{1.0, 0.0})
    throw std::invalid_argument("hamiltonian requires c0 = lambda = 1");
  double nt_max = 0.0;
  for (const auto& c : nt.coeffs()) nt_max = std::max(nt_max, std::abs(c));
  if (std::abs(nt.at(IVec3{0, 0, 0})) > 1e-10 * nt_max)
    throw std::invalid_argument("hamiltonian requires mean-zero velocity, nt_hat(0) = 0");
  if (n.realness_defect() > 1e-10 || nt.realness_defect() > 1e-10)
    throw std::invalid_argument("hamiltonian requires real n, nt");

  const double vol = spec.volume();
  double grad_u = 0.0, n_l2 = 0.0, nt_w = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double k2 = norm2(lat.k_at(i), spec.d);
    grad_u += k2 * std::norm(u.coeffs()[i]);
    n_l2 += std::norm(n.coeffs()[i]);
    if (k2 > 0.0) nt_w += std::norm(nt.coeffs()[i]) / k2;
  }
  grad_u /= vol;
  n_l2 /= vol;
  nt_w /= vol;

  // cubic term: int n |u|^2 = (n * (u conj(u)))_hat evaluated at 0
  FourierField uu = product(u, conj_field(u));
  cplx cubic{0.0, 0.0};
  for (std::size_t i = 0; i < lat.size(); ++i) {
    IVec3 m = lat.m_at(i);
    IVec3 mn{-m[0], -m[1], -m[2]};
    cubic += n.coeffs()[i] * uu.coeffs()[lat.index_of(mn)];
  }
  cubic /= vol;

  return grad_u + 0.5 * (n_l2 + nt_w) + cubic.real();
}

FourierField random_field(const DualLattice& lat, double s, double target_norm,
                          std::uint64_t seed, bool real_valued, double m0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (m0 <= 0.0) {
    m0 = 1.0;
    for (int j = 0; j < lat.dim(); ++j) m0 = std::max(m0, lat.kmax[j] / 3.0);
  }
  FourierField f(lat, real_valued);
  for (std::size_t i = 0; i < f.size(); ++i) {
    IVec3 m = lat.m_at(i);
    double m2 = 0.0;
    for (int j = 0; j < lat.dim(); ++j) m2 += double(m[j]) * m[j];
    double damp = std::exp(-m2 / (m0 * m0));
    f.coeffs()[i] = cplx{gauss(rng), gauss(rng)} * damp;
  }
  if (real_valued) {
    FourierField g = conj_field(f);
    f += g;
    f *= 0.5;
    f.set_real_flag(true);
  }
  double nrm = sobolev_norm(f, s);
  if (nrm > 0.0 && target_norm > 0.0) f *= target_norm / nrm;
  return f;
}

}  // namespace zaklab
