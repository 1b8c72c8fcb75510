#pragma once

// Geometry of the anisotropic torus, its dual lattice, Fourier-coefficient
// containers and the basic spectral norms / multipliers.
//
// Conventions (fixed project-wide):
//   phi_hat(k) = integral over the torus of e^{-ik.x} phi(x) dx   (unnormalized)
//   ||phi||_{H^s}^2 = (1/(gamma_1...gamma_d)) sum_k <k>^{2s} |phi_hat(k)|^2
//   ||phi||_{L^2}^2 = (1/vol) sum_k |phi_hat(k)|^2,  vol = (2pi)^d gamma_1...gamma_d
// so that sobolev_norm(phi, 0) = (2pi)^{d/2} * mass(phi).

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zaklab {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using IVec3 = std::array<int, 3>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct TorusSpec {
  int d = 2;
  Vec3 gamma{1.0, 1.0, 1.0};
  Vec3 alpha{1.0, 1.0, 1.0};
  Vec3 beta{1.0, 1.0, 1.0};
  double c0 = 1.0;
  cplx lambda{1.0, 0.0};

  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  double gamma_product() const;
  double volume() const;  // (2pi)^d * gamma_1...gamma_d

  bool operator==(const TorusSpec&) const = default;
};

// Truncated dual lattice: k = (m_1/gamma_1, ..., m_d/gamma_d), |m_j| <= kmax[j].
struct DualLattice {
  TorusSpec spec;
  IVec3 kmax{0, 0, 0};

  DualLattice() = default;
  DualLattice(const TorusSpec& s, const IVec3& km);
  DualLattice(const TorusSpec& s, int km_all);

  int dim() const { return spec.d; }
  int axis_size(int j) const { return 2 * kmax[j] + 1; }
  std::size_t size() const;

  bool contains(const IVec3& m) const;
  std::size_t index_of(const IVec3& m) const;
  IVec3 m_at(std::size_t idx) const;
  Vec3 k_of(const IVec3& m) const;
  Vec3 k_at(std::size_t idx) const;

  bool operator==(const DualLattice&) const = default;
};

double norm2(const Vec3& k, int d);      // |k|^2
double norm(const Vec3& k, int d);       // |k|
double bracket(const Vec3& k, int d);    // <k> = (1+|k|^2)^{1/2}

// Per-lattice-point symbols, precomputed once.
struct SymbolTable {
  std::vector<double> abs_k2;     // |k|^2
  std::vector<double> alpha_sym;  // sum alpha_j k_j^2
  std::vector<double> beta_sym;   // sum beta_j k_j^2
  std::vector<double> brack;      // <k>
  std::vector<double> abs_k;      // |k|

  explicit SymbolTable(const DualLattice& lat);
};

enum class Symbol {
  LaplaceAlpha,   // -sum alpha_j k_j^2
  LaplaceBeta,    // -sum beta_j k_j^2
  Bracket,        // <k>
  BracketInv,     // <k>^{-1}
  ModGrad,        // |k|
  ModGradInv,     // |k|^{-1}, refused when the k=0 coefficient is nonzero
};

class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(const DualLattice& lat, bool real_flag = false);

  const DualLattice& lattice() const { return lattice_; }
  bool real_flag() const { return real_flag_; }
  void set_real_flag(bool v) { real_flag_ = v; }

  cplx at(const IVec3& m) const;                 // 0 outside the truncation
  void set(const IVec3& m, cplx v);
  const std::vector<cplx>& coeffs() const { return coeff_; }
  std::vector<cplx>& coeffs() { return coeff_; }

  std::size_t size() const { return coeff_.size(); }
  bool is_zero() const;

  // max relative conjugate-symmetry defect |f(-k) - conj(f(k))| / max|f|
  double realness_defect() const;
  // throws if the real flag is set but symmetry fails beyond 1e-12 relative
  void check_realness() const;

  FourierField& operator*=(cplx c);
  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);

 private:
  DualLattice lattice_;
  std::vector<cplx> coeff_;
  bool real_flag_ = false;
};

FourierField operator*(cplx c, const FourierField& f);
FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);

// u_hat(k) -> conj(u_hat(-k)); the coefficients of conj(u).
FourierField conj_field(const FourierField& f);

double sobolev_norm(const FourierField& f, double s);
double mass(const FourierField& f);

FourierField apply_multiplier(const FourierField& f, Symbol sym);
FourierField apply_multiplier(const FourierField& f, Symbol sym, const SymbolTable& tab);

// Coefficients of the pointwise product a*b, truncated back to the common
// lattice.  Exact linear convolution on a zero-padded grid (factor 2 per
// axis), including the 1/vol normalization of the stated convention.
FourierField product(const FourierField& a, const FourierField& b);

// H(u,n,nt) for alpha = beta = (1,..,1), c0 = lambda = 1 and mean-zero nt.
double hamiltonian(const FourierField& u, const FourierField& n, const FourierField& nt);

// Helpers used across modules and tests -----------------------------------

// Smooth random field: Gaussian coefficients damped by exp(-(|m|/m0)^2),
// conjugate-symmetrized when real_valued, scaled so sobolev_norm(.,s)=target.
FourierField random_field(const DualLattice& lat, double s, double target_norm,
                          std::uint64_t seed, bool real_valued, double m0 = 0.0);

}  // namespace zaklab
