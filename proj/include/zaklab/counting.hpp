#pragma once

// Brute-force verification of the lattice-point counting lemma
// (annulus-slab-ball-cone intersections under rotation), the bilinear block
// set sizes |E(zeta_0)|, and the angular orthogonality tiling with its
// two-to-one index map kappa.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "zaklab/torus.hpp"

namespace zaklab {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 identity_matrix();
// Haar-ish random rotation (QR of a Gaussian sample), determinant +1.
Mat3 random_rotation(int d, std::uint64_t seed);

struct BallSpec {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.0;
};

struct ConeSpec {
  double theta = 0.0;  // aperture about xi_0 = e_1: theta/2 <= angle <= 2 theta
};

// D = { xi : N <= |xi| <= N + mu, X <= xi_1 <= X + nu }, counted after the
// rotation R; "<<" hypotheses are operationalized as factors of 8.
struct AnnulusSlabDomain {
  int d = 2;
  double N = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double X = 0.0;
  std::optional<BallSpec> ball;
  std::optional<ConeSpec> cone;
  Mat3 rotation = identity_matrix();

  // Throws naming the violated inequality.
  void validate() const;
};

struct CountResult {
  long long exact = 0;
  double bound_value = 0.0;  // lemma's right-hand side with constant 1
  double ratio = 0.0;
};

CountResult count_lattice_in_domain(const AnnulusSlabDomain& dom, const Vec3& gamma);

// size of E(zeta0) = {(tau1,k1) in P_{N1} x S_{L1} :
//                     (tau1-tau0, k1-k0) in P_{N2} x S_{L2}},
// as (1/|gamma|) * sum_{k1} tau-measure of the exact interval intersection.
double bilinear_block_set_size(double tau0, const Vec3& k0, double N1, double N2,
                               double L1, double L2, const DualLattice& lat);

// |E| <= L_min (L_max / N0 + 1) Nmin^{d-1}, the proof's bound with constant 1.
double bilinear_block_bound(const Vec3& k0, double N1, double N2, double L1, double L2,
                            int d);

// ---- angular orthogonality tiling ----------------------------------------

struct AngularTiling {
  double N = 0.0;       // annulus radius, N <= r <= N + 10
  double N1 = 0.0;      // frequency scale (sets the tile count with Lmax)
  double Lmax = 0.0;
  int m = 0;            // number of angular tiles, m = sqrt(N1 / Lmax)

  // J-margins: paper takes (m/4 - 2, m/2 - 100); at desk scale the upper
  // margin is 2 (the covering slack 10 absorbs it since N >> tile width).
  int d_lo() const;
  int d_hi() const;
  bool index_set_empty() const;  // declared empty when m < 8

  static AngularTiling make(double N, double N1, double Lmax);
};

int circular_distance(int a, int b, int m);  // d[a,b] = min(|a-b|, m-|a-b|)

struct KappaImage {
  int jr, jtheta;
};

// kappa = (kappa_r, kappa_theta) built from representative points k_*(j);
// the base angle choice is the smallest admissible integer.
KappaImage kappa(const AngularTiling& t, int j1, int j2);

struct OrthogonalityReport {
  long long samples = 0;
  long long violations = 0;
  bool vacuous = false;           // index set empty
  int max_preimage = 0;           // max #kappa-preimages over the image grid
  std::vector<long long> preimage_histogram;  // counts of 0,1,2,... preimages
  double max_radial_slack = 0.0;  // observed max |jr* - kappa_r|
  double max_angular_slack = 0.0; // observed max d[jtheta*, kappa_theta]
};

// (a) builds kappa; (b) samples random (j1,j2) in J and random points in the
// tiles, asserting k1 - k2 lands in the kappa-neighborhood (|jr - kappa_r|
// <= 10, circular distance <= C = 20); (c) checks every (jr,jtheta) has at
// most two preimages.
OrthogonalityReport verify_orthogonality(const AngularTiling& t, long long samples,
                                         std::uint64_t seed);

}  // namespace zaklab
