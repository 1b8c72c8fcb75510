#pragma once

// The resonance function M, the explicit two-dimensional resonant pair
// construction, near-resonant pair enumeration on truncated lattices, and
// the (s,l) regularity-region classifier.

#include <optional>
#include <vector>

#include "zaklab/torus.hpp"

namespace zaklab {

// M = | -sigma |k| - |k-k'|^2 + |k'|^2 |
double resonance_M(const Vec3& k, const Vec3& kprime, int sigma, int d);
// Exact-index form: k = m_k / gamma componentwise, evaluated in extended
// precision so the N^2-sized cancellation does not pollute O(1) values.
double resonance_M(const IVec3& m_k, const IVec3& m_kprime, const Vec3& gamma, int sigma,
                   int d);

struct ResonanceRecord {
  IVec3 m_k;       // wave frequency, integer index
  IVec3 m_kprime;  // Schroedinger frequency, integer index
  int sigma;
  double M;
  double abs_k;
};

struct ResonantPair {
  int N = 0;
  IVec3 m_K{0, 0, 0};       // K_N      = (N/g1, (n-1)/g2)
  IVec3 m_Ktilde{0, 0, 0};  // Ktilde_N = ((1-N)/g1, n/g2)
  long long n = 0;
  double residual = 0.0;       // |K - Kt| + |K|^2 - |Kt|^2, lies in (-1/g2^2, 1/g2^2]
  bool near_boundary = false;  // within 1e-9 of an interval endpoint
};

// The unique n puts the residual in (-1/gamma2^2, 1/gamma2^2]; with
// A = gamma2^2 (sqrt((2N-1)^2/g1^2 + 1/g2^2) + (2N-1)/g1^2) this reads
// n in [A/2, A/2 + 1), i.e. n = ceil(A/2) with an exact integer kept as is.
ResonantPair construct_resonant_pair(int N, const Vec3& gamma, int d = 2);

// All pairs (k, k') in the truncated lattice with M <= threshold, k != 0,
// sorted by |k| then M.  Exact: M = |2 k.k' - |k|^2 - sigma |k}| is linear in
// k', so the admissible last-axis range is solved directly per prefix.
std::vector<ResonanceRecord> enumerate_near_resonant(const DualLattice& lat, int sigma,
                                                     double threshold);

// c(gamma) = gamma^{-1} dist(gamma, Z): the 1-d non-resonance constant.
double one_d_resonance_constant(double gamma);

enum class RegularityVerdict { WellPosed, NotC2, IllPosed2D, Gap };

struct RegularityPoint {
  double s, l;
  int d;
  RegularityVerdict verdict;
};

const char* to_string(RegularityVerdict v);

// Region classifier; closed/open boundary structure kept verbatim, with a
// 1e-12 slack so float noise cannot flip a verdict across a boundary.
RegularityPoint classify_regularity(double s, double l, int d);

}  // namespace zaklab
