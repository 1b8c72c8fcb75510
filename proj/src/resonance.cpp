#include "zaklab/resonance.hpp"

#include <algorithm>
#include <cmath>

namespace zaklab {

double resonance_M(const Vec3& k, const Vec3& kprime, int sigma, int d) {
  // |k - k'|^2 - |k'|^2 cancels to O(1) against |k| ~ N^2-sized terms; long
  // double keeps the identity with the pair residual tight
  long double nk2 = 0.0L, ndiff2 = 0.0L, nkp2 = 0.0L;
  for (int j = 0; j < d; ++j) {
    long double a = k[j], b = kprime[j];
    nk2 += a * a;
    ndiff2 += (a - b) * (a - b);
    nkp2 += b * b;
  }
  long double val = -(long double)sigma * sqrtl(nk2) - ndiff2 + nkp2;
  return (double)fabsl(val);
}

double resonance_M(const IVec3& m_k, const IVec3& m_kprime, const Vec3& gamma, int sigma,
                   int d) {
  long double nk2 = 0.0L, ndiff2 = 0.0L, nkp2 = 0.0L;
  for (int j = 0; j < d; ++j) {
    long double g = gamma[j];
    long double a = (long double)m_k[j] / g;
    long double b = (long double)m_kprime[j] / g;
    long double diff = (long double)(m_k[j] - m_kprime[j]) / g;
    nk2 += a * a;
    ndiff2 += diff * diff;
    nkp2 += b * b;
  }
  long double val = -(long double)sigma * sqrtl(nk2) - ndiff2 + nkp2;
  return (double)fabsl(val);
}

ResonantPair construct_resonant_pair(int N, const Vec3& gamma, int d) {
  if (N < 2) throw std::invalid_argument("construct_resonant_pair: N must be >= 2");
  if (d < 2) throw std::invalid_argument("construct_resonant_pair: needs d >= 2");
  const double g1 = gamma[0], g2 = gamma[1];
  const double g1sq = g1 * g1, g2sq = g2 * g2;

  const long double g1sql = (long double)g1 * g1, g2sql = (long double)g2 * g2;
  const long double rootl =
      sqrtl((long double)(2 * N - 1) * (2 * N - 1) / g1sql + 1.0L / g2sql);
  const long double A = g2sql * (rootl + (long double)(2 * N - 1) / g1sql);

  // unique integer in [A/2, A/2 + 1)
  long double half = A / 2.0L;
  long long n = (long long)ceill(half);
  if (fabsl(half - roundl(half)) < 1e-12L) n = (long long)roundl(half);

  ResonantPair out;
  out.N = N;
  out.n = n;
  out.m_K = IVec3{N, static_cast<int>(n - 1), 0};
  out.m_Ktilde = IVec3{1 - N, static_cast<int>(n), 0};
  out.residual =
      (double)(rootl + (long double)(2 * N - 1) / g1sql - (long double)(2 * n - 1) / g2sql);

  const double lo = -1.0 / g2sq, hi = 1.0 / g2sq;
  out.near_boundary =
      std::min(std::abs(out.residual - lo), std::abs(out.residual - hi)) < 1e-9;
  if (out.residual <= lo - 1e-9 || out.residual > hi + 1e-9)
    throw std::runtime_error("construct_resonant_pair: residual escaped its interval");
  return out;
}

std::vector<ResonanceRecord> enumerate_near_resonant(const DualLattice& lat, int sigma,
                                                     double threshold) {
  if (sigma != 1 && sigma != -1)
    throw std::invalid_argument("enumerate_near_resonant: sigma must be +-1");
  const int d = lat.dim();
  const auto& gamma = lat.spec.gamma;

  std::vector<ResonanceRecord> out;
  const std::size_t nk = lat.size();
  for (std::size_t i = 0; i < nk; ++i) {
    IVec3 mk = lat.m_at(i);
    Vec3 k = lat.k_of(mk);
    double k2 = norm2(k, d);
    if (k2 == 0.0) continue;  // k = 0 is the degenerate identity M = 0
    double ak = std::sqrt(k2);
    // M = |2 k.k' - k2 - sigma |k||: admissible iff 2 k.k' in [c - T, c + T]
    const double c = k2 + double(sigma) * ak;

    // iterate all axes but the last; solve the k'_last interval
    int last = d - 1;
    // choose the axis with the largest |k_j| as the solved axis when possible
    for (int j = 0; j < d; ++j)
      if (std::abs(k[j]) > std::abs(k[last])) last = j;

    IVec3 mp{0, 0, 0};
    auto emit = [&](const IVec3& mkp) {
      Vec3 kp = lat.k_of(mkp);
      double M = std::abs(2.0 * (k[0] * kp[0] + k[1] * kp[1] + k[2] * kp[2]) - c);
      if (M <= threshold) out.push_back({mk, mkp, sigma, M, ak});
    };

    auto solve_last = [&](IVec3 mkp) {
      double dot_rest = 0.0;
      for (int j = 0; j < d; ++j)
        if (j != last) dot_rest += k[j] * (mkp[j] / gamma[j]);
      double kl = k[last];
      if (kl == 0.0) {
        double M0 = std::abs(2.0 * dot_rest - c);
        if (M0 <= threshold)
          for (int ml = -lat.kmax[last]; ml <= lat.kmax[last]; ++ml) {
            mkp[last] = ml;
            out.push_back({mk, mkp, sigma, M0, ak});
          }
        return;
      }
      // 2 (dot_rest + kl * ml/gl) in [c - T, c + T]
      double gl = gamma[last];
      double lo = (c - threshold) / 2.0 - dot_rest;
      double hi = (c + threshold) / 2.0 - dot_rest;
      lo /= kl;
      hi /= kl;
      if (kl < 0.0) std::swap(lo, hi);
      int mlo = std::max(-lat.kmax[last], (int)std::ceil(lo * gl - 1e-12));
      int mhi = std::min(lat.kmax[last], (int)std::floor(hi * gl + 1e-12));
      for (int ml = mlo; ml <= mhi; ++ml) {
        mkp[last] = ml;
        emit(mkp);
      }
    };

    if (d == 1) {
      solve_last(mp);
    } else if (d == 2) {
      int other = 1 - last;
      for (int m0 = -lat.kmax[other]; m0 <= lat.kmax[other]; ++m0) {
        mp[other] = m0;
        solve_last(mp);
      }
    } else {
      int o1 = -1, o2 = -1;
      for (int j = 0; j < 3; ++j)
        if (j != last) (o1 < 0 ? o1 : o2) = j;
      for (int m1 = -lat.kmax[o1]; m1 <= lat.kmax[o1]; ++m1)
        for (int m2 = -lat.kmax[o2]; m2 <= lat.kmax[o2]; ++m2) {
          mp[o1] = m1;
          mp[o2] = m2;
          solve_last(mp);
        }
    }
  }

  std::sort(out.begin(), out.end(), [](const ResonanceRecord& a, const ResonanceRecord& b) {
    if (a.abs_k != b.abs_k) return a.abs_k < b.abs_k;
    if (a.M != b.M) return a.M < b.M;
    return a.m_k < b.m_k;
  });
  return out;
}

double one_d_resonance_constant(double gamma) {
  double dist = std::abs(gamma - std::round(gamma));
  return dist / gamma;
}

const char* to_string(RegularityVerdict v) {
  switch (v) {
    case RegularityVerdict::WellPosed: return "WellPosed";
    case RegularityVerdict::NotC2: return "NotC2";
    case RegularityVerdict::IllPosed2D: return "IllPosed2D";
    case RegularityVerdict::Gap: return "Gap";
  }
  return "?";
}

namespace {
constexpr double kSlack = 1e-12;
bool geq(double a, double b) { return a >= b - kSlack; }  // closed side
bool gt(double a, double b) { return a > b + kSlack; }    // open side
}  // namespace

RegularityPoint classify_regularity(double s, double l, int d) {
  if (d != 2 && d != 3)
    throw std::invalid_argument("classify_regularity: d must be 2 or 3");

  bool well_posed;
  if (d == 2) {
    well_posed = geq(s - l, 0.0) && geq(1.0, s - l) && geq(2.0 * s, l + 1.0) && geq(l, 0.0);
  } else {
    well_posed = geq(s - l, 0.0) && geq(1.0, s - l) && geq(2.0 * s, l + 1.5) &&
                 gt(l + 1.5, 2.0);
  }
  bool not_c2 = gt(l, std::min(2.0 * s - 1.0, s + 1.0)) ||
                !geq(l, std::max(0.0, s - 2.0));
  bool ill2d = d == 2 && !geq(s, 1.5) && geq(l, 0.0) && gt(l, 2.0 * s - 1.0);

  RegularityVerdict verdict;
  if (ill2d)
    verdict = RegularityVerdict::IllPosed2D;
  else if (not_c2)
    verdict = RegularityVerdict::NotC2;
  else if (well_posed)
    verdict = RegularityVerdict::WellPosed;
  else
    verdict = RegularityVerdict::Gap;

  // the theorems are consistent; if both predicates fire something is wrong
  if (well_posed && (not_c2 || ill2d))
    throw std::logic_error("classify_regularity: WellPosed and NotC2 overlap");
  return RegularityPoint{s, l, d, verdict};
}

}  // namespace zaklab
