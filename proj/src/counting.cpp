#include "zaklab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "zaklab/dyadic.hpp"

namespace zaklab {

Mat3 identity_matrix() {
  Mat3 R{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R[i][j] = (i == j) ? 1.0 : 0.0;
  return R;
}

Mat3 random_rotation(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Mat3 R = identity_matrix();
  if (d == 2) {
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    double a = ang(rng);
    R[0][0] = std::cos(a);
    R[0][1] = -std::sin(a);
    R[1][0] = std::sin(a);
    R[1][1] = std::cos(a);
    return R;
  }
  // Gram-Schmidt on a Gaussian 3x3 sample
  std::normal_distribution<double> gauss(0.0, 1.0);
  double v[3][3];
  for (auto& row : v)
    for (double& x : row) x = gauss(rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < i; ++j) {
      double dot = 0.0;
      for (int c = 0; c < 3; ++c) dot += v[i][c] * v[j][c];
      for (int c = 0; c < 3; ++c) v[i][c] -= dot * v[j][c];
    }
    double nrm = std::sqrt(v[i][0] * v[i][0] + v[i][1] * v[i][1] + v[i][2] * v[i][2]);
    for (int c = 0; c < 3; ++c) v[i][c] /= nrm;
  }
  double det = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) -
               v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
               v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
  if (det < 0.0)
    for (int c = 0; c < 3; ++c) v[2][c] = -v[2][c];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R[i][j] = v[j][i];  // columns are the frame
  return R;
}

void AnnulusSlabDomain::validate() const {
  if (d != 2 && d != 3) throw std::invalid_argument("domain: d must be 2 or 3");
  if (!(N >= 8.0)) throw std::invalid_argument("domain: N >> 1 violated (need N >= 8)");
  double invN = 1.0 / N;
  if (!(mu >= invN)) throw std::invalid_argument("domain: mu >= N^{-1} violated");
  if (!(nu >= invN)) throw std::invalid_argument("domain: nu >= N^{-1} violated");
  if (!(mu <= N / 8.0)) throw std::invalid_argument("domain: mu << N violated (need mu <= N/8)");
  if (!(nu <= N / 8.0)) throw std::invalid_argument("domain: nu << N violated (need nu <= N/8)");
  if (!(X >= 0.0)) throw std::invalid_argument("domain: X >= 0 violated");
  if (ball) {
    if (!(ball->radius >= 1.0)) throw std::invalid_argument("domain: ball radius >= 1 violated");
    if (!(ball->radius <= 8.0 * N))
      throw std::invalid_argument("domain: N0 <~ N violated (need N0 <= 8N)");
  }
  if (cone) {
    double thr = std::sqrt((mu + std::min(nu, 1.0)) / N);
    if (!(cone->theta > 8.0 * thr))
      throw std::invalid_argument(
          "domain: theta >> sqrt((mu+min(nu,1))/N) violated (need theta > 8 sqrt)");
    if (!(cone->theta <= kTwoPi / 8.0))
      throw std::invalid_argument("domain: theta <= pi/4 violated");
  }
}

namespace {

Vec3 apply_transposed(const Mat3& R, const Vec3& k, int d) {
  Vec3 out{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += R[j][i] * k[j];
    out[i] = s;
  }
  return out;
}

bool in_domain(const AnnulusSlabDomain& dom, const Vec3& k) {
  Vec3 xi = apply_transposed(dom.rotation, k, dom.d);
  double r2 = norm2(xi, dom.d);
  if (r2 < dom.N * dom.N || r2 > (dom.N + dom.mu) * (dom.N + dom.mu)) return false;
  if (xi[0] < dom.X || xi[0] > dom.X + dom.nu) return false;
  if (dom.ball) {
    double b2 = 0.0;
    for (int j = 0; j < dom.d; ++j) {
      double t = xi[j] - dom.ball->center[j];
      b2 += t * t;
    }
    if (b2 > dom.ball->radius * dom.ball->radius) return false;
  }
  if (dom.cone) {
    double ang = std::acos(std::clamp(xi[0] / std::sqrt(r2), -1.0, 1.0));
    if (ang < dom.cone->theta / 2.0 || ang > 2.0 * dom.cone->theta) return false;
  }
  return true;
}

}  // namespace

CountResult count_lattice_in_domain(const AnnulusSlabDomain& dom, const Vec3& gamma) {
  dom.validate();
  const int d = dom.d;
  const double rad = dom.N + dom.mu;

  // bounding box in k coordinates: |k| <= N + mu intersected with R(ball)
  Vec3 lo{-rad, -rad, -rad}, hi{rad, rad, rad};
  if (dom.ball) {
    Vec3 c{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += dom.rotation[i][j] * dom.ball->center[j];
      c[i] = s;
    }
    for (int j = 0; j < d; ++j) {
      lo[j] = std::max(lo[j], c[j] - dom.ball->radius);
      hi[j] = std::min(hi[j], c[j] + dom.ball->radius);
    }
  }

  // slab X <= (R^T k)_1 <= X + nu becomes a thin slab along r1 = R e_1
  Vec3 r1{0.0, 0.0, 0.0};
  for (int j = 0; j < d; ++j) r1[j] = dom.rotation[j][0];
  int solved = 0;
  for (int j = 1; j < d; ++j)
    if (std::abs(r1[j]) > std::abs(r1[solved])) solved = j;

  long long count = 0;
  auto scan_solved_axis = [&](const IVec3& m_partial, double rho2, double dot_rest) {
    const double g = gamma[solved];
    // annulus: k_s^2 in [N^2 - rho2, (N+mu)^2 - rho2]
    double top = rad * rad - rho2;
    if (top < 0.0) return;
    double bot = dom.N * dom.N - rho2;
    double s_hi = std::sqrt(top);
    double s_lo = bot > 0.0 ? std::sqrt(bot) : 0.0;
    // slab: dot_rest + r1_s k_s in [X, X+nu]
    double a = (dom.X - dot_rest) / r1[solved];
    double b = (dom.X + dom.nu - dot_rest) / r1[solved];
    if (a > b) std::swap(a, b);
    // intersect the slab interval with the two annulus bands (+ box),
    // inflate by one lattice step against floating slop
    auto scan = [&](double u, double v) {
      u = std::max({u, a, lo[solved]});
      v = std::min({v, b, hi[solved]});
      if (u > v) return;
      int m_lo = (int)std::floor(u * g) - 1;
      int m_hi = (int)std::ceil(v * g) + 1;
      IVec3 m = m_partial;
      for (int mm = m_lo; mm <= m_hi; ++mm) {
        m[solved] = mm;
        Vec3 k{0.0, 0.0, 0.0};
        for (int j = 0; j < d; ++j) k[j] = m[j] / gamma[j];
        if (in_domain(dom, k)) ++count;
      }
    };
    if (bot > 0.0) {
      scan(-s_hi, -s_lo);
      scan(s_lo, s_hi);
    } else {
      scan(-s_hi, s_hi);
    }
  };

  IVec3 m{0, 0, 0};
  std::array<int, 2> other{};
  int n_other = 0;
  for (int j = 0; j < d; ++j)
    if (j != solved) other[n_other++] = j;

  if (n_other == 1) {
    int o = other[0];
    int m_lo = (int)std::floor(lo[o] * gamma[o]) - 1;
    int m_hi = (int)std::ceil(hi[o] * gamma[o]) + 1;
    for (int m0 = m_lo; m0 <= m_hi; ++m0) {
      m[o] = m0;
      double k0 = m0 / gamma[o];
      scan_solved_axis(m, k0 * k0, r1[o] * k0);
    }
  } else {
    int o1 = other[0], o2 = other[1];
    int lo1 = (int)std::floor(lo[o1] * gamma[o1]) - 1, hi1 = (int)std::ceil(hi[o1] * gamma[o1]) + 1;
    int lo2 = (int)std::floor(lo[o2] * gamma[o2]) - 1, hi2 = (int)std::ceil(hi[o2] * gamma[o2]) + 1;
    for (int m1 = lo1; m1 <= hi1; ++m1) {
      m[o1] = m1;
      double k1 = m1 / gamma[o1];
      for (int m2 = lo2; m2 <= hi2; ++m2) {
        m[o2] = m2;
        double k2 = m2 / gamma[o2];
        scan_solved_axis(m, k1 * k1 + k2 * k2, r1[o1] * k1 + r1[o2] * k2);
      }
    }
  }

  CountResult res;
  res.exact = count;
  const double minnu1 = std::min(dom.nu, 1.0);
  const double maxnu1 = std::max(dom.nu, 1.0);
  if (dom.cone) {
    double N0 = dom.ball ? dom.ball->radius : rad;
    double core = std::min(dom.N * dom.cone->theta, N0);
    res.bound_value = maxnu1 * std::pow(core, d - 2) *
                      ((dom.mu + minnu1) / dom.cone->theta + 1.0);
  } else {
    double N0 = dom.ball ? dom.ball->radius : rad;
    res.bound_value = maxnu1 * std::pow(N0, d - 2) * std::sqrt(dom.N * (dom.mu + minnu1));
  }
  res.ratio = res.exact / res.bound_value;
  return res;
}

namespace {

// measure of { x in W(L) } with W(1) = [-2,2], W(L) = +-[L/2, 2L]
struct IntervalSet {
  double a1, b1, a2, b2;
  bool two;
};

IntervalSet shell_window(double L, double shift) {
  // intervals of tau with |tau - shift| in the L-shell... caller passes shift
  if (L <= 1.0) return {shift - 2.0, shift + 2.0, 0.0, 0.0, false};
  return {shift - 2.0 * L, shift - L / 2.0, shift + L / 2.0, shift + 2.0 * L, true};
}

double overlap(double a, double b, double c, double d) {
  double lo = std::max(a, c), hi = std::min(b, d);
  return hi > lo ? hi - lo : 0.0;
}

double set_overlap(const IntervalSet& A, const IntervalSet& B) {
  double s = overlap(A.a1, A.b1, B.a1, B.b1);
  if (A.two) s += overlap(A.a2, A.b2, B.a1, B.b1);
  if (B.two) s += overlap(A.a1, A.b1, B.a2, B.b2);
  if (A.two && B.two) s += overlap(A.a2, A.b2, B.a2, B.b2);
  return s;
}

}  // namespace

double bilinear_block_set_size(double tau0, const Vec3& k0, double N1, double N2,
                               double L1, double L2, const DualLattice& lat) {
  const int d = lat.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    Vec3 k1 = lat.k_at(i);
    if (!shell_contains(N1, norm(k1, d))) continue;
    Vec3 q{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j) q[j] = k1[j] - k0[j];
    if (!shell_contains(N2, norm(q, d))) continue;
    IntervalSet A = shell_window(L1, -norm2(k1, d));
    IntervalSet B = shell_window(L2, tau0 - norm2(q, d));
    total += set_overlap(A, B);
  }
  return total / lat.spec.gamma_product();
}

double bilinear_block_bound(const Vec3& k0, double N1, double N2, double L1, double L2,
                            int d) {
  double ak0 = norm(k0, d);
  double N0 = 1.0;
  while (!shell_contains(N0, ak0)) N0 *= 2.0;
  double Lmin = std::min(L1, L2), Lmax = std::max(L1, L2);
  double Nmin = std::min({N0, N1, N2});
  return Lmin * (Lmax / N0 + 1.0) * std::pow(Nmin, d - 1);
}

// ---- angular tiling -------------------------------------------------------

// Margins of the admissible index set J.  The lower one is the paper's
// m/4 - 2; the upper one keeps |k1 - k2| <= 2N so the radial bands can cover
// it: 2(N+10) sin(pi(d+2)/m) <= 2N needs m/2 - d >= 2 + sqrt(20/Lmax)/pi,
// and 4 suffices for every Lmax >= 1 when N ~ m^2 Lmax.
int AngularTiling::d_lo() const { return std::max(1, (m + 3) / 4 - 2); }
int AngularTiling::d_hi() const { return m / 2 - 4; }
bool AngularTiling::index_set_empty() const { return m < 8 || d_lo() > d_hi(); }

AngularTiling AngularTiling::make(double N, double N1, double Lmax) {
  if (!is_dyadic(N1) || !is_dyadic(Lmax))
    throw std::invalid_argument("AngularTiling: N1 and Lmax must be dyadic");
  double md = std::sqrt(N1 / Lmax);
  int m = (int)std::llround(md);
  if (std::abs(md - m) > 1e-9)
    throw std::invalid_argument("AngularTiling: sqrt(N1/Lmax) must be an integer");
  AngularTiling t;
  t.N = N;
  t.N1 = N1;
  t.Lmax = Lmax;
  t.m = m;
  return t;
}

int circular_distance(int a, int b, int m) {
  int diff = std::abs(a - b) % m;
  return std::min(diff, m - diff);
}

namespace {

struct P2 {
  double x, y;
};

P2 representative(const AngularTiling& t, int j) {
  double ang = kTwoPi * j / t.m;
  return {t.N * std::cos(ang), t.N * std::sin(ang)};
}

double tile_angle(const AngularTiling& t, int j) { return kTwoPi * j / t.m; }

// D~ radial band: 2N sin(pi (jr +- 1)/m)
double radial_edge(const AngularTiling& t, int jr) {
  double x = (kTwoPi / 2.0) * jr / t.m;
  return 2.0 * t.N * std::sin(std::clamp(x, 0.0, kTwoPi / 4.0));
}

bool in_target_tile(const AngularTiling& t, const P2& q, int jr, int jtheta) {
  double r = std::hypot(q.x, q.y);
  if (r < radial_edge(t, jr - 1) || r > radial_edge(t, jr + 1)) return false;
  double ang = std::atan2(q.y, q.x);
  if (ang < 0.0) ang += kTwoPi;
  double center = tile_angle(t, jtheta);
  double diff = std::remainder(ang - center, kTwoPi);
  return std::abs(diff) <= kTwoPi / t.m;
}

}  // namespace

KappaImage kappa(const AngularTiling& t, int j1, int j2) {
  const int m = t.m;
  int jr = circular_distance(j1, j2, m);
  int diff = ((j1 - j2) % m + m) % m;
  // base choice: smallest admissible integer for (diff, 0)
  P2 a = representative(t, diff), b = representative(t, 0);
  P2 q{a.x - b.x, a.y - b.y};
  int base = -1;
  int jr0 = circular_distance(diff, 0, m);
  for (int jt = 0; jt < m; ++jt) {
    if (in_target_tile(t, q, jr0, jt)) {
      base = jt;
      break;
    }
  }
  if (base < 0) throw std::logic_error("kappa: no admissible base angle index");
  int jtheta = (j2 + base) % m;
  return {jr, jtheta};
}

OrthogonalityReport verify_orthogonality(const AngularTiling& t, long long samples,
                                         std::uint64_t seed) {
  OrthogonalityReport rep;
  if (t.index_set_empty()) {
    rep.vacuous = true;
    rep.preimage_histogram.assign(1, 0);
    return rep;
  }
  const int m = t.m;
  const int dlo = t.d_lo(), dhi = t.d_hi();
  if (dlo > dhi) {
    rep.vacuous = true;
    rep.preimage_histogram.assign(1, 0);
    return rep;
  }

  // J = {(j1,j2): dlo <= d[j1,j2] <= dhi}; kappa preimage counts over J~
  std::map<std::pair<int, int>, long long> preimages;
  std::vector<std::pair<int, int>> J;
  for (int j1 = 0; j1 < m; ++j1)
    for (int j2 = 0; j2 < m; ++j2) {
      int dd = circular_distance(j1, j2, m);
      if (dd < dlo || dd > dhi) continue;
      J.emplace_back(j1, j2);
      KappaImage im = kappa(t, j1, j2);
      ++preimages[{im.jr, im.jtheta}];
    }
  long long maxpre = 0;
  for (auto& kv : preimages) maxpre = std::max(maxpre, kv.second);
  rep.max_preimage = (int)maxpre;
  rep.preimage_histogram.assign((std::size_t)maxpre + 1, 0);
  long long covered = 0;
  for (auto& kv : preimages) {
    ++rep.preimage_histogram[(std::size_t)kv.second];
    covered += 1;
  }
  // images with zero preimages
  long long total_targets = (long long)(m / 2 - 1) * m;
  rep.preimage_histogram[0] = total_targets - covered;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, J.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int C = 20;

  for (long long it = 0; it < samples; ++it) {
    auto [j1, j2] = J[pick(rng)];
    auto sample_tile = [&](int j) {
      double r = t.N + 10.0 * unif(rng);
      double ang = tile_angle(t, j) + (2.0 * unif(rng) - 1.0) * kTwoPi / m;
      return P2{r * std::cos(ang), r * std::sin(ang)};
    };
    P2 k1 = sample_tile(j1), k2 = sample_tile(j2);
    P2 q{k1.x - k2.x, k1.y - k2.y};
    KappaImage im = kappa(t, j1, j2);

    bool member = false;
    for (int jr = std::max(1, im.jr - 10); jr <= std::min(m / 2 - 1, im.jr + 10) && !member;
         ++jr)
      for (int w = -C; w <= C && !member; ++w) {
        int jt = ((im.jtheta + w) % m + m) % m;
        if (in_target_tile(t, q, jr, jt)) member = true;
      }
    ++rep.samples;
    if (!member) ++rep.violations;

    // observed slack, for the report
    double r = std::hypot(q.x, q.y);
    double x = std::clamp(r / (2.0 * t.N), 0.0, 1.0);
    double jr_star = (t.m / (kTwoPi / 2.0)) * std::asin(x);
    rep.max_radial_slack = std::max(rep.max_radial_slack, std::abs(jr_star - im.jr));
    double ang = std::atan2(q.y, q.x);
    if (ang < 0.0) ang += kTwoPi;
    double jt_star = ang * m / kTwoPi;
    double dth = std::abs(std::remainder(jt_star - im.jtheta, (double)m));
    rep.max_angular_slack = std::max(rep.max_angular_slack, dth);
  }
  return rep;
}

}  // namespace zaklab
