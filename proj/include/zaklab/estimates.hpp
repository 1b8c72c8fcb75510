#pragma once

// Numerical sharp-constant estimation for the dyadic trilinear block
// estimates and the bilinear Strichartz estimates, plus log-log scaling
// fits against the predicted exponents.
//
// Functions live on a discrete (tau, k) grid: tau = j * dtau with dtau tied
// to the thinnest modulation shell (dtau = L_min / 8), k on the truncated
// dual lattice.  The constraint zeta_0 = zeta_1 - zeta_2 is exact on that
// grid.  Alternating maximization with a nonnegative kernel is monotone and
// returns a certified lower bound on the true constant.

#include <cstdint>
#include <vector>

#include "zaklab/dyadic.hpp"
#include "zaklab/torus.hpp"

namespace zaklab {

enum class InteractionClass {
  HighModulation,   // L_max >~ N_max^2
  HighLow,          // N1 and N2 separated
  VeryLowWave,      // N0 <~ 1
  MiddleHighHigh,   // 1 << N0 <~ N1 ~ N2 <~ L_max << N1^2
  LowHighHighD3,    // d >= 3, 1 << N0 <~ N1 ~ N2, L_max << N1
  LowHighHighD2,    // d = 2, f not decomposed in N0, support {|k| >= 8}
};

const char* to_string(InteractionClass c);
InteractionClass interaction_class_from_string(const std::string& s);

struct DyadicBlockSpec {
  double N0 = 1, N1 = 1, N2 = 1;
  double L0 = 1, L1 = 1, L2 = 1;
  int sigma = +1;  // wave-weight sign of the f block
  InteractionClass cls = InteractionClass::HighModulation;

  double Nmax() const;
  double Nmin() const;
  double Nmed() const;
  double Lmax() const;
  double Lmin() const;
  double Lmed() const;

  // class hypotheses; ">~"/"<<" margins are 8, frequency separation 4
  void validate(int d) const;
};

// The proposition's right-hand side with constant 1; "a+" exponents are
// evaluated at a + eps.
double paper_bound(const DyadicBlockSpec& spec, int d, double eps = 0.01);

// One discrete nonnegative block function.
struct BlockFunction {
  struct Slot {
    IVec3 m;
    int j_lo = 0;     // first tau index of the hull
    int len = 0;      // hull length
    std::size_t off = 0;
  };
  std::vector<Slot> slots;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;  // admissible tau samples within the hull
  double dtau = 0.0;

  std::size_t dof() const { return values.size(); }
  double sq_sum() const;
};

// Pairing problem over three blocks with the constraint zeta0 = zeta1 - zeta2.
class TrilinearProblem {
 public:
  TrilinearProblem(const DyadicBlockSpec& spec, const DualLattice& lat, int d,
                   double dtau_override = 0.0);

  // free-tau f block over the frequency shell Nf (bilinear Strichartz norms);
  // type selects the g2 block: S/S (case i) or S/W-sigma (case ii).
  struct Bilinear {};
  TrilinearProblem(Bilinear, double Nf, double N1, double L1, double N2, double L2,
                   EquationType g2_type, const DualLattice& lat, int d,
                   double dtau_override = 0.0);

  BlockFunction& f() { return f_; }
  BlockFunction& g1() { return g1_; }
  BlockFunction& g2() { return g2_; }
  const BlockFunction& f() const { return f_; }
  double dtau() const { return dtau_; }
  std::size_t pair_count() const { return pairs_.size(); }

  // exact pairing with the current values (dtau^2/|gamma|^2 measure)
  double form() const;
  // norm of one block, (dtau/|gamma|)^{1/2} * euclidean
  double block_norm(const BlockFunction& b) const;

  struct MaxResult {
    double constant = 0.0;
    int iterations = 0;
    int restarts = 0;
    bool converged = false;
    std::vector<double> history;  // objective per accepted iteration
  };
  MaxResult alternating_max(double tol, int max_iter, int restarts, std::uint64_t seed);

 private:
  struct Pair {  // one admissible (k1, k2) pair, with the f slot it feeds
    std::uint32_t sf, s1, s2;
    std::int32_t base;  // j0_local = base + a - b
  };
  void build_pairs();
  void randomize(BlockFunction& b, std::uint64_t seed);
  double update_f();
  double update_g1();
  double update_g2();

  DualLattice lat_;
  int d_;
  double dtau_;
  double measure_;  // dtau / gamma_product
  BlockFunction f_, g1_, g2_;
  std::vector<Pair> pairs_;
};

struct TrilinearResult {
  DyadicBlockSpec spec;
  double constant = 0.0;
  double paper_bound = 0.0;
  double ratio = 0.0;
  int iterations = 0;
  int restarts = 0;
  bool converged = true;
};

TrilinearResult sharp_constant(const DyadicBlockSpec& spec, const DualLattice& lat, int d,
                               double tol, int max_iter, int restarts, std::uint64_t seed,
                               double dtau_override = 0.0);

struct BilinearResult {
  double constant = 0.0;
  double paper_bound = 0.0;  // Lmin^{1/2} (Lmax/N + 1)^{1/2} Nmin^{(d-1)/2}
  double ratio = 0.0;
  int iterations = 0;
};

// case i: || (u1 conj(u2))~ ||_{L2(P_{N0})} <= C ||u1|| ||u2||,
//         u_j in P_{Nj} x S_{Lj}
BilinearResult bilinear_strichartz_constant_i(double N0, double N1, double L1, double N2,
                                              double L2, const DualLattice& lat, int d,
                                              double tol, int max_iter, int restarts,
                                              std::uint64_t seed);
// case ii: || (conj(w) u)~ ||_{L2(P_{N2})} <= C ||w|| ||u||,
//          w in P_{N0} x W^{sigma}_{L0}, u in P_{N1} x S_{L1}
BilinearResult bilinear_strichartz_constant_ii(double N2, double N0, double L0, int sigma,
                                               double N1, double L1, const DualLattice& lat,
                                               int d, double tol, int max_iter, int restarts,
                                               std::uint64_t seed);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_stderr = 0.0;
  int points = 0;
};

// log-log least squares of y against x; throws on fewer than min_points or a
// degenerate abscissa.  Spec default is six sweep points; callers whose
// admissible dyadic range is narrower pass the actual count.
ScalingFit fit_scaling(const std::vector<double>& x, const std::vector<double>& y,
                       int min_points = 6);

}  // namespace zaklab
