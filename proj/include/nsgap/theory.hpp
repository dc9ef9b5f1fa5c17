#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nsgap {

enum class IsoRegime { Convex, LSI, Poincare };

/// Isoperimetric profile pair (F, Upsilon) entering the three-set inequality
/// pi(S3) >= Upsilon(d(S1,S2)) F(min{pi(S1), pi(S2)}):
///   Convex(m):    F(t) = t sqrt(2 m log(1/t) / (pi log 2)),  Upsilon = id
///   LSI(C):       F(t) = (t/2) log(2/t),   Upsilon(d) = d^2/(C + (1+1/e)d^2)
///   Poincare(C):  F(t) = t,                Upsilon(d) = d^2/(16(C + 4d^2))
/// F is increasing on (0, 1/2] and concave in every regime.
struct IsoProfile {
  IsoRegime regime = IsoRegime::Convex;
  double constant = 1.0;  // m, C_LSI or C_PI

  double F(double t) const;
  double upsilon(double delta) const;

  static IsoProfile convex(double m);
  static IsoProfile lsi(double c_lsi);
  static IsoProfile poincare(double c_pi);
  const char* regime_name() const;
};

/// Output of the general isoperimetric gap bound: the grid-evaluated
/// sup-inf form and, since F is concave, the closed simplified form
/// (eps^2/8) min{1/2, Upsilon(delta) F(1/4)}^2.
struct GapLowerBound {
  double grid_value = 0.0;
  double simplified = 0.0;
};

/// Evaluates (eps^2/8) [sup_theta min{1-theta, Upsilon(delta)
/// inf_t F(theta t)/(2t)}]^2 with theta on a uniform grid over [0,1]
/// (containing 1/2) and t on a log grid over (1e-8, 1/2].
GapLowerBound gap_lower_bound_general(double epsilon, double delta,
                                      const IsoProfile& profile,
                                      int theta_grid_size = 201);

/// Step-size ceiling for RWM: (1/sqrt(d)) min{1/(2 sqrt(M)), 1/(16 L)}.
/// L = 0 drops the second term, M = 0 the first; both zero returns +inf.
double rwm_max_step(int d, double M, double L);

/// Step-size ceiling for MALA: (1/200) min{m/(d M^2), 1/(d L^2)} (the first
/// term is 1/(d kappa M) with kappa = M/m). L = 0 drops the second term.
/// Requires M >= m > 0.
double mala_max_step(int d, double M, double m, double L);

/// A theoretical lower bound on the spectral gap together with the
/// close-coupling parameters and constants that produced it. Only emitted
/// for admissible step sizes (h <= h_max).
struct BoundReport {
  double epsilon = 0.0;
  double delta = 0.0;
  double gap_lower = 0.0;
  double h_max = 0.0;
  std::vector<std::pair<std::string, double>> constants_used;
};

/// RWM spectral gap lower bound at step size h:
///   Convex(m):    C m h^2                 with C  = 1/(2^13 pi)
///   LSI(C_LSI):   C1 h^4/(C_LSI^2 + h^4)  with C1 = 2^-20
///   Poincare(C):  C2 h^4/(C_PI^2 + h^4)   with C2 = (log 8)^2 2^-23
/// Close coupling holds with eps = 1/4, delta = h/4. Throws
/// ConstraintViolationError (naming the binding term) when h exceeds the
/// ceiling.
BoundReport rwm_gap_bound(const IsoProfile& profile, double h, int d,
                          double M, double L);

/// MALA spectral gap lower bound C'' m h with C'' = 1/(40000 pi); close
/// coupling holds with eps = 1/5, delta = sqrt(2h)/10. Requires the target to
/// be m-strongly log-concave with concave smooth part.
BoundReport mala_gap_bound(double m, double h, int d, double M, double L,
                           bool f_concave);

/// Uniform rejection-rate bound for RWM: min{1, 1/2 + L h sqrt(d) +
/// M h^2 d / 4}. At the rwm_max_step ceiling its value is at most 5/8.
double rwm_rejection_bound(int d, double M, double L, double h);

/// Certified uniform acceptance floor for MALA under the mala_max_step
/// constraint and strong log-concavity: 13/20.
constexpr double mala_acceptance_floor() { return 13.0 / 20.0; }

/// Cheeger interval for the spectral gap given conductance phi:
/// [kappa/2 phi^2, phi]. The universal constant kappa >= 1 is caller
/// supplied; nothing downstream depends on its value.
std::pair<double, double> cheeger_interval(double phi,
                                           double kappa_universal = 1.0);

}  // namespace nsgap
