#include "nsgap/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nsgap/errors.hpp"

namespace nsgap {

namespace {
constexpr double kPi = std::numbers::pi;
}

IsoProfile IsoProfile::convex(double m) {
  if (!(m > 0.0)) throw InvalidInputError("IsoProfile::convex: m must be > 0");
  return IsoProfile{IsoRegime::Convex, m};
}

IsoProfile IsoProfile::lsi(double c_lsi) {
  if (!(c_lsi > 0.0)) {
    throw InvalidInputError("IsoProfile::lsi: C_LSI must be > 0");
  }
  return IsoProfile{IsoRegime::LSI, c_lsi};
}

IsoProfile IsoProfile::poincare(double c_pi) {
  if (!(c_pi > 0.0)) {
    throw InvalidInputError("IsoProfile::poincare: C_PI must be > 0");
  }
  return IsoProfile{IsoRegime::Poincare, c_pi};
}

const char* IsoProfile::regime_name() const {
  switch (regime) {
    case IsoRegime::Convex:
      return "convex";
    case IsoRegime::LSI:
      return "lsi";
    case IsoRegime::Poincare:
      return "poincare";
  }
  return "unknown";
}

double IsoProfile::F(double t) const {
  if (!(t > 0.0) || t > 0.5) {
    throw InvalidInputError("IsoProfile::F: t must be in (0, 1/2]");
  }
  switch (regime) {
    case IsoRegime::Convex:
      return t * std::sqrt(2.0 * constant * std::log(1.0 / t) /
                           (kPi * std::numbers::ln2));
    case IsoRegime::LSI:
      return 0.5 * t * std::log(2.0 / t);
    case IsoRegime::Poincare:
      return t;
  }
  return 0.0;
}

double IsoProfile::upsilon(double delta) const {
  if (!(delta > 0.0)) {
    throw InvalidInputError("IsoProfile::upsilon: delta must be > 0");
  }
  const double d2 = delta * delta;
  switch (regime) {
    case IsoRegime::Convex:
      return delta;  // Upsilon = identity
    case IsoRegime::LSI:
      return d2 / (constant + (1.0 + 1.0 / std::numbers::e) * d2);
    case IsoRegime::Poincare:
      return d2 / (16.0 * (constant + 4.0 * d2));
  }
  return 0.0;
}

GapLowerBound gap_lower_bound_general(double epsilon, double delta,
                                      const IsoProfile& profile,
                                      int theta_grid_size) {
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw InvalidInputError("gap_lower_bound_general: epsilon in (0, 1]");
  }
  if (!(delta > 0.0)) {
    throw InvalidInputError("gap_lower_bound_general: delta must be > 0");
  }
  if (theta_grid_size < 3) theta_grid_size = 3;
  // An odd grid contains theta = 1/2, where the concave-F supremum sits.
  if (theta_grid_size % 2 == 0) ++theta_grid_size;

  const double ups = profile.upsilon(delta);

  constexpr int kTGridSize = 400;
  const double t_lo = 1e-8;
  const double t_hi = 0.5;
  const double log_ratio = std::log(t_hi / t_lo);

  double best = 0.0;
  for (int i = 0; i < theta_grid_size; ++i) {
    const double theta =
        static_cast<double>(i) / static_cast<double>(theta_grid_size - 1);
    if (theta <= 0.0) continue;  // F(0 t) undefined; theta=0 contributes 0
    double inf_term = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= kTGridSize; ++j) {
      const double t =
          t_lo * std::exp(log_ratio * static_cast<double>(j) /
                          static_cast<double>(kTGridSize));
      inf_term = std::min(inf_term, profile.F(theta * t) / (2.0 * t));
    }
    best = std::max(best, std::min(1.0 - theta, ups * inf_term));
  }

  GapLowerBound out;
  out.grid_value = epsilon * epsilon / 8.0 * best * best;
  const double simp = std::min(0.5, ups * profile.F(0.25));
  out.simplified = epsilon * epsilon / 8.0 * simp * simp;
  return out;
}

double rwm_max_step(int d, double M, double L) {
  if (d < 1) throw InvalidInputError("rwm_max_step: d must be >= 1");
  if (M < 0.0 || L < 0.0) {
    throw InvalidInputError("rwm_max_step: M and L must be >= 0");
  }
  if (M == 0.0 && L == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  double bound = std::numeric_limits<double>::infinity();
  if (M > 0.0) bound = std::min(bound, 1.0 / (2.0 * std::sqrt(M)));
  if (L > 0.0) bound = std::min(bound, 1.0 / (16.0 * L));
  return bound / std::sqrt(static_cast<double>(d));
}

double mala_max_step(int d, double M, double m, double L) {
  if (d < 1) throw InvalidInputError("mala_max_step: d must be >= 1");
  if (!(m > 0.0)) {
    throw InvalidInputError(
        "mala_max_step: requires strong log-concavity (m > 0)");
  }
  if (M < m) throw InvalidInputError("mala_max_step: requires M >= m");
  if (L < 0.0) throw InvalidInputError("mala_max_step: L must be >= 0");
  const double dd = static_cast<double>(d);
  double bound = m / (dd * M * M);  // = 1/(d kappa M)
  if (L > 0.0) bound = std::min(bound, 1.0 / (dd * L * L));
  return bound / 200.0;
}

namespace {

void check_rwm_admissible(double h, int d, double M, double L) {
  const double h_max = rwm_max_step(d, M, L);
  if (h > h_max) {
    const double m_term = M > 0.0 ? 1.0 / (2.0 * std::sqrt(M))
                                  : std::numeric_limits<double>::infinity();
    const double l_term = L > 0.0 ? 1.0 / (16.0 * L)
                                  : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "rwm_gap_bound: h = " << h << " exceeds ceiling " << h_max
        << " (binding term: "
        << (m_term <= l_term ? "smoothness 1/(2 sqrt(M) sqrt(d))"
                             : "lipschitz 1/(16 L sqrt(d))")
        << ")";
    throw ConstraintViolationError(msg.str());
  }
}

}  // namespace

BoundReport rwm_gap_bound(const IsoProfile& profile, double h, int d,
                          double M, double L) {
  if (!(h > 0.0)) throw InvalidInputError("rwm_gap_bound: h must be > 0");
  check_rwm_admissible(h, d, M, L);

  BoundReport report;
  report.epsilon = 0.25;
  report.delta = h / 4.0;
  report.h_max = rwm_max_step(d, M, L);

  switch (profile.regime) {
    case IsoRegime::Convex: {
      const double m = profile.constant;
      if (m > M) {
        throw InvalidInputError("rwm_gap_bound: m must satisfy m <= M");
      }
      const double c = 1.0 / (8192.0 * kPi);  // 1/(2^13 pi)
      report.gap_lower = c * m * h * h;
      report.constants_used = {{"C", c}, {"m", m}};
      break;
    }
    case IsoRegime::LSI: {
      const double c1 = std::exp2(-20.0);
      const double h4 = h * h * h * h;
      report.gap_lower =
          c1 * h4 / (profile.constant * profile.constant + h4);
      report.constants_used = {{"C1", c1}, {"C_LSI", profile.constant}};
      break;
    }
    case IsoRegime::Poincare: {
      const double log8 = std::log(8.0);
      const double c2 = log8 * log8 * std::exp2(-23.0);
      const double h4 = h * h * h * h;
      report.gap_lower =
          c2 * h4 / (profile.constant * profile.constant + h4);
      report.constants_used = {{"C2", c2}, {"C_PI", profile.constant}};
      break;
    }
  }
  return report;
}

BoundReport mala_gap_bound(double m, double h, int d, double M, double L,
                           bool f_concave) {
  if (!(h > 0.0)) throw InvalidInputError("mala_gap_bound: h must be > 0");
  if (!(m > 0.0)) {
    throw AssumptionViolationError(
        "mala_gap_bound: requires strong log-concavity (m > 0)");
  }
  if (!f_concave) {
    throw AssumptionViolationError(
        "mala_gap_bound: requires a concave smooth part f");
  }
  const double h_max = mala_max_step(d, M, m, L);
  if (h > h_max) {
    std::ostringstream msg;
    const double kappa_term = m / (static_cast<double>(d) * M * M);
    const double l_term = L > 0.0 ? 1.0 / (static_cast<double>(d) * L * L)
                                  : std::numeric_limits<double>::infinity();
    msg << "mala_gap_bound: h = " << h << " exceeds ceiling " << h_max
        << " (binding term: "
        << (kappa_term <= l_term ? "1/(200 d kappa M)" : "1/(200 d L^2)")
        << ")";
    throw ConstraintViolationError(msg.str());
  }

  BoundReport report;
  report.epsilon = 0.2;
  report.delta = std::sqrt(2.0 * h) / 10.0;
  report.h_max = h_max;
  const double c = 1.0 / (40000.0 * kPi);
  report.gap_lower = c * m * h;
  report.constants_used = {{"C''", c}, {"m", m}};
  return report;
}

double rwm_rejection_bound(int d, double M, double L, double h) {
  if (!(h > 0.0)) {
    throw InvalidInputError("rwm_rejection_bound: h must be > 0");
  }
  const double dd = static_cast<double>(d);
  const double value = 0.5 + L * h * std::sqrt(dd) + 0.25 * M * h * h * dd;
  return std::min(1.0, value);
}

std::pair<double, double> cheeger_interval(double phi,
                                           double kappa_universal) {
  if (!(phi > 0.0) || phi > 1.0) {
    throw InvalidInputError("cheeger_interval: phi must be in (0, 1]");
  }
  if (kappa_universal < 1.0) {
    throw InvalidInputError("cheeger_interval: kappa must be >= 1");
  }
  return {0.5 * kappa_universal * phi * phi, phi};
}

}  // namespace nsgap
