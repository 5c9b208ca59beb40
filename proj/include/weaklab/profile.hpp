#pragma once

#include <string>
#include <vector>

namespace weaklab {

enum class ProfileKind {
  hilbert_indicator,        // c_H ln(|x-a|/|x-b|)
  cz_phi,                   // -c_H ln(x/(1-x)) on (0, 1/2)
  commutator_tail,          // ln(x)/x on (e, inf)
  maximal_tail,             // (ln x)^{k-1}/x on (e, inf)
  commutator_small_x,       // kappa (ln 1/x)^2 on (0, x0)
  adjoint_hardy_indicator,  // int_x^inf chi_(a,b)(s) ds/s, 0 <= a < b
};

/// Closed-form extremal profile. Each kind knows its exact level-set
/// measure, which is what the weak-norm pipeline consumes.
class Profile {
 public:
  static Profile hilbert_indicator(double a, double b, double c_H);
  static Profile cz_phi(double c_H);
  static Profile commutator_tail();
  static Profile maximal_tail(int k);
  static Profile commutator_small_x(double kappa, double x0 = 1.0);
  static Profile adjoint_hardy_indicator(double a, double b);

  ProfileKind kind() const noexcept { return kind_; }
  std::string describe() const;

  /// Value at x; zero outside the domain of the formula. Throws
  /// singular-point at the endpoints of a Hilbert profile.
  double operator()(double x) const;

  /// log |{x : |P(x)| > e^{log_t}}|, or -inf when the set is empty.
  double log_level_measure(double log_t) const;

  /// log of sup |P| (+inf when unbounded).
  double log_sup() const;

 private:
  Profile(ProfileKind kind, double a, double b, double c) : kind_(kind), a_(a), b_(b), c_(c) {}
  ProfileKind kind_;
  double a_;
  double b_;
  double c_;
};

/// scale * profile, placed on `multiplicity` disjoint copies of its support.
struct ProfileTerm {
  Profile profile;
  double multiplicity = 1.0;
  double scale = 1.0;
};
using ProfileSet = std::vector<ProfileTerm>;

double log_level_measure(const ProfileSet& set, double log_t);

/// log sup_t t |{|F| > t}|^{1/p} for F the disjoint sum described by `set`.
double log_profile_weak_norm(const ProfileSet& set, double p);
double profile_weak_norm(const ProfileSet& set, double p);

}  // namespace weaklab
