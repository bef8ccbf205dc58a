#pragma once

#include <string>
#include <vector>

namespace pqed {

enum class ProfileKind { analytic, tabulated };

// Radially symmetric normalized field profile u(r): u(0) = 1, |u| <= 1.
class ModeProfile {
 public:
  // Gaussian profile u(r) = exp(-r^2 / (2 w^2)).
  static ModeProfile analytic(double width_nm);
  // Two-column table "r_nm  u" with header line "# mode-profile v1";
  // r strictly increasing from 0, u(0) = 1; linear interpolation, no extrapolation.
  static ModeProfile tabulated(std::vector<double> r_nm, std::vector<double> u);
  static ModeProfile load(const std::string& path);

  ProfileKind kind() const { return kind_; }
  double width() const { return width_; }
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return u_; }
  // Largest radius the profile is defined for (infinite for analytic).
  double max_radius() const;

  // Evaluate at radius |r| (nm); throws outside the tabulated range.
  double at(double r) const;
  double at_xy(double x, double y) const;

  bool operator==(const ModeProfile&) const = default;

 private:
  ProfileKind kind_ = ProfileKind::analytic;
  double width_ = 1.0;
  std::vector<double> r_;
  std::vector<double> u_;
};

// Default width for the analytic profile (nm).  Chosen so that, at the default
// cavity and emitter parameters, the position-dependent coupling g(r) falls to
// the 25 meV dephasing scale at r = 6 nm: w = 6 / sqrt(2 ln(g0/25)).
inline constexpr double default_profile_width_nm = 6.424946460858792;

}  // namespace pqed
