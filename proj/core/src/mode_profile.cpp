#include "pqed/mode_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pqed {

ModeProfile ModeProfile::analytic(double width_nm) {
  if (!(width_nm > 0.0)) throw std::invalid_argument("ModeProfile::analytic: width must be > 0");
  ModeProfile p;
  p.kind_ = ProfileKind::analytic;
  p.width_ = width_nm;
  return p;
}

ModeProfile ModeProfile::tabulated(std::vector<double> r_nm, std::vector<double> u) {
  if (r_nm.size() != u.size()) throw std::invalid_argument("ModeProfile::tabulated: column length mismatch");
  if (r_nm.size() < 2) throw std::invalid_argument("ModeProfile::tabulated: need at least 2 samples");
  if (r_nm.front() != 0.0) throw std::invalid_argument("ModeProfile::tabulated: first radius must be 0");
  if (u.front() != 1.0) throw std::invalid_argument("ModeProfile::tabulated: u(0) must be 1");
  for (std::size_t i = 1; i < r_nm.size(); ++i) {
    if (!(r_nm[i] > r_nm[i - 1])) {
      throw std::invalid_argument("ModeProfile::tabulated: radii must be strictly increasing");
    }
  }
  for (double v : u) {
    if (!(std::abs(v) <= 1.0 + 1e-12)) {
      throw std::invalid_argument("ModeProfile::tabulated: |u| must not exceed 1");
    }
  }
  ModeProfile p;
  p.kind_ = ProfileKind::tabulated;
  p.r_ = std::move(r_nm);
  p.u_ = std::move(u);
  return p;
}

ModeProfile ModeProfile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mode profile: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("mode profile: empty file " + path);
  if (line.rfind("# mode-profile v1", 0) != 0) {
    throw std::runtime_error("mode profile: missing '# mode-profile v1' header in " + path);
  }
  std::vector<double> r, u;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line.substr(0, line.find('#'));
    std::istringstream ss(stripped);
    double ri, ui;
    if (!(ss >> ri)) continue;  // blank or comment-only line
    if (!(ss >> ui)) {
      throw std::runtime_error("mode profile: " + path + ":" + std::to_string(lineno) +
                               ": expected two columns r_nm u");
    }
    r.push_back(ri);
    u.push_back(ui);
  }
  try {
    return tabulated(std::move(r), std::move(u));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("mode profile: " + path + ": " + e.what());
  }
}

double ModeProfile::max_radius() const {
  if (kind_ == ProfileKind::analytic) return std::numeric_limits<double>::infinity();
  return r_.back();
}

double ModeProfile::at(double r) const {
  r = std::abs(r);
  if (kind_ == ProfileKind::analytic) {
    return std::exp(-r * r / (2.0 * width_ * width_));
  }
  if (r > r_.back()) {
    throw std::out_of_range("mode profile: radius " + std::to_string(r) +
                            " nm outside tabulated range (max " + std::to_string(r_.back()) + " nm)");
  }
  auto it = std::lower_bound(r_.begin(), r_.end(), r);
  if (it == r_.begin()) return u_.front();
  std::size_t hi = static_cast<std::size_t>(it - r_.begin());
  std::size_t lo = hi - 1;
  const double t = (r - r_[lo]) / (r_[hi] - r_[lo]);
  return u_[lo] + t * (u_[hi] - u_[lo]);
}

double ModeProfile::at_xy(double x, double y) const { return at(std::hypot(x, y)); }

}  // namespace pqed
