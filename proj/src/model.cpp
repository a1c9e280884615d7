#include "tumorctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tumorctl {

GrowthLaw GrowthLaw::linear(double rho, double s_m) {
  if (!(rho > 0.0)) throw InvalidInput("growth law: rho must be positive");
  if (!(s_m > 0.0)) throw InvalidInput("growth law: s_m must be positive");
  GrowthLaw law;
  law.kind_ = Kind::Linear;
  law.rho_ = rho;
  law.s_m_ = s_m;
  return law;
}

GrowthLaw GrowthLaw::table(std::vector<std::pair<double, double>> points, double s_m) {
  if (points.size() < 2) throw InvalidInput("growth table needs at least two points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first)) {
      throw InvalidInput("growth table abscissae must be strictly increasing");
    }
  }
  if (!(points.front().first < s_m && s_m < points.back().first)) {
    throw InvalidInput("growth table must bracket the zero crossing s_m");
  }
  // d(s)(s - s_m) < 0 away from s_m: node signs, then each straddling segment
  // must cross zero exactly at s_m.
  for (const auto& [s, d] : points) {
    if (s != s_m && !(d * (s - s_m) < 0.0)) {
      throw InvalidInput("growth table violates d(s)(s - s_m) < 0 at s = " + std::to_string(s));
    }
    if (s == s_m && d != 0.0) throw InvalidInput("growth table must vanish at s_m");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto [s0, d0] = points[i - 1];
    const auto [s1, d1] = points[i];
    if (s0 < s_m && s_m < s1) {
      const double crossing = s0 - d0 * (s1 - s0) / (d1 - d0);
      if (std::abs(crossing - s_m) > 1e-12 * std::max(1.0, std::abs(s_m))) {
        throw InvalidInput("growth table segment crosses zero at " + std::to_string(crossing) +
                           " instead of s_m");
      }
    }
  }
  GrowthLaw law;
  law.kind_ = Kind::Table;
  law.s_m_ = s_m;
  law.rho_ = 0.0;
  for (const auto& pt : points) law.rho_ = std::max(law.rho_, pt.second);
  law.points_ = std::move(points);
  return law;
}

double GrowthLaw::operator()(double s) const {
  if (kind_ == Kind::Linear) return rho_ * (1.0 - s / s_m_);
  if (s <= points_.front().first) return points_.front().second;
  if (s >= points_.back().first) return points_.back().second;
  auto it = std::upper_bound(points_.begin(), points_.end(), s,
                             [](double v, const auto& pt) { return v < pt.first; });
  const auto& [s1, d1] = *it;
  const auto& [s0, d0] = *(it - 1);
  return d0 + (d1 - d0) * (s - s0) / (s1 - s0);
}

double GrowthLaw::derivative(double s) const {
  if (kind_ == Kind::Linear) return -rho_ / s_m_;
  for (const auto& pt : points_) {
    if (s == pt.first) {
      throw NotDifferentiable("growth table is not differentiable at breakpoint s = " + std::to_string(s));
    }
  }
  if (s < points_.front().first || s > points_.back().first) return 0.0;
  auto it = std::upper_bound(points_.begin(), points_.end(), s,
                             [](double v, const auto& pt) { return v < pt.first; });
  const auto& [s1, d1] = *it;
  const auto& [s0, d0] = *(it - 1);
  return (d1 - d0) / (s1 - s0);
}

double GrowthLaw::lipschitz(double /*a*/) const {
  if (kind_ == Kind::Linear) return rho_ / s_m_;
  double L = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double slope = (points_[i].second - points_[i - 1].second) / (points_[i].first - points_[i - 1].first);
    L = std::max(L, std::abs(slope));
  }
  return L;
}

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidInput(std::string("invalid parameter: ") + what);
  };
  require(M0 > 0.0, "M0 must be > 0");
  require(lambda > 0.0, "lambda must be > 0");
  require(eps > 0.0, "eps must be > 0");
  require(s_minus > 0.0, "s_minus must be > 0");
  require(s_minus < s_plus, "s_minus must be < s_plus");
  require(T > 0.0, "T must be > 0");
  require(t0 > 0.0 && t0 < T, "t0 must satisfy 0 < t0 < T");
  require(rho > 0.0, "rho must be > 0");
  require(s_m > 0.0, "s_m must be > 0");
  require(N >= 0, "N must be >= 0");
  require(delta >= 0.0, "delta must be >= 0 (0 selects the default step)");
  (void)growth_law();
}

GrowthLaw ModelParams::growth_law() const {
  if (growth_table.empty()) return GrowthLaw::linear(rho, s_m);
  return GrowthLaw::table(growth_table, s_m);
}

FeasibilityReport check_feasibility(const ModelParams& p) {
  FeasibilityReport r;
  r.lhs = -std::expm1(-p.M0 * p.T) / -std::expm1(-p.M0 * p.t0) * p.s_minus;
  r.rhs = p.s_plus;
  r.feasible = r.lhs <= r.rhs;
  return r;
}

ControlVector reference_constant_control(const ModelParams& p, const TimeMesh& mesh) {
  const auto report = check_feasibility(p);
  if (!report.feasible) {
    throw Infeasible("no admissible constant control: (1-e^{-M0 T})/(1-e^{-M0 t0}) s_minus = " +
                     std::to_string(report.lhs) + " exceeds s_plus = " + std::to_string(report.rhs));
  }
  const double u = p.M0 * p.s_minus / -std::expm1(-p.M0 * p.t0);
  return ControlVector::constant(mesh, u);
}

}  // namespace tumorctl
