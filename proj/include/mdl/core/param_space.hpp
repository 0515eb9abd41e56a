#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mdl/error.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

enum class Geometry { simplex, ball, box };

// Distance-generating function. `none` marks a space without a prox setup;
// mirror descent refuses to run on it.
enum class Dgf { entropy, euclidean, none };

// Norm in which loss gradients are bounded, paired with its dual for action
// diameters.
enum class NormPair { linf_l1, l2_l2 };

inline std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::simplex: return "simplex";
    case Geometry::ball: return "ball";
    case Geometry::box: return "box";
  }
  return "?";
}

inline std::string to_string(Dgf d) {
  switch (d) {
    case Dgf::entropy: return "entropy";
    case Dgf::euclidean: return "euclidean";
    case Dgf::none: return "none";
  }
  return "?";
}

// Euclidean projection onto the probability simplex (sort-based, O(k log k)).
inline std::vector<double> project_to_simplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) tau = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
  const double s = accurate_sum(out);
  for (double& x : out) x /= s;
  return out;
}

// Convex parameter set Theta together with its prox setup: dgf omega, center
// theta_c = argmin omega, Bregman radius D = max_u V(theta_c, u) and the
// diameter R in the norm dual to the gradient norm.
class ConvexParamSpace {
 public:
  static ConvexParamSpace simplex(std::size_t dim, Dgf dgf = Dgf::entropy) {
    if (dim < 1) throw InvalidArgument("ConvexParamSpace::simplex: dim must be >= 1");
    ConvexParamSpace s(Geometry::simplex, dim, dgf);
    s.norm_ = dgf == Dgf::euclidean ? NormPair::l2_l2 : NormPair::linf_l1;
    return s;
  }

  static ConvexParamSpace ball(std::size_t dim, double radius, Dgf dgf = Dgf::euclidean) {
    if (dim < 1 || !(radius > 0.0)) throw InvalidArgument("ConvexParamSpace::ball: bad dimension or radius");
    if (dgf == Dgf::entropy) throw Unsupported("ConvexParamSpace::ball: entropy dgf needs the simplex");
    ConvexParamSpace s(Geometry::ball, dim, dgf);
    s.radius_ = radius;
    s.norm_ = NormPair::l2_l2;
    return s;
  }

  static ConvexParamSpace box(std::vector<double> lo, std::vector<double> hi, Dgf dgf = Dgf::euclidean) {
    if (lo.empty() || lo.size() != hi.size()) throw InvalidArgument("ConvexParamSpace::box: bad bounds");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!(lo[i] <= hi[i])) throw InvalidArgument("ConvexParamSpace::box: lo > hi");
    }
    if (dgf == Dgf::entropy) throw Unsupported("ConvexParamSpace::box: entropy dgf needs the simplex");
    ConvexParamSpace s(Geometry::box, lo.size(), dgf);
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    s.norm_ = NormPair::l2_l2;
    return s;
  }

  Geometry geometry() const noexcept { return geometry_; }
  Dgf dgf() const noexcept { return dgf_; }
  NormPair norm() const noexcept { return norm_; }
  std::size_t dimension() const noexcept { return dim_; }
  double radius() const noexcept { return radius_; }
  const std::vector<double>& lower() const noexcept { return lo_; }
  const std::vector<double>& upper() const noexcept { return hi_; }

  std::vector<double> project(std::span<const double> x) const {
    check_dim(x);
    switch (geometry_) {
      case Geometry::simplex: return project_to_simplex(x);
      case Geometry::ball: {
        const double n = std::sqrt(dot(x, x));
        std::vector<double> out(x.begin(), x.end());
        if (n > radius_) {
          for (double& v : out) v *= radius_ / n;
        }
        return out;
      }
      case Geometry::box: {
        std::vector<double> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out[i] = std::clamp(x[i], lo_[i], hi_[i]);
        return out;
      }
    }
    return {};
  }

  bool is_feasible(std::span<const double> x, double tol = 1e-9) const {
    if (x.size() != dim_) return false;
    for (double v : x) {
      if (!std::isfinite(v)) return false;
    }
    switch (geometry_) {
      case Geometry::simplex:
        for (double v : x) {
          if (v < -tol) return false;
        }
        return std::abs(accurate_sum(x) - 1.0) <= tol;
      case Geometry::ball:
        return std::sqrt(dot(x, x)) <= radius_ + tol;
      case Geometry::box:
        for (std::size_t i = 0; i < dim_; ++i) {
          if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
        }
        return true;
    }
    return false;
  }

  std::vector<double> center() const {
    switch (geometry_) {
      case Geometry::simplex: return std::vector<double>(dim_, 1.0 / static_cast<double>(dim_));
      case Geometry::ball: return std::vector<double>(dim_, 0.0);
      case Geometry::box: {
        std::vector<double> c(dim_);
        for (std::size_t i = 0; i < dim_; ++i) c[i] = 0.5 * (lo_[i] + hi_[i]);
        return c;
      }
    }
    return {};
  }

  double omega(std::span<const double> x) const {
    check_dim(x);
    require_dgf();
    if (dgf_ == Dgf::entropy) {
      double s = 0.0;
      for (double v : x) {
        if (v > 0.0) s += v * std::log(v);
      }
      return s;
    }
    return 0.5 * dot(x, x);
  }

  // omega'(w); for the entropy dgf only defined where w > 0.
  std::vector<double> omega_gradient(std::span<const double> w) const {
    check_dim(w);
    require_dgf();
    std::vector<double> g(dim_);
    for (std::size_t i = 0; i < dim_; ++i) g[i] = dgf_ == Dgf::entropy ? std::log(w[i]) + 1.0 : w[i];
    return g;
  }

  // V(w, u) = omega(u) - omega(w) - <omega'(w), u - w>.
  double bregman(std::span<const double> w, std::span<const double> u) const {
    check_dim(w);
    check_dim(u);
    require_dgf();
    if (dgf_ == Dgf::entropy) {
      // KL(u || w) for points on the simplex.
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        if (u[i] > 0.0) s += u[i] * std::log(u[i] / w[i]);
      }
      return std::max(s, 0.0);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (u[i] - w[i]) * (u[i] - w[i]);
    return 0.5 * s;
  }

  double bregman_radius() const {
    require_dgf();
    switch (geometry_) {
      case Geometry::simplex:
        return dgf_ == Dgf::entropy ? std::log(static_cast<double>(dim_))
                                    : 0.5 * (1.0 - 1.0 / static_cast<double>(dim_));
      case Geometry::ball:
        return 0.5 * radius_ * radius_;
      case Geometry::box: {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += 0.25 * (hi_[i] - lo_[i]) * (hi_[i] - lo_[i]);
        return 0.5 * s;
      }
    }
    return 0.0;
  }

  // Diameter in the action norm: l1 for (linf, l1), l2 otherwise.
  double diameter() const {
    switch (geometry_) {
      case Geometry::simplex:
        if (dim_ == 1) return 0.0;
        return norm_ == NormPair::linf_l1 ? 2.0 : std::sqrt(2.0);
      case Geometry::ball:
        return 2.0 * radius_;
      case Geometry::box: {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += (hi_[i] - lo_[i]) * (hi_[i] - lo_[i]);
        return std::sqrt(s);
      }
    }
    return 0.0;
  }

  // Norm of a gradient in the gradient norm of this space.
  double gradient_norm(std::span<const double> g) const {
    if (norm_ == NormPair::linf_l1) {
      double m = 0.0;
      for (double v : g) m = std::max(m, std::abs(v));
      return m;
    }
    return std::sqrt(dot(g, g));
  }

 private:
  ConvexParamSpace(Geometry g, std::size_t dim, Dgf dgf) : geometry_(g), dgf_(dgf), dim_(dim) {}

  void check_dim(std::span<const double> x) const {
    if (x.size() != dim_) throw InvalidArgument("ConvexParamSpace: point has wrong dimension");
  }
  void require_dgf() const {
    if (dgf_ == Dgf::none) throw Unsupported("ConvexParamSpace: no distance-generating function");
  }

  Geometry geometry_;
  Dgf dgf_;
  NormPair norm_ = NormPair::l2_l2;
  std::size_t dim_;
  double radius_ = 0.0;
  std::vector<double> lo_, hi_;
};

}  // namespace mdl
