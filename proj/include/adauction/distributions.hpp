// Copyright 2026 The adauction Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Value distributions: CDF, density, quantile, inverse-transform sampling,
// virtual values and regularity checks.

#ifndef ADAUCTION_DISTRIBUTIONS_HPP_
#define ADAUCTION_DISTRIBUTIONS_HPP_

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <variant>

#include "adauction/core.hpp"
#include "adauction/random.hpp"

namespace adauction {

struct Uniform {
  double a = 0.0;
  double b = 1.0;
};

struct Exponential {
  double rate = 1.0;
};

struct TruncatedNormal {
  double mu = 0.0;
  double sigma = 1.0;
  double lo = 0.0;
  double hi = 1.0;
};

// User-supplied (F, f, F^-1) on [lo, hi]; validated numerically on load.
struct CustomFamily {
  std::string name;
  std::function<double(double)> cdf;
  std::function<double(double)> pdf;
  std::function<double(double)> quantile;
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr std::size_t kRegularityGrid = 10001;

class ValueDistribution;
bool is_regular(const ValueDistribution& dist, std::size_t grid_points = kRegularityGrid);

class ValueDistribution {
 public:
  using Family = std::variant<Uniform, Exponential, TruncatedNormal, CustomFamily>;

  static ValueDistribution uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
      throw InvalidArgument("uniform needs finite a < b");
    }
    return ValueDistribution(Uniform{a, b});
  }

  static ValueDistribution exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("exponential needs rate > 0");
    return ValueDistribution(Exponential{rate});
  }

  static ValueDistribution truncated_normal(double mu, double sigma, double lo, double hi) {
    if (!(sigma > 0.0) || !(lo < hi) || !std::isfinite(mu) || !std::isfinite(lo) ||
        !std::isfinite(hi)) {
      throw InvalidArgument("truncated normal needs sigma > 0 and finite lo < hi");
    }
    return ValueDistribution(TruncatedNormal{mu, sigma, lo, hi});
  }

  static ValueDistribution custom(CustomFamily family) {
    if (!family.cdf || !family.pdf || !family.quantile || !(family.lo < family.hi)) {
      throw InvalidArgument("custom distribution needs cdf, pdf, quantile and lo < hi");
    }
    ValueDistribution d(std::move(family));
    d.validate_custom();
    return d;
  }

  const Family& family() const { return family_; }

  std::string name() const {
    struct {
      std::string operator()(const Uniform&) const { return "uniform"; }
      std::string operator()(const Exponential&) const { return "exponential"; }
      std::string operator()(const TruncatedNormal&) const { return "truncated_normal"; }
      std::string operator()(const CustomFamily& c) const { return c.name; }
    } visitor;
    return std::visit(visitor, family_);
  }

  double lower() const {
    if (auto* u = std::get_if<Uniform>(&family_)) return u->a;
    if (std::holds_alternative<Exponential>(family_)) return 0.0;
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) return t->lo;
    return std::get<CustomFamily>(family_).lo;
  }

  double upper() const {
    if (auto* u = std::get_if<Uniform>(&family_)) return u->b;
    if (std::holds_alternative<Exponential>(family_)) {
      return std::numeric_limits<double>::infinity();
    }
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) return t->hi;
    return std::get<CustomFamily>(family_).hi;
  }

  double cdf(double v) const {
    if (v <= lower()) return 0.0;
    if (v >= upper()) return 1.0;
    if (auto* u = std::get_if<Uniform>(&family_)) return (v - u->a) / (u->b - u->a);
    if (auto* e = std::get_if<Exponential>(&family_)) return -std::expm1(-e->rate * v);
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) {
      return (boost::math::cdf(normal_, (v - t->mu) / t->sigma) - tn_cdf_lo_) / tn_mass_;
    }
    return std::get<CustomFamily>(family_).cdf(v);
  }

  // 1 - F(v), computed without cancellation where the family allows it.
  double survival(double v) const {
    if (v <= lower()) return 1.0;
    if (v >= upper()) return 0.0;
    if (auto* u = std::get_if<Uniform>(&family_)) return (u->b - v) / (u->b - u->a);
    if (auto* e = std::get_if<Exponential>(&family_)) return std::exp(-e->rate * v);
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) {
      const double z = (v - t->mu) / t->sigma;
      return (boost::math::cdf(boost::math::complement(normal_, z)) - tn_sf_hi_) / tn_mass_;
    }
    return 1.0 - std::get<CustomFamily>(family_).cdf(v);
  }

  double pdf(double v) const {
    if (v < lower() || v > upper()) return 0.0;
    if (auto* u = std::get_if<Uniform>(&family_)) return 1.0 / (u->b - u->a);
    if (auto* e = std::get_if<Exponential>(&family_)) return e->rate * std::exp(-e->rate * v);
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) {
      return boost::math::pdf(normal_, (v - t->mu) / t->sigma) / (t->sigma * tn_mass_);
    }
    return std::get<CustomFamily>(family_).pdf(v);
  }

  double quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level outside [0, 1]");
    if (auto* u = std::get_if<Uniform>(&family_)) return u->a + q * (u->b - u->a);
    if (auto* e = std::get_if<Exponential>(&family_)) {
      if (q == 1.0) return std::numeric_limits<double>::infinity();
      return -std::log1p(-q) / e->rate;
    }
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) {
      if (q == 0.0) return t->lo;
      if (q == 1.0) return t->hi;
      const double level = tn_cdf_lo_ + q * tn_mass_;
      const double z = boost::math::quantile(normal_, level);
      return std::clamp(t->mu + t->sigma * z, t->lo, t->hi);
    }
    return std::get<CustomFamily>(family_).quantile(q);
  }

  // Inverse-transform sampling.
  template <class URBG>
  double sample(URBG& rng) const {
    return quantile(uniform01(rng));
  }

  // phi(v) = v - (1 - F(v)) / f(v).
  double virtual_value(double v) const {
    const double density = pdf(v);
    if (!(density > 0.0)) {
      throw InvalidArgument("virtual value undefined: zero density at v = " + std::to_string(v));
    }
    return v - survival(v) / density;
  }

  // Regularity on the default quantile grid, computed once at construction.
  bool regular() const { return regular_; }

 private:
  explicit ValueDistribution(Family family) : family_(std::move(family)) {
    if (auto* t = std::get_if<TruncatedNormal>(&family_)) {
      tn_cdf_lo_ = boost::math::cdf(normal_, (t->lo - t->mu) / t->sigma);
      tn_sf_hi_ = boost::math::cdf(boost::math::complement(normal_, (t->hi - t->mu) / t->sigma));
      tn_mass_ = boost::math::cdf(normal_, (t->hi - t->mu) / t->sigma) - tn_cdf_lo_;
      if (!(tn_mass_ > 1e-12)) {
        throw InvalidArgument("truncation interval carries no probability mass");
      }
    }
    if (!std::holds_alternative<CustomFamily>(family_)) regular_ = is_regular(*this);
  }

  void validate_custom() {
    const auto& c = std::get<CustomFamily>(family_);
    double prev_f = -1.0;
    for (std::size_t k = 1; k < 100; ++k) {
      const double q = static_cast<double>(k) / 100.0;
      const double v = c.quantile(q);
      const double f = c.cdf(v);
      if (!(std::abs(f - q) <= 1e-6)) {
        throw InvalidArgument(c.name + ": cdf(quantile(" + std::to_string(q) +
                              ")) = " + std::to_string(f));
      }
      if (!(c.pdf(v) > 0.0)) throw InvalidArgument(c.name + ": zero density inside support");
      if (f < prev_f) throw InvalidArgument(c.name + ": cdf is not increasing");
      prev_f = f;
    }
    regular_ = is_regular(*this);
  }

  Family family_;
  boost::math::normal_distribution<double> normal_{0.0, 1.0};
  double tn_cdf_lo_ = 0.0;
  double tn_sf_hi_ = 0.0;
  double tn_mass_ = 1.0;
  bool regular_ = false;
};

inline double virtual_value(const ValueDistribution& dist, double v) {
  return dist.virtual_value(v);
}

// Virtual values are non-decreasing (within 1e-9) on `grid_points` quantile
// levels (k + 0.5) / grid_points.
inline bool is_regular(const ValueDistribution& dist, std::size_t grid_points) {
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(grid_points);
    const double phi = dist.virtual_value(dist.quantile(q));
    if (phi < prev - 1e-9) return false;
    prev = phi;
  }
  return true;
}

}  // namespace adauction

#endif  // ADAUCTION_DISTRIBUTIONS_HPP_
