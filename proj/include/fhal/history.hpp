#pragma once

// History functions on [-tau, 0]: the initial data of a delay system.
// Three structured kinds round-trip through JSON configs; lifted or
// otherwise derived histories wrap an arbitrary callable.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fhal/matrix.hpp"

namespace fhal {

class HistoryFunction {
 public:
  enum class Kind { constant, polynomial, sampled, callable };

  HistoryFunction() = default;

  static HistoryFunction constant(Vector value) {
    HistoryFunction h;
    h.kind_ = Kind::constant;
    h.dim_ = value.size();
    h.constant_ = std::move(value);
    return h;
  }

  // coeffs[i] are the polynomial coefficients of component i, lowest first.
  static HistoryFunction polynomial(std::vector<Vector> coeffs) {
    HistoryFunction h;
    h.kind_ = Kind::polynomial;
    h.dim_ = coeffs.size();
    h.coeffs_ = std::move(coeffs);
    return h;
  }

  // Piecewise-linear through (times[j], values[j]); times strictly increasing.
  static HistoryFunction sampled(Vector times, std::vector<Vector> values) {
    if (times.size() < 2 || times.size() != values.size())
      throw std::invalid_argument("HistoryFunction: need >= 2 samples, one value per time");
    for (std::size_t j = 1; j < times.size(); ++j)
      if (!(times[j] > times[j - 1]))
        throw std::invalid_argument("HistoryFunction: times must be strictly increasing");
    HistoryFunction h;
    h.kind_ = Kind::sampled;
    h.dim_ = values.front().size();
    h.times_ = std::move(times);
    h.values_ = std::move(values);
    return h;
  }

  static HistoryFunction callable(std::size_t dim, std::function<Vector(double)> fn) {
    HistoryFunction h;
    h.kind_ = Kind::callable;
    h.dim_ = dim;
    h.fn_ = std::move(fn);
    return h;
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool valid() const { return dim_ > 0; }

  Vector operator()(double t) const {
    switch (kind_) {
      case Kind::constant:
        return constant_;
      case Kind::polynomial: {
        Vector v(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
          double acc = 0.0;
          const Vector& c = coeffs_[i];
          for (std::size_t j = c.size(); j-- > 0;) acc = acc * t + c[j];
          v[i] = acc;
        }
        return v;
      }
      case Kind::sampled: {
        if (t <= times_.front()) return values_.front();
        if (t >= times_.back()) return values_.back();
        std::size_t j = 1;
        while (times_[j] < t) ++j;
        double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
        Vector v(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
          v[i] = (1.0 - w) * values_[j - 1][i] + w * values_[j][i];
        return v;
      }
      case Kind::callable:
        return fn_(t);
    }
    throw std::logic_error("HistoryFunction: empty");
  }

  // accessors for serialization
  const Vector& constant_value() const { return constant_; }
  const std::vector<Vector>& poly_coeffs() const { return coeffs_; }
  const Vector& sample_times() const { return times_; }
  const std::vector<Vector>& sample_values() const { return values_; }

 private:
  Kind kind_ = Kind::constant;
  std::size_t dim_ = 0;
  Vector constant_;
  std::vector<Vector> coeffs_;
  Vector times_;
  std::vector<Vector> values_;
  std::function<Vector(double)> fn_;
};

}  // namespace fhal
