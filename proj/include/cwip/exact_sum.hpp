#pragma once

#include <cmath>
#include <vector>

namespace cwip {

/// Exact floating-point accumulator (Shewchuk's grow-expansion). The running
/// sum is held as a non-overlapping expansion, so sign() and is_zero() are
/// exact and value() is within one ulp of the true sum.
class ExactSum {
 public:
  void add(double x) {
    // Grow-expansion with zero elimination.
    std::vector<double> out;
    out.reserve(parts_.size() + 1);
    double q = x;
    for (double e : parts_) {
      const double s = q + e;
      const double bv = s - q;
      const double err = (q - (s - bv)) + (e - bv);
      if (err != 0.0) out.push_back(err);
      q = s;
    }
    if (q != 0.0) out.push_back(q);
    parts_ = std::move(out);
  }

  /// Adds a * b exactly (two-product via fma).
  void add_product(double a, double b) {
    const double p = a * b;
    add(std::fma(a, b, -p));
    add(p);
  }

  bool is_zero() const { return parts_.empty(); }
  int sign() const { return parts_.empty() ? 0 : (parts_.back() > 0.0 ? 1 : -1); }

  double value() const {
    double s = 0.0;
    for (double e : parts_) s += e;
    return s;
  }

 private:
  std::vector<double> parts_;  // increasing magnitude
};

}  // namespace cwip
