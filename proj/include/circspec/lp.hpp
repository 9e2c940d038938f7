#pragma once

// Small dense linear programs in standard form, solved with a two-phase
// tableau simplex and Bland's anti-cycling rule. Sized for a handful of
// rows and a few thousand columns.

#include <vector>

namespace circspec::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// min c.x subject to A x = b, x >= 0. A is row-major with rows of equal length.
Result minimize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                const std::vector<double>& c, double eps = 1e-11);

}  // namespace circspec::lp
