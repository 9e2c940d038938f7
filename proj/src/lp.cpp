#include "circspec/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace circspec::lp {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // Objective row holds reduced costs; its rhs holds -value.
  double& cost(std::size_t c) { return at(rows_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> t_;
};

// Runs simplex iterations over columns [0, allowed). Returns false when
// the objective is unbounded below.
bool optimize(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed, double eps) {
  while (true) {
    std::size_t enter = allowed;
    for (std::size_t c = 0; c < allowed; ++c) {
      if (t.cost(c) < -eps) {
        enter = c;
        break;
      }
    }
    if (enter == allowed) return true;
    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= eps) continue;
      const double ratio = t.rhs(r) / a;
      if (ratio < best - eps || (ratio <= best + eps && leave < t.rows() && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace

Result minimize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                const std::vector<double>& c, double eps) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("row count mismatch");
  for (const auto& row : A) {
    if (row.size() != n) throw std::invalid_argument("column count mismatch");
  }
  // Columns: n structural variables, then m artificials.
  Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = b[r] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = sign * A[r][j];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * b[r];
    basis[r] = n + r;
  }
  // Phase 1: minimize the sum of artificials.
  for (std::size_t j = 0; j <= n + m; ++j) {
    double s = 0.0;
    if (j >= n && j < n + m) continue;
    for (std::size_t r = 0; r < m; ++r) s += j == n + m ? t.rhs(r) : t.at(r, j);
    t.at(m, j) = -s;
  }
  optimize(t, basis, n + m, eps);
  Result result;
  if (-t.at(m, n + m) > 1e-9) return result;
  // Drive remaining artificials out of the basis; rows where that is
  // impossible are redundant and stay inert.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.at(r, j)) > eps) {
        t.pivot(r, j);
        basis[r] = j;
        break;
      }
    }
  }
  // Phase 2 objective row.
  for (std::size_t j = 0; j <= n + m; ++j) t.at(m, j) = j < n ? c[j] : 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= n) continue;
    const double cb = c[basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= n + m; ++j) t.at(m, j) -= cb * t.at(r, j);
  }
  if (!optimize(t, basis, n, eps)) {
    result.status = Status::unbounded;
    return result;
  }
  result.status = Status::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) result.x[basis[r]] = t.rhs(r);
  }
  result.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.value += c[j] * result.x[j];
  return result;
}

}  // namespace circspec::lp
