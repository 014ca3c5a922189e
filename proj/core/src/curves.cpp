#include "fsim/curves.hpp"

#include <stdexcept>
#include <string>

namespace fsim {

int CurveSet::observed_count(int i) const {
  if (!sparse()) return t();
  int c = 0;
  for (int j = 0; j < t(); ++j)
    if (mask(i, j)) ++c;
  return c;
}

void CurveSet::validate() const {
  if (grid.size() != values.cols())
    throw std::invalid_argument("CurveSet: grid size != number of value columns");
  if (grid.size() < 2) throw std::invalid_argument("CurveSet: grid needs >= 2 points");
  for (int j = 1; j < grid.size(); ++j)
    if (!(grid[j] > grid[j - 1]))
      throw std::invalid_argument("CurveSet: grid must be strictly increasing");
  if (values.rows() < 1) throw std::invalid_argument("CurveSet: needs >= 1 curve");
  if (sparse() && (mask.rows() != values.rows() || mask.cols() != values.cols()))
    throw std::invalid_argument("CurveSet: mask shape != values shape");
}

CurveSet impute_sparse(const CurveSet& curves) {
  curves.validate();
  if (!curves.sparse()) return curves;

  const int n = curves.n();
  const int t = curves.t();
  CurveSet out;
  out.grid = curves.grid;
  out.values.resize(n, t);

  for (int i = 0; i < n; ++i) {
    if (curves.observed_count(i) < 2)
      throw std::invalid_argument("impute_sparse: curve " + std::to_string(i) +
                                  " has fewer than 2 observed points");
    int prev = -1;  // last observed index seen
    for (int j = 0; j < t; ++j) {
      if (!curves.mask(i, j)) continue;
      const double vj = curves.values(i, j);
      if (prev < 0) {
        // constant extension before the first observation
        for (int k = 0; k <= j; ++k) out.values(i, k) = vj;
      } else {
        const double vp = curves.values(i, prev);
        const double span = curves.grid[j] - curves.grid[prev];
        for (int k = prev + 1; k <= j; ++k) {
          const double w = (curves.grid[k] - curves.grid[prev]) / span;
          out.values(i, k) = vp + w * (vj - vp);
        }
      }
      prev = j;
    }
    for (int k = prev + 1; k < t; ++k) out.values(i, k) = curves.values(i, prev);
  }
  return out;
}

CurveSet subset(const CurveSet& curves, const std::vector<int>& rows) {
  curves.validate();
  if (rows.empty()) throw std::invalid_argument("subset: needs >= 1 row");
  CurveSet out;
  out.grid = curves.grid;
  out.values.resize(rows.size(), curves.t());
  if (curves.sparse()) out.mask.resize(rows.size(), curves.t());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= curves.n())
      throw std::invalid_argument("subset: row index out of range");
    out.values.row(static_cast<int>(i)) = curves.values.row(rows[i]);
    if (curves.sparse())
      out.mask.row(static_cast<int>(i)) = curves.mask.row(rows[i]);
  }
  return out;
}

}  // namespace fsim
