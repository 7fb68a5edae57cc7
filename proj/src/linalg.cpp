#include "epsforms/linalg.hpp"

namespace epsforms {

std::vector<std::size_t> rref(RMatrix& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  Rational f, tmp;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Rational inv = 1 / rows[r][c];
    for (std::size_t j = c; j < cols; ++j)
      if (rows[r][j] != 0) rows[r][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) {
        if (rows[r][j] == 0) continue;
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), rows[r][j].get_mpq_t());
        rows[i][j] -= tmp;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

RMatrix nullspace(RMatrix a, std::size_t cols) {
  for (auto& row : a) row.resize(cols);
  const auto piv = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : piv) is_pivot[c] = true;
  RMatrix out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(cols);
    x[free] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -a[i][free];
    out.push_back(std::move(x));
  }
  return out;
}

} // namespace epsforms
