#pragma once

#include <vector>

namespace snsel {

// Thomas algorithm for a tridiagonal system.
//   lower: n-1 sub-diagonal entries (row i couples to x[i-1])
//   diag:  n diagonal entries
//   upper: n-1 super-diagonal entries (row i couples to x[i+1])
// Throws std::runtime_error on a zero/near-zero pivot (|pivot| < 1e-300) and
// std::invalid_argument on inconsistent sizes or n == 0.
std::vector<double> thomas_solve(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper,
                                 const std::vector<double>& rhs);

} // namespace snsel
