#include "snsel/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace snsel {

std::vector<double> thomas_solve(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper,
                                 const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("tridiagonal system is empty");
    if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
        throw std::invalid_argument("tridiagonal band/rhs sizes are inconsistent");

    std::vector<double> scratch(n - 1);
    std::vector<double> x(n);

    double pivot = diag[0];
    if (std::abs(pivot) < 1e-300)
        throw std::runtime_error("tridiagonal solve: zero pivot at row 0");
    if (n > 1) scratch[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * scratch[i - 1];
        if (std::abs(pivot) < 1e-300)
            throw std::runtime_error("tridiagonal solve: zero pivot at row " +
                                     std::to_string(i));
        if (i < n - 1) scratch[i] = upper[i] / pivot;
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
    return x;
}

} // namespace snsel
