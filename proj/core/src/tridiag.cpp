#include "liqshock/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "liqshock/error.hpp"

namespace liqshock {

TridiagonalSystem::TridiagonalSystem(std::size_t interior_rows)
    : lower(interior_rows), diag(interior_rows), upper(interior_rows), rhs(interior_rows) {}

void TridiagonalSystem::validate() const {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n) {
        throw ValidationError("tridiagonal system vectors must share one length >= 1");
    }
}

std::vector<double> solve(const TridiagonalSystem& sys) {
    sys.validate();
    const std::size_t n = sys.interior_rows();

    // Row k (interior row k+1) in positive form:
    //   -A y_{k} + C y_{k+1} - B y_{k+2} = F
    std::vector<double> c_prime(n);
    std::vector<double> d_prime(n);
    for (std::size_t k = 0; k < n; ++k) {
        double f = sys.rhs[k];
        if (k == 0) f += sys.lower[0] * sys.left_value;
        if (k + 1 == n) f += sys.upper[k] * sys.right_value;

        double pivot = sys.diag[k];
        if (k > 0) {
            pivot -= sys.lower[k] * c_prime[k - 1];
            f += sys.lower[k] * d_prime[k - 1];
        }
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("singular pivot in tridiagonal row " + std::to_string(k + 1));
        }
        c_prime[k] = (k + 1 < n) ? sys.upper[k] / pivot : 0.0;
        d_prime[k] = f / pivot;
    }

    std::vector<double> y(n + 2);
    y.front() = sys.left_value;
    y.back() = sys.right_value;
    y[n] = d_prime[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        y[k + 1] = d_prime[k] + c_prime[k] * y[k + 2];
    }
    return y;
}

double row_residual(const TridiagonalSystem& sys, std::span<const double> y,
                    std::size_t row) {
    const std::size_t k = row - 1;
    return sys.lower[k] * y[row - 1] - sys.diag[k] * y[row] + sys.upper[k] * y[row + 1] +
           sys.rhs[k];
}

MMatrixReport check_m_matrix(const TridiagonalSystem& sys) {
    sys.validate();
    MMatrixReport report;
    report.satisfied = true;
    report.min_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sys.interior_rows(); ++k) {
        const double d = sys.diag[k] - sys.lower[k] - sys.upper[k];
        if (d < report.min_d) {
            report.min_d = d;
            report.worst_row = k + 1;
        }
        if (!(sys.lower[k] > 0.0) || !(sys.upper[k] > 0.0) || !(d >= 0.0)) {
            report.satisfied = false;
        }
    }
    return report;
}

double stability_bound(const TridiagonalSystem& sys) {
    sys.validate();
    double bound = std::max(std::abs(sys.left_value), std::abs(sys.right_value));
    for (std::size_t k = 0; k < sys.interior_rows(); ++k) {
        const double d = std::abs(sys.diag[k]) - std::abs(sys.lower[k]) - std::abs(sys.upper[k]);
        if (!(d > 0.0)) {
            throw NumericalError("row " + std::to_string(k + 1) +
                                 " is not strictly diagonally dominant");
        }
        bound = std::max(bound, std::abs(sys.rhs[k]) / d);
    }
    return bound;
}

}  // namespace liqshock
