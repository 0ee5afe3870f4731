#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace liqshock {

/// Three-point system on interior rows i = 1..N-1:
///
///   A_i y_{i-1} - C_i y_i + B_i y_{i+1} = -F_i,   y_0 = mu1, y_N = mu2.
///
/// Vectors are indexed from zero, so lower[k] holds A_{k+1}.
struct TridiagonalSystem {
    std::vector<double> lower;  ///< A_i
    std::vector<double> diag;   ///< C_i
    std::vector<double> upper;  ///< B_i
    std::vector<double> rhs;    ///< F_i
    double left_value = 0.0;    ///< mu1
    double right_value = 0.0;   ///< mu2

    TridiagonalSystem() = default;
    explicit TridiagonalSystem(std::size_t interior_rows);

    std::size_t interior_rows() const noexcept { return diag.size(); }
    /// Throws ValidationError unless all four vectors share one length >= 1.
    void validate() const;
};

/// Direct elimination without pivoting. Returns y_0..y_N with the boundary
/// values copied exactly. Throws NumericalError on a zero or non-finite pivot.
std::vector<double> solve(const TridiagonalSystem& sys);

/// Residual of row i (1-based interior row) for a full solution vector y.
double row_residual(const TridiagonalSystem& sys, std::span<const double> y,
                    std::size_t row);

struct MMatrixReport {
    bool satisfied = false;
    double min_d = 0.0;          ///< min_i (C_i - A_i - B_i)
    std::size_t worst_row = 0;   ///< 1-based row attaining min_d
};

/// Sign and domination conditions A_i > 0, B_i > 0, C_i - A_i - B_i >= 0
/// under which the discrete maximum principle holds.
MMatrixReport check_m_matrix(const TridiagonalSystem& sys);

/// a-priori bound max(|mu1|, |mu2|, max_i |F_i| / D_i) with
/// D_i = |C_i| - |A_i| - |B_i|. Throws NumericalError unless every D_i > 0.
double stability_bound(const TridiagonalSystem& sys);

}  // namespace liqshock
