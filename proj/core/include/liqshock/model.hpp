#pragma once

#include <span>
#include <vector>

namespace liqshock {

/// Market and utility inputs. Defaults are the reference parameter set
/// used throughout the convergence tables (at-the-money call, K = 2).
struct ModelParams {
    double sigma = 0.3;    ///< volatility, per sqrt(year)
    double mu = 0.06;      ///< drift, per year
    double gamma = 1.0;    ///< risk aversion
    double nu01 = 1.0;     ///< intensity liquid -> illiquid
    double nu10 = 12.0;    ///< intensity illiquid -> liquid
    double strike = 2.0;
    double horizon = 1.0;  ///< T, years
    double s_min = 0.0;
    double s_max = 5.0;

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// Constants of the transformed system
///   u_t - 1/2 sigma^2 S^2 u_SS + a e^{u-v} - b = 0,
///   v_t + c e^{v-u} - c = 0,
/// together with the closed-form data of F0, F1.
struct DerivedConstants {
    double d0 = 0.0;       ///< mu^2 / (2 sigma^2)
    double a = 0.0;        ///< nu01
    double b = 0.0;        ///< d0 + nu01
    double c = 0.0;        ///< nu10
    double lambda1 = 0.0;  ///< larger root
    double lambda2 = 0.0;  ///< smaller root
    double coef_c1 = 0.0;  ///< (lambda2 - d0)/(lambda2 - lambda1) e^{-lambda1 T}
    double coef_c2 = 0.0;  ///< (lambda1 - d0)/(lambda1 - lambda2) e^{-lambda2 T}
    double horizon = 0.0;
};

DerivedConstants derive_constants(const ModelParams& params);

struct FValues {
    double f0;
    double f1;
};

/// F0(t), F1(t) for 0 <= t <= T. Both equal 1 at t = T.
FValues evaluate_f(const DerivedConstants& dc, double t);

inline double payoff_call(double s, double strike) {
    return s > strike ? s - strike : 0.0;
}

struct PricePair {
    std::vector<double> p;  ///< liquid-state indifference price
    std::vector<double> q;  ///< illiquid-state indifference price
};

/// Maps transformed unknowns (u, v) = gamma (R0, R1) at calendar time t to
/// indifference prices p = u/gamma + ln F0(t)/gamma, q = v/gamma + ln F1(t)/gamma.
PricePair to_prices(std::span<const double> u, std::span<const double> v,
                    double t, const ModelParams& params,
                    const DerivedConstants& dc);

}  // namespace liqshock
