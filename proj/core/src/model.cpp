#include "liqshock/model.hpp"

#include <cmath>
#include <string>

#include "liqshock/error.hpp"

namespace liqshock {

namespace {

void require(bool ok, const char* field, const char* condition) {
    if (!ok) {
        throw ValidationError(std::string(field) + " must satisfy " + condition);
    }
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
    require(finite(sigma) && sigma > 0.0, "sigma", "sigma > 0");
    require(finite(mu), "mu", "finite value");
    require(finite(gamma) && gamma > 0.0, "gamma", "gamma > 0");
    require(finite(nu01) && nu01 > 0.0, "nu01", "nu01 > 0");
    require(finite(nu10) && nu10 > 0.0, "nu10", "nu10 > 0");
    require(finite(strike) && strike > 0.0, "strike", "strike > 0");
    require(finite(horizon) && horizon > 0.0, "horizon", "horizon > 0");
    require(finite(s_min) && s_min >= 0.0, "s_min", "s_min >= 0");
    require(s_min < strike, "s_min", "s_min < strike");
    require(finite(s_max) && s_max > strike, "s_max", "s_max > strike");
}

DerivedConstants derive_constants(const ModelParams& params) {
    params.validate();

    DerivedConstants dc;
    dc.d0 = params.mu * params.mu / (2.0 * params.sigma * params.sigma);
    dc.a = params.nu01;
    dc.b = dc.d0 + params.nu01;
    dc.c = params.nu10;
    dc.horizon = params.horizon;

    // lambda^2 - (d0 + a + c) lambda + d0 c = 0
    const double sum = dc.d0 + dc.a + dc.c;
    const double product = dc.d0 * dc.c;
    const double disc = sum * sum - 4.0 * product;
    if (!(disc >= 0.0)) {
        throw NumericalError("negative discriminant in lambda roots");
    }
    dc.lambda1 = 0.5 * (sum + std::sqrt(disc));
    // Vieta form avoids cancellation in the minus branch.
    dc.lambda2 = product / dc.lambda1;
    if (!(dc.lambda1 > dc.lambda2)) {
        throw ValidationError("degenerate parameters: lambda1 == lambda2");
    }

    const double gap = dc.lambda1 - dc.lambda2;
    dc.coef_c1 = (dc.d0 - dc.lambda2) / gap * std::exp(-dc.lambda1 * params.horizon);
    dc.coef_c2 = (dc.lambda1 - dc.d0) / gap * std::exp(-dc.lambda2 * params.horizon);
    return dc;
}

FValues evaluate_f(const DerivedConstants& dc, double t) {
    // c_k e^{lambda_k t} evaluated as r_k e^{lambda_k (t - T)} so that the
    // terminal value does not pass through e^{-lambda1 T} e^{lambda1 T}.
    const double gap = dc.lambda1 - dc.lambda2;
    const double r1 = (dc.d0 - dc.lambda2) / gap;
    const double r2 = (dc.lambda1 - dc.d0) / gap;
    const double e1 = r1 * std::exp(dc.lambda1 * (t - dc.horizon));
    const double e2 = r2 * std::exp(dc.lambda2 * (t - dc.horizon));
    return {e1 + e2, (e1 * (dc.b - dc.lambda1) + e2 * (dc.b - dc.lambda2)) / dc.a};
}

PricePair to_prices(std::span<const double> u, std::span<const double> v, double t,
                    const ModelParams& params, const DerivedConstants& dc) {
    if (u.size() != v.size()) {
        throw ValidationError("to_prices: u and v lengths differ");
    }
    // F0(T) = F1(T) = 1 by definition; skip the rounding of the closed form.
    const auto f = t >= params.horizon ? FValues{1.0, 1.0} : evaluate_f(dc, t);
    const double shift_p = std::log(f.f0) / params.gamma;
    const double shift_q = std::log(f.f1) / params.gamma;

    PricePair out;
    out.p.resize(u.size());
    out.q.resize(v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.p[i] = u[i] / params.gamma + shift_p;
        out.q[i] = v[i] / params.gamma + shift_q;
    }
    return out;
}

}  // namespace liqshock
