#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lifshitz/cavity.hpp"
#include "lifshitz/errors.hpp"
#include "lifshitz/quad.hpp"

namespace lifshitz {

WindingResult winding_number(const std::function<cplx(cplx)>& f, const Rect& rect)
{
    if (!(rect.re_hi > rect.re_lo && rect.im_hi > rect.im_lo))
        throw Error(ErrorCode::InvalidArgument, "degenerate rectangle");
    const std::array<cplx, 5> corners = {cplx(rect.re_lo, rect.im_lo), cplx(rect.re_hi, rect.im_lo),
                                         cplx(rect.re_hi, rect.im_hi), cplx(rect.re_lo, rect.im_hi),
                                         cplx(rect.re_lo, rect.im_lo)};
    const double size = std::min(rect.re_hi - rect.re_lo, rect.im_hi - rect.im_lo);
    const double h = 1e-4 * size;

    quad::QuadOptions qo;
    qo.abs_tol = 1e-6;
    qo.rel_tol = 0.0;
    qo.max_evaluations = 2'000'000;
    qo.throw_on_budget = false;

    WindingResult out;
    cplx total{};
    for (int e = 0; e < 4; ++e) {
        const cplx z0 = corners[static_cast<std::size_t>(e)];
        const cplx dz = corners[static_cast<std::size_t>(e) + 1] - z0;
        const cplx u = dz / std::abs(dz);
        auto integrand = [&](double s) {
            const cplx z = z0 + s * dz;
            const cplx fz = f(z);
            // fourth-order central difference along the edge direction
            const cplx d = (-f(z + 2.0 * h * u) + 8.0 * f(z + h * u) - 8.0 * f(z - h * u) +
                            f(z - 2.0 * h * u)) /
                           (12.0 * h * u);
            return d / fz * dz;
        };
        const auto r = quad::integrate_adaptive_complex(integrand, 0.0, 1.0, qo);
        total += r.value;
        out.evaluations += r.evaluations * 5;
    }
    const cplx w = total / cplx(0.0, 2.0 * std::numbers::pi);
    out.raw = w.real();
    out.count = static_cast<int>(std::lround(w.real()));
    out.quality = std::max(std::abs(w.real() - out.count), std::abs(w.imag()));
    if (!(out.quality <= 0.2)) {
        std::ostringstream msg;
        msg << "winding integral " << w.real() << " is not close to an integer";
        throw Error(ErrorCode::ContourTooClose, msg.str());
    }
    return out;
}

WindingResult uhp_winding_number(const CavityConfig& config, const KPoint& kp, const Rect& rect)
{
    config.validate();
    if (!(rect.im_lo > 0.0))
        throw Error(ErrorCode::DomainError, "rectangle must lie in the open upper half-plane");
    return winding_number([&](cplx w) { return dispersion_function(w, config, kp); }, rect);
}

}  // namespace lifshitz
