#pragma once

#include <cmath>
#include <utility>

#include "holouav/errors.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Central differences only; forward differences are not accurate enough for
// the gradient tolerances this library is tested against. Default step suits
// unit-scale variables; pass ~1e-5 for coordinates in meters.
struct FdConfig {
    double step = 1e-6;
};

// Central-difference gradient of a scalar function f : R^n -> Scalar.
// Throws NonFiniteValueError if any probed value is not finite.
template <typename Scalar, typename F>
VecX<Scalar> fd_grad(F&& f, const VecX<Scalar>& x, const FdConfig& cfg = {}) {
    const Scalar h = Scalar(cfg.step);
    VecX<Scalar> grad(x.size());
    VecX<Scalar> probe = x;
    for (Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + h;
        const Scalar fp = f(probe);
        probe(i) = x(i) - h;
        const Scalar fm = f(probe);
        probe(i) = x(i);
        if (!std::isfinite(double(fp)) || !std::isfinite(double(fm)))
            throw NonFiniteValueError("fd_grad: function value not finite");
        grad(i) = (fp - fm) / (Scalar(2) * h);
    }
    return grad;
}

} // namespace holouav
