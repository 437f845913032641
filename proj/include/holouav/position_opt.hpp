#pragma once

#include <cmath>
#include <stdexcept>

#include "holouav/channel.hpp"
#include "holouav/metrics.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Allowed flight volume: a rectangle or a disk in the xy-plane, extruded
// between two altitude bounds.
struct Region {
    enum class Kind { Rectangle, Circle };

    Kind kind = Kind::Rectangle;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    Vec2<double> center = Vec2<double>::Zero();
    double radius = 0.0;
    double z_min = 0.0, z_max = 0.0;

    static Region rectangle(double x_min, double x_max, double y_min, double y_max, double z_min,
                            double z_max) {
        Region r;
        r.kind = Kind::Rectangle;
        r.x_min = x_min;
        r.x_max = x_max;
        r.y_min = y_min;
        r.y_max = y_max;
        r.z_min = z_min;
        r.z_max = z_max;
        return r;
    }

    static Region circle(const Vec2<double>& center, double radius, double z_min, double z_max) {
        Region r;
        r.kind = Kind::Circle;
        r.center = center;
        r.radius = radius;
        r.z_min = z_min;
        r.z_max = z_max;
        return r;
    }

    bool contains(const Vec3<double>& q, double tol = 0.0) const {
        if (q.z() < z_min - tol || q.z() > z_max + tol)
            return false;
        if (kind == Kind::Rectangle)
            return q.x() >= x_min - tol && q.x() <= x_max + tol && q.y() >= y_min - tol &&
                   q.y() <= y_max + tol;
        return (q.template head<2>() - center).norm() <= radius + tol;
    }
};

inline void validate(const Region& region) {
    if (!(region.z_min <= region.z_max))
        throw std::invalid_argument("region: altitude bounds out of order");
    if (region.kind == Region::Kind::Rectangle) {
        if (!(region.x_min <= region.x_max) || !(region.y_min <= region.y_max))
            throw std::invalid_argument("region: rectangle bounds out of order");
    } else if (!(region.radius > 0.0)) {
        throw std::invalid_argument("region: radius must be positive");
    }
}

struct PositionOptConfig {
    double mu_q = 2.0;              // step length in meters
    bool normalize_gradient = true; // unit-direction step of exactly mu_q meters
};

// Analytic gradient of the sum rate with respect to the UAV position.  Each
// received gain b(d,k) = h_d^H W v_k differentiates through the channel only,
// so grad b(d,k) = (grad h_d)^H (W v_k); the rest is the quotient rule per
// user.  Requires state.channels to be the cache for state.uav_position.
template <typename Scalar>
Vec3<Scalar> grad_position(const BeamformingState<Scalar>& st, const UserLayout<Scalar>& users,
                           const Surface<Scalar>& surface, Scalar reference_gain) {
    const CMatX<Scalar> wv = holographic_matrix(st.weights, st.phase) * st.precoder; // M x D
    const CMatX<Scalar> b = st.channels.vectors.adjoint() * wv;                      // D x D

    const Scalar inv_ln2 = Scalar(1) / std::log(Scalar(2));
    Vec3<Scalar> grad = Vec3<Scalar>::Zero();
    for (Index d = 0; d < users.num_users(); ++d) {
        const CMatX<Scalar> gh =
            grad_channel<Scalar>(st.uav_position, users.positions.row(d), surface, reference_gain);
        const CMatX<Scalar> gb = gh.adjoint() * wv; // 3 x D, column k = grad b(d,k)

        const Vec3<Scalar> grad_num = Scalar(2) * (gb.col(d) * std::conj(b(d, d))).real();
        Vec3<Scalar> grad_den = Vec3<Scalar>::Zero();
        Scalar interference = Scalar(0);
        for (Index k = 0; k < users.num_users(); ++k) {
            if (k == d)
                continue;
            grad_den += Scalar(2) * (gb.col(k) * std::conj(b(d, k))).real();
            interference += std::norm(b(d, k));
        }
        const Scalar num = std::norm(b(d, d));
        const Scalar den = interference + st.noise_power(d);
        grad += inv_ln2 * (den * grad_num - num * grad_den) / (den * (den + num));
    }
    return grad;
}

// Orthogonal projection onto the flight volume.  Altitude clamps; the xy
// part clamps per axis for rectangles and retracts radially for disks.
inline Vec3<double> project_position(const Vec3<double>& q, const Region& region) {
    Vec3<double> out = q;
    out.z() = std::min(std::max(q.z(), region.z_min), region.z_max);
    if (region.kind == Region::Kind::Rectangle) {
        out.x() = std::min(std::max(q.x(), region.x_min), region.x_max);
        out.y() = std::min(std::max(q.y(), region.y_min), region.y_max);
        return out;
    }
    const Vec2<double> delta = q.head<2>() - region.center;
    const double dist = delta.norm();
    if (dist > region.radius)
        out.head<2>() = region.center + (region.radius / dist) * delta;
    return out;
}

// One projected ascent step.  With normalization on, the pre-projection
// displacement is exactly mu_q meters whenever the gradient is nonzero.
inline Vec3<double> step_position(const Vec3<double>& q, const Vec3<double>& grad,
                                  const PositionOptConfig& cfg, const Region& region) {
    Vec3<double> direction = grad;
    if (cfg.normalize_gradient) {
        const double norm = grad.norm();
        direction = norm > 0.0 ? Vec3<double>(grad / norm) : Vec3<double>::Zero();
    }
    return project_position(q + cfg.mu_q * direction, region);
}

} // namespace holouav
