#pragma once

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "ledsel/color_types.hpp"

namespace ledsel {

/// Region of visually indistinguishable chromaticities around `center`.
/// Semi-axes are in chromaticity units; `theta` is the major-axis angle
/// from the +x axis, normalised into [0, pi).
template <typename Scalar>
class BasicMacAdamEllipse {
public:
    using Vector = Eigen::Matrix<Scalar, 2, 1>;
    using Matrix = Eigen::Matrix<Scalar, 2, 2>;

    BasicMacAdamEllipse(BasicChromaticity<Scalar> center, Scalar semi_major, Scalar semi_minor, Scalar theta)
        : center_(center), a_(semi_major), b_(semi_minor), theta_(normalize_angle(theta))
    {
        if (!(b_ > Scalar(0)) || !(a_ >= b_)) {
            throw InvalidEllipse("ellipse axes must satisfy a >= b > 0");
        }
        if (!std::isfinite(theta_)) {
            throw InvalidEllipse("ellipse orientation must be finite");
        }
    }

    const BasicChromaticity<Scalar>& center() const { return center_; }
    Scalar semi_major() const { return a_; }
    Scalar semi_minor() const { return b_; }
    Scalar theta() const { return theta_; }
    Scalar area() const { return std::numbers::pi_v<Scalar> * a_ * b_; }

    Vector major_axis() const { return Vector(std::cos(theta_), std::sin(theta_)); }
    Vector minor_axis() const { return Vector(-std::sin(theta_), std::cos(theta_)); }

    /// Quadratic form G with steps(d)^2 = d' G d.
    Matrix metric() const
    {
        Matrix axes;
        axes.col(0) = major_axis();
        axes.col(1) = minor_axis();
        const Vector inv_sq(Scalar(1) / (a_ * a_), Scalar(1) / (b_ * b_));
        return axes * inv_sq.asDiagonal() * axes.transpose();
    }

    /// Ellipse-normalised length of an offset: 1 on the boundary.
    template <typename Derived>
    Scalar steps(const Eigen::MatrixBase<Derived>& offset) const
    {
        const Scalar u = offset.dot(major_axis()) / a_;
        const Scalar v = offset.dot(minor_axis()) / b_;
        return std::sqrt(u * u + v * v);
    }

    BasicMacAdamEllipse translated_to(const BasicChromaticity<Scalar>& p) const
    {
        return BasicMacAdamEllipse(p, a_, b_, theta_);
    }

    /// Boundary point at parametric angle t (major axis at t = 0).
    BasicChromaticity<Scalar> boundary_point(Scalar t) const
    {
        return BasicChromaticity<Scalar>(center_.vector() + a_ * std::cos(t) * major_axis() +
                                         b_ * std::sin(t) * minor_axis());
    }

private:
    static Scalar normalize_angle(Scalar theta)
    {
        const Scalar pi = std::numbers::pi_v<Scalar>;
        Scalar t = std::fmod(theta, pi);
        if (t < Scalar(0)) {
            t += pi;
        }
        return t >= pi ? Scalar(0) : t;
    }

    BasicChromaticity<Scalar> center_;
    Scalar a_;
    Scalar b_;
    Scalar theta_;
};

using MacAdamEllipse = BasicMacAdamEllipse<double>;

/// Closed membership test for the ellipse scaled by k about its center.
template <typename Scalar>
bool in_ellipse(const BasicChromaticity<Scalar>& p, const BasicMacAdamEllipse<Scalar>& e, Scalar k)
{
    if (!(k > Scalar(0))) {
        throw Error("ellipse scale k must be positive");
    }
    const Eigen::Matrix<Scalar, 2, 1> d = p.vector() - e.center().vector();
    const Scalar u = d.dot(e.major_axis()) / e.semi_major();
    const Scalar v = d.dot(e.minor_axis()) / e.semi_minor();
    return u * u + v * v <= k * k;
}

/// Index of the ellipse whose center is closest to p; ties go to the lowest
/// index.
std::size_t nearest_ellipse(const Chromaticity& p, std::span<const MacAdamEllipse> ellipses);

/// MacAdam step count from p to q, measured with the ellipse nearest to p
/// translated onto p. Not symmetric in general.
double macadam_steps(const Chromaticity& p, const Chromaticity& q, std::span<const MacAdamEllipse> ellipses);

/// The 25 ellipses of MacAdam (1942), observer CIE 1931 2 deg.
const std::vector<MacAdamEllipse>& macadam_1942();

/// Plain-text table, one ellipse per row:
/// `center_x center_y semi_major semi_minor theta_deg` (commas or
/// whitespace; '#' comments). Axes in chromaticity units.
std::vector<MacAdamEllipse> read_ellipses(std::istream& in);
std::vector<MacAdamEllipse> read_ellipses(const std::filesystem::path& path);
void write_ellipses(std::ostream& out, std::span<const MacAdamEllipse> ellipses);

}  // namespace ledsel
