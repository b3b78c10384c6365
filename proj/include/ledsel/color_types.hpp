#pragma once

#include <Eigen/Core>

#include <string_view>

#include "ledsel/errors.hpp"

namespace ledsel {

enum class Observer { CIE1931_2deg, CIE1964_10deg };

std::string_view to_string(Observer observer);
Observer observer_from_string(std::string_view name);

/// CIE X, Y, Z. Relative units; Y carries the photometric weight.
template <typename Scalar>
class BasicTristimulus {
public:
    using Vector = Eigen::Matrix<Scalar, 3, 1>;

    BasicTristimulus() : xyz_(Vector::Zero()) {}
    BasicTristimulus(Scalar X, Scalar Y, Scalar Z) : xyz_(X, Y, Z) {}
    template <typename Derived>
    explicit BasicTristimulus(const Eigen::MatrixBase<Derived>& xyz) : xyz_(xyz) {}

    Scalar X() const { return xyz_(0); }
    Scalar Y() const { return xyz_(1); }
    Scalar Z() const { return xyz_(2); }
    Scalar sum() const { return xyz_.sum(); }
    const Vector& vector() const { return xyz_; }

    bool non_negative() const { return (xyz_.array() >= Scalar(0)).all(); }

    friend BasicTristimulus operator*(Scalar c, const BasicTristimulus& t) { return BasicTristimulus(c * t.xyz_); }
    friend BasicTristimulus operator+(const BasicTristimulus& a, const BasicTristimulus& b)
    {
        return BasicTristimulus(a.xyz_ + b.xyz_);
    }

private:
    Vector xyz_;
};

/// CIE 1931 (x, y). z = 1 - x - y is derived, never stored.
///
/// Values computed from non-negative tristimulus always land in the closed
/// simplex; `valid()` checks the strict interior used for bin vertices.
template <typename Scalar>
class BasicChromaticity {
public:
    using Vector = Eigen::Matrix<Scalar, 2, 1>;

    BasicChromaticity() : xy_(Vector::Zero()) {}
    BasicChromaticity(Scalar x, Scalar y) : xy_(x, y) {}
    template <typename Derived>
    explicit BasicChromaticity(const Eigen::MatrixBase<Derived>& xy) : xy_(xy) {}

    Scalar x() const { return xy_(0); }
    Scalar y() const { return xy_(1); }
    Scalar z() const { return Scalar(1) - xy_(0) - xy_(1); }
    const Vector& vector() const { return xy_; }

    bool valid() const { return xy_(0) > Scalar(0) && xy_(1) > Scalar(0) && xy_(0) + xy_(1) < Scalar(1); }

    friend bool operator==(const BasicChromaticity& a, const BasicChromaticity& b) { return a.xy_ == b.xy_; }

private:
    Vector xy_;
};

using Tristimulus = BasicTristimulus<double>;
using Chromaticity = BasicChromaticity<double>;

/// Projects an XYZ expression onto the unit plane. No checks; callers
/// guarantee a positive sum.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> project_xy(const Eigen::MatrixBase<Derived>& xyz)
{
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
    return xyz.template head<2>() / xyz.sum();
}

template <typename Scalar>
BasicChromaticity<Scalar> chromaticity(const BasicTristimulus<Scalar>& t)
{
    if (!(t.sum() > Scalar(0))) {
        throw ZeroTristimulus();
    }
    return BasicChromaticity<Scalar>(project_xy(t.vector()));
}

/// Photometric scalar: Y times a lumens-per-Y calibration factor.
template <typename Scalar>
Scalar luminous_value(const BasicTristimulus<Scalar>& t, Scalar lumens_per_y)
{
    if (!(lumens_per_y > Scalar(0))) {
        throw Error("luminous calibration must be positive");
    }
    return t.Y() * lumens_per_y;
}

}  // namespace ledsel
