#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "ledsel/colorimetry.hpp"

using namespace ledsel;

namespace {

const std::string kData = std::string(LEDSEL_SOURCE_DIR) + "/data/";

// Brute-force sums of the published 5 nm table (every row, times 5 nm),
// computed outside the library with a plain loop over the text file.
constexpr double kEqualEnergyX = 106.85762604315003;
constexpr double kEqualEnergyY = 106.85663895000002;
constexpr double kEqualEnergyZ = 106.85770104494999;
// Same for the 10 deg table.
constexpr double kEqualEnergy10X = 116.64676563249996;
constexpr double kEqualEnergy10Y = 116.66018871450005;
constexpr double kEqualEnergy10Z = 116.67076338000001;

}  // namespace

TEST_CASE("chromaticity of simple tristimulus values")
{
    const auto c = chromaticity(Tristimulus(1, 1, 1));
    CHECK(c.x() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.y() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(chromaticity(Tristimulus(0, 0, 0)), ZeroTristimulus);

    // x = 95.047 / 303.930
    const auto d65 = chromaticity(Tristimulus(95.047, 100.0, 108.883));
    CHECK(std::abs(d65.x() - 0.31272661468101204) < 1e-5);
    CHECK(std::abs(d65.y() - 0.3290231303260619) < 1e-5);
    CHECK(std::abs(d65.x() - 0.31272) < 1e-5);
    CHECK(std::abs(d65.y() - 0.32903) < 1e-5);
}

TEST_CASE("luminous value is Y times calibration")
{
    CHECK(luminous_value(Tristimulus(0.3, 2.0, 0.1), 683.0) == 1366.0);
    CHECK(luminous_value(Tristimulus(1.0, 0.0, 1.0), 683.0) == 0.0);
    CHECK(luminous_value(Tristimulus(0.0, 1.0, 0.0), 1.0) == 1.0);
    CHECK_THROWS(luminous_value(Tristimulus(0.0, 1.0, 0.0), 0.0));
}

TEST_CASE("normalisation and scale invariance over random triples")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(1e-6, 1e3);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int i = 0; i < 20000; ++i) {
        const Tristimulus t(u(rng), u(rng), u(rng));
        const auto c = chromaticity(t);
        CHECK(std::abs(c.x() + c.y() + c.z() - 1.0) <= 1e-12);
        CHECK(c.valid());
        const auto s = chromaticity(scale(rng) * t);
        CHECK(std::abs(s.x() - c.x()) <= 1e-12);
        CHECK(std::abs(s.y() - c.y()) <= 1e-12);
    }
}

TEST_CASE("embedded CMF table")
{
    const auto& cmf = builtin_cmf(Observer::CIE1931_2deg);
    CHECK(cmf.size() == 81);
    CHECK(cmf.first_wavelength() == 380.0);
    CHECK(cmf.last_wavelength() == 780.0);
    CHECK(cmf.step() == 5.0);
    CHECK((cmf.values().array() >= 0.0).all());
    CHECK(cmf.at(555.0)(1) == 1.0);
    CHECK_THROWS_AS(cmf.at(556.0), InvalidTable);

    SUBCASE("checked-in text file matches the embedded table")
    {
        const auto file = read_cmf_table(kData + "cie1931_2deg_5nm.txt", Observer::CIE1931_2deg);
        CHECK(file.first_wavelength() == cmf.first_wavelength());
        CHECK(file.step() == cmf.step());
        CHECK(file.values() == cmf.values());
    }
    SUBCASE("write/read round trip")
    {
        std::stringstream ss;
        write_cmf_table(ss, cmf);
        const auto back = read_cmf_table(ss, Observer::CIE1931_2deg);
        CHECK(back.values() == cmf.values());
    }
    SUBCASE("malformed tables")
    {
        std::istringstream uneven("380 0 0 0\n385 0 0 0\n395 0 0 0\n");
        CHECK_THROWS_AS(read_cmf_table(uneven, Observer::CIE1931_2deg), InvalidTable);
        std::istringstream negative("380 0 0 0\n385 -1 0 0\n");
        CHECK_THROWS_AS(read_cmf_table(negative, Observer::CIE1931_2deg), InvalidTable);
        std::istringstream garbage("380 0 0 0\n385 a b c\n");
        CHECK_THROWS_AS(read_cmf_table(garbage, Observer::CIE1931_2deg), InvalidTable);
    }
}

TEST_CASE("embedded 10 degree table")
{
    const auto& cmf = builtin_cmf(Observer::CIE1964_10deg);
    CHECK(cmf.observer() == Observer::CIE1964_10deg);
    CHECK(cmf.size() == 81);
    CHECK(cmf.at(555.0)(0) == 0.616053);
    CHECK(cmf.at(555.0)(1) == 0.99911);
    CHECK(cmf.at(555.0)(2) == 0.001091);
    const auto file = read_cmf_table(kData + "cie1964_10deg_5nm.txt", Observer::CIE1964_10deg);
    CHECK(file.values() == cmf.values());

    const auto t = tristimulus(SpectralPowerDistribution::constant(380.0, 780.0), cmf);
    CHECK(t.X() == doctest::Approx(kEqualEnergy10X).epsilon(1e-12));
    CHECK(t.Y() == doctest::Approx(kEqualEnergy10Y).epsilon(1e-12));
    CHECK(t.Z() == doctest::Approx(kEqualEnergy10Z).epsilon(1e-12));
    const auto c = chromaticity(t);
    CHECK(std::abs(c.x() - 1.0 / 3.0) < 2e-3);
    CHECK(std::abs(c.y() - 1.0 / 3.0) < 2e-3);

    // same line, different observer, different colour
    const auto line = SpectralPowerDistribution::line(500.0);
    const auto c2 = chromaticity(tristimulus(line, Observer::CIE1931_2deg));
    const auto c10 = chromaticity(tristimulus(line, Observer::CIE1964_10deg));
    CHECK(std::abs(c2.x() - c10.x()) > 1e-3);
}

TEST_CASE("tristimulus integration")
{
    const auto& cmf = builtin_cmf(Observer::CIE1931_2deg);

    SUBCASE("monochromatic line at 555 nm is the table row times the step")
    {
        const auto t = tristimulus(SpectralPowerDistribution::line(555.0), cmf);
        CHECK(t.X() == doctest::Approx(5.0 * 0.5120501).epsilon(1e-14));
        CHECK(t.Y() == doctest::Approx(5.0 * 1.0).epsilon(1e-14));
        CHECK(t.Z() == doctest::Approx(5.0 * 0.005749999).epsilon(1e-14));
    }
    SUBCASE("zero spectrum")
    {
        const SpectralPowerDistribution zero(Eigen::Vector2d(380, 780), Eigen::Vector2d(0, 0));
        const auto t = tristimulus(zero, cmf);
        CHECK(t.vector().isZero(0.0));
        CHECK_THROWS_AS(chromaticity(t), ZeroTristimulus);
    }
    SUBCASE("equal-energy spectrum against brute-force table sums")
    {
        const auto t = tristimulus(SpectralPowerDistribution::constant(380.0, 780.0), cmf);
        CHECK(t.X() == doctest::Approx(kEqualEnergyX).epsilon(1e-12));
        CHECK(t.Y() == doctest::Approx(kEqualEnergyY).epsilon(1e-12));
        CHECK(t.Z() == doctest::Approx(kEqualEnergyZ).epsilon(1e-12));
        const auto c = chromaticity(t);
        CHECK(std::abs(c.x() - 1.0 / 3.0) < 2e-3);
        CHECK(std::abs(c.y() - 1.0 / 3.0) < 2e-3);
    }
    SUBCASE("support outside the CMF range")
    {
        const SpectralPowerDistribution uv(Eigen::Vector2d(250, 300), Eigen::Vector2d(1, 1));
        CHECK_THROWS_AS(tristimulus(uv, cmf), EmptyOverlap);
        const SpectralPowerDistribution ir(Eigen::Vector2d(800, 1100), Eigen::Vector2d(1, 1));
        CHECK_THROWS_AS(tristimulus(ir, cmf), EmptyOverlap);
    }
    SUBCASE("partial overlap counts only the covered grid")
    {
        const SpectralPowerDistribution tail(Eigen::Vector2d(700, 900), Eigen::Vector2d(1, 1));
        const auto t = tristimulus(tail, cmf);
        double y = 0.0;
        for (double wl = 700; wl <= 780; wl += 5) {
            y += 5.0 * cmf.at(wl)(1);
        }
        CHECK(t.Y() == doctest::Approx(y).epsilon(1e-12));
    }
}

TEST_CASE("spectral locus: monochromatic chromaticity equals normalised CMF row")
{
    const auto& cmf = builtin_cmf(Observer::CIE1931_2deg);
    const Eigen::VectorXd grid = cmf.grid();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Eigen::Vector3d row = cmf.values().row(i).transpose();
        const auto c = chromaticity(tristimulus(SpectralPowerDistribution::line(grid(i)), cmf));
        CHECK(std::abs(c.x() - row(0) / row.sum()) < 1e-9);
        CHECK(std::abs(c.y() - row(1) / row.sum()) < 1e-9);
        CHECK(locus_point(cmf, i).x() == doctest::Approx(c.x()).epsilon(1e-12));
    }
}

TEST_CASE("tristimulus is linear in the spectrum")
{
    const auto& cmf = builtin_cmf(Observer::CIE1931_2deg);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> p(0.0, 2.0);
    std::uniform_real_distribution<double> coef(0.0, 10.0);
    // irregular grid, deliberately off the CMF grid
    const Eigen::VectorXd wl = Eigen::VectorXd::LinSpaced(97, 371.3, 791.3);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd p1(wl.size()), p2(wl.size());
        for (Eigen::Index i = 0; i < wl.size(); ++i) {
            p1(i) = p(rng);
            p2(i) = p(rng);
        }
        const double a = coef(rng);
        const double b = coef(rng);
        const auto t1 = tristimulus(SpectralPowerDistribution(wl, p1), cmf);
        const auto t2 = tristimulus(SpectralPowerDistribution(wl, p2), cmf);
        const auto tc = tristimulus(SpectralPowerDistribution(wl, a * p1 + b * p2), cmf);
        const Eigen::Vector3d expect = (a * t1 + b * t2).vector();
        CHECK((tc.vector() - expect).norm() <= 1e-9 * expect.norm());
    }
}

TEST_CASE("SPD invariants")
{
    CHECK_THROWS_AS(SpectralPowerDistribution(Eigen::VectorXd::Constant(1, 500), Eigen::VectorXd::Constant(1, 1)),
                    InvalidSpd);
    CHECK_THROWS_AS(SpectralPowerDistribution(Eigen::Vector2d(500, 500), Eigen::Vector2d(1, 1)), InvalidSpd);
    CHECK_THROWS_AS(SpectralPowerDistribution(Eigen::Vector2d(500, 490), Eigen::Vector2d(1, 1)), InvalidSpd);
    CHECK_THROWS_AS(SpectralPowerDistribution(Eigen::Vector2d(500, 510), Eigen::Vector2d(1, -1)), InvalidSpd);
    CHECK_THROWS_AS(SpectralPowerDistribution(Eigen::Vector2d(150, 510), Eigen::Vector2d(1, 1)), InvalidSpd);
    CHECK_THROWS_AS(SpectralPowerDistribution(Eigen::Vector2d(500, 1300), Eigen::Vector2d(1, 1)), InvalidSpd);

    const SpectralPowerDistribution s(Eigen::Vector3d(400, 410, 430), Eigen::Vector3d(1, 3, 0));
    CHECK(s(399.9) == 0.0);
    CHECK(s(405) == doctest::Approx(2.0));
    CHECK(s(420) == doctest::Approx(1.5));
    CHECK(s(430) == 0.0);
    CHECK(s(430.1) == 0.0);
}

TEST_CASE("SPD CSV")
{
    std::istringstream good("wavelength_nm,power\n500,0.5\n510, 1.0\n\n520,0.25\n");
    const auto s = read_spd_csv(good);
    CHECK(s.size() == 3);
    CHECK(s(510) == 1.0);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_spd_csv(empty), InvalidSpd);
    std::istringstream header_only("nm,power\n");
    CHECK_THROWS_AS(read_spd_csv(header_only), InvalidSpd);
    std::istringstream bad("nm,power\n500,1\n510,abc\n");
    try {
        read_spd_csv(bad);
        FAIL("expected InvalidSpd");
    } catch (const InvalidSpd& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    std::stringstream rt;
    write_spd_csv(rt, s);
    const auto back = read_spd_csv(rt);
    CHECK(back.wavelengths() == s.wavelengths());
    CHECK(back.power() == s.power());
}

TEST_CASE("ellipse membership")
{
    const MacAdamEllipse e(Chromaticity(0.3, 0.3), 0.004, 0.001, 0.6);
    const Eigen::Vector2d u = e.major_axis();

    CHECK(in_ellipse(e.center(), e, 1e-9));
    CHECK(in_ellipse(Chromaticity(e.center().vector() + e.semi_major() * u), e, 1.0));
    const Chromaticity far(e.center().vector() + 2.0 * e.semi_major() * u);
    CHECK_FALSE(in_ellipse(far, e, 1.0));
    CHECK(in_ellipse(far, e, 2.0));
    CHECK_THROWS(in_ellipse(far, e, 0.0));

    CHECK_THROWS_AS(MacAdamEllipse(Chromaticity(0.3, 0.3), 0.001, 0.002, 0.0), InvalidEllipse);
    CHECK_THROWS_AS(MacAdamEllipse(Chromaticity(0.3, 0.3), 0.001, 0.0, 0.0), InvalidEllipse);
    CHECK(MacAdamEllipse(Chromaticity(0.3, 0.3), 0.002, 0.001, -0.5).theta() ==
          doctest::Approx(std::numbers::pi - 0.5));
    CHECK(MacAdamEllipse(Chromaticity(0.3, 0.3), 0.002, 0.001, std::numbers::pi).theta() == 0.0);

    // metric and steps agree
    const Eigen::Vector2d d(0.0013, -0.0021);
    CHECK(std::sqrt(d.dot(e.metric() * d)) == doctest::Approx(e.steps(d)).epsilon(1e-12));
}

TEST_CASE("in_ellipse is monotone in k")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> off(-0.01, 0.01);
    std::uniform_real_distribution<double> kk(0.01, 10.0);
    const auto& set = macadam_1942();
    for (int i = 0; i < 20000; ++i) {
        const auto& e = set[static_cast<std::size_t>(i) % set.size()];
        const Chromaticity p(e.center().x() + off(rng), e.center().y() + off(rng));
        double k1 = kk(rng);
        double k2 = kk(rng);
        if (k1 > k2) {
            std::swap(k1, k2);
        }
        if (in_ellipse(p, e, k1)) {
            CHECK(in_ellipse(p, e, k2));
        }
    }
}

TEST_CASE("MacAdam dataset")
{
    const auto& set = macadam_1942();
    REQUIRE(set.size() == 25);
    for (const auto& e : set) {
        CHECK(e.center().valid());
        CHECK(e.semi_major() >= e.semi_minor());
        CHECK(e.theta() >= 0.0);
        CHECK(e.theta() < std::numbers::pi);
    }

    SUBCASE("checked-in text file matches the embedded set")
    {
        const auto file = read_ellipses(kData + "macadam1942.txt");
        REQUIRE(file.size() == set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(file[i].center() == set[i].center());
            CHECK(file[i].semi_major() == set[i].semi_major());
            CHECK(file[i].semi_minor() == set[i].semi_minor());
            CHECK(file[i].theta() == doctest::Approx(set[i].theta()).epsilon(1e-15));
        }
    }

    SUBCASE("green ellipses are much larger than blue/violet ones")
    {
        double green = 0.0;
        double blue = 0.0;
        int ng = 0;
        int nb = 0;
        for (const auto& e : set) {
            if (e.center().y() > 0.5) {
                green += e.area();
                ++ng;
            }
            if (e.center().x() < 0.2 && e.center().y() < 0.2) {
                blue += e.area();
                ++nb;
            }
        }
        REQUIRE(ng > 0);
        REQUIRE(nb > 0);
        CHECK(green / ng >= 3.0 * (blue / nb));
    }

    SUBCASE("bad rows")
    {
        std::istringstream bad("0.3 0.3 0.001 0.002 10\n");
        CHECK_THROWS_AS(read_ellipses(bad), InvalidEllipse);
        std::istringstream outside("0.9 0.3 0.002 0.001 10\n");
        CHECK_THROWS_AS(read_ellipses(outside), InvalidEllipse);
    }
}

TEST_CASE("macadam_steps")
{
    const auto& set = macadam_1942();
    const Chromaticity p(0.305, 0.323);
    CHECK(macadam_steps(p, p, set) == 0.0);

    const auto& e = set[nearest_ellipse(p, set)];
    const Chromaticity minor_end(p.vector() + e.semi_minor() * e.minor_axis());
    CHECK(macadam_steps(p, minor_end, set) == doctest::Approx(1.0).epsilon(1e-12));
    const Chromaticity major_end(p.vector() + e.semi_major() * e.major_axis());
    CHECK(macadam_steps(p, major_end, set) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS(macadam_steps(p, p, std::span<const MacAdamEllipse>{}));
}

TEST_CASE("macadam_steps is symmetric whenever both points share a nearest ellipse")
{
    const auto& set = macadam_1942();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> off(-0.03, 0.03);
    int same = 0;
    int different = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            for (int k = 0; k < 20; ++k) {
                const Chromaticity p(set[i].center().x() + off(rng), set[i].center().y() + off(rng));
                const Chromaticity q(set[j].center().x() + off(rng), set[j].center().y() + off(rng));
                const double pq = macadam_steps(p, q, set);
                const double qp = macadam_steps(q, p, set);
                if (nearest_ellipse(p, set) == nearest_ellipse(q, set)) {
                    ++same;
                    CHECK(pq == doctest::Approx(qp).epsilon(1e-12));
                } else if (std::abs(pq - qp) > 1e-9 * std::max(pq, qp)) {
                    ++different;
                }
            }
        }
    }
    CHECK(same > 0);
    CHECK(different > 0);
}
