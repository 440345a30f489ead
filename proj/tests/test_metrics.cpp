// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "xcorr/errors.hpp"
#include "xcorr/metrics.hpp"

using namespace xcorr;
using Catch::Approx;

namespace {

ImageWindow grid(int n, double half) {
    ImageWindow w;
    w.center_at_reference = {0.0, 0.0, 5e5};
    w.count_u = w.count_v = n;
    w.half_extent_u = w.half_extent_v = half;
    return w;
}

ImageGrid image_from(const ImageWindow& w, const std::function<double(double, double)>& f) {
    Eigen::VectorXd raw(static_cast<Eigen::Index>(w.size()));
    for (int iv = 0; iv < w.count_v; ++iv)
        for (int iu = 0; iu < w.count_u; ++iu) raw[static_cast<Eigen::Index>(w.index(iu, iv))] = f(w.coord_u(iu), w.coord_v(iv));
    return make_image(w, raw);
}

}  // namespace

TEST_CASE("full width of a triangle is exact", "[metrics]") {
    // Linear interpolation is exact on a piecewise-linear profile.
    std::vector<double> x, y;
    for (int i = -10; i <= 10; ++i) {
        x.push_back(0.1 * i);
        y.push_back(std::max(0.0, 1.0 - std::abs(0.1 * i) / 0.73));
    }
    const Width w = full_width(x, y, 10);
    CHECK_FALSE(w.truncated);
    CHECK(w.value == Approx(0.73).epsilon(1e-12));
    CHECK(full_width(x, y, 10, 0.25).value == Approx(1.5 * 0.73).epsilon(1e-12));
}

TEST_CASE("full width of a Gaussian", "[metrics]") {
    const double sigma = 0.05;
    std::vector<double> x, y;
    for (int i = -200; i <= 200; ++i) {
        x.push_back(0.001 * i);
        y.push_back(std::exp(-0.5 * (0.001 * i) * (0.001 * i) / (sigma * sigma)));
    }
    CHECK(full_width(x, y, 200).value == Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma).epsilon(1e-4));
}

TEST_CASE("full width running into the edge is flagged", "[metrics]") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{0.9, 1.0, 0.8, 0.2};
    const Width w = full_width(x, y, 1);
    CHECK(w.truncated);
    // Left side reaches the edge (distance 1); right side crosses 0.5 at 2.5.
    CHECK(w.value == Approx(2.5));
}

TEST_CASE("image FWHM along each axis", "[metrics]") {
    const ImageWindow w = grid(81, 0.2);
    const double su = 0.02, sv = 0.04;
    const ImageGrid img = image_from(w, [&](double u, double v) {
        return std::exp(-0.5 * (u * u / (su * su) + v * v / (sv * sv)));
    });
    const double k = 2.0 * std::sqrt(2.0 * std::log(2.0));
    CHECK(image_fwhm(img, Axis::u).value == Approx(k * su).epsilon(0.01));
    CHECK(image_fwhm(img, Axis::v).value == Approx(k * sv).epsilon(0.01));

    const Profile p = profile_through(img, Axis::v, 40, 40);
    REQUIRE(p.values.size() == 81);
    CHECK(p.coords.front() == Approx(-0.2));
    CHECK(p.values[40] == 1.0);
}

TEST_CASE("peaks and local maxima", "[metrics]") {
    const ImageWindow w = grid(41, 0.2);
    auto bump = [](double u, double v, double cu, double cv, double a) {
        return a * std::exp(-((u - cu) * (u - cu) + (v - cv) * (v - cv)) / (2.0 * 0.01 * 0.01));
    };
    const ImageGrid img = image_from(w, [&](double u, double v) {
        return bump(u, v, -0.05, -0.03, 1.0) + bump(u, v, 0.05, -0.03, 0.8) + bump(u, v, -0.05, 0.03, 0.6) +
               bump(u, v, 0.05, 0.03, 0.3);
    });
    const GridPeak g = global_peak(img);
    CHECK(g.u == Approx(-0.05));
    CHECK(g.v == Approx(-0.03));
    CHECK(g.value == 1.0);

    CHECK(local_maxima(img, 0.5).size() == 3);
    CHECK(local_maxima(img, 0.2).size() == 4);
    CHECK(local_maxima(img, 0.9).size() == 1);

    // A plateau reports only its first point.
    const ImageGrid flat = image_from(w, [](double, double) { return 1.0; });
    const auto m = local_maxima(flat, 0.5);
    REQUIRE(m.size() == 1);
    CHECK(m[0].iu == 0);
    CHECK(m[0].iv == 0);
}

TEST_CASE("similarity", "[metrics]") {
    const ImageWindow w = grid(21, 0.2);
    const ImageGrid a = image_from(w, [](double u, double v) { return std::exp(-30.0 * (u * u + v * v)); });
    const ImageGrid b = image_from(w, [](double u, double v) { return std::exp(-30.0 * ((u - 0.1) * (u - 0.1) + v * v)); });
    CHECK(similarity(a, a) == 1.0);
    const double ab = similarity(a, b);
    CHECK(ab < 1.0);
    CHECK(ab > 0.0);
    CHECK(similarity(b, a) == ab);

    const ImageGrid other = image_from(grid(11, 0.2), [](double, double) { return 1.0; });
    CHECK_THROWS_AS(similarity(a, other), DomainError);
}
