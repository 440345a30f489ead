// SPDX-License-Identifier: Apache-2.0
//
// Image measurements: profiles through a point, FWHM, local maxima and image
// similarity. Widths interpolate linearly between grid samples.
#pragma once

#include <cstddef>
#include <vector>

#include "xcorr/imaging.hpp"

namespace xcorr {

enum class Axis { u, v };

struct Profile {
    std::vector<double> coords;  // metres along the axis, window-relative
    std::vector<double> values;
};

// The 1-D cut through (iu, iv) along `axis`.
Profile profile_through(const ImageGrid& image, Axis axis, int iu, int iv);

struct Width {
    double value = 0.0;
    bool truncated = false;  // the level was not crossed before a grid edge
};

// Width of the lobe around values[peak] at `level` times its height. A side
// that runs into the grid edge contributes its distance to the edge and sets
// `truncated`.
Width full_width(const std::vector<double>& coords, const std::vector<double>& values,
                 std::size_t peak, double level = 0.5);

// FWHM along `axis` of the profile through the global peak.
Width image_fwhm(const ImageGrid& image, Axis axis);

struct GridPeak {
    int iu = 0;
    int iv = 0;
    double u = 0.0;  // metres
    double v = 0.0;
    double value = 0.0;
};

// Index of the largest value; lowest index on ties.
GridPeak global_peak(const ImageGrid& image);

// Points above `threshold` that are maxima of their 8-neighbourhood. On a
// plateau only the first point in scan order is reported.
std::vector<GridPeak> local_maxima(const ImageGrid& image, double threshold);

// <a, b> / (|a| |b|) over the grid values. Both images must share a grid.
double similarity(const ImageGrid& a, const ImageGrid& b);

}  // namespace xcorr
