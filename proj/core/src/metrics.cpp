// SPDX-License-Identifier: Apache-2.0
#include "xcorr/metrics.hpp"

#include <cmath>

#include "xcorr/errors.hpp"

namespace xcorr {

Profile profile_through(const ImageGrid& image, Axis axis, int iu, int iv) {
    const ImageWindow& w = image.window;
    if (iu < 0 || iu >= w.count_u || iv < 0 || iv >= w.count_v) throw DomainError("profile anchor outside the grid");
    Profile p;
    if (axis == Axis::u) {
        for (int i = 0; i < w.count_u; ++i) {
            p.coords.push_back(w.coord_u(i));
            p.values.push_back(image.at(i, iv));
        }
    } else {
        for (int i = 0; i < w.count_v; ++i) {
            p.coords.push_back(w.coord_v(i));
            p.values.push_back(image.at(iu, i));
        }
    }
    return p;
}

Width full_width(const std::vector<double>& coords, const std::vector<double>& values,
                 std::size_t peak, double level) {
    if (coords.size() != values.size() || values.empty()) throw DomainError("profile is empty or ragged");
    if (peak >= values.size()) throw DomainError("peak index out of range");
    const double cut = level * values[peak];
    Width w;
    auto crossing = [&](long step) {
        long i = static_cast<long>(peak);
        const long n = static_cast<long>(values.size());
        while (true) {
            const long j = i + step;
            if (j < 0 || j >= n) {
                w.truncated = true;
                return coords[static_cast<std::size_t>(i)];
            }
            const double a = values[static_cast<std::size_t>(i)];
            const double b = values[static_cast<std::size_t>(j)];
            if (b < cut) {
                const double t = (a - cut) / (a - b);
                return coords[static_cast<std::size_t>(i)] +
                       t * (coords[static_cast<std::size_t>(j)] - coords[static_cast<std::size_t>(i)]);
            }
            i = j;
        }
    };
    const double hi = crossing(+1);
    const double lo = crossing(-1);
    w.value = std::abs(hi - lo);
    return w;
}

GridPeak global_peak(const ImageGrid& image) {
    const ImageWindow& w = image.window;
    GridPeak best;
    best.value = -1.0;
    for (int iv = 0; iv < w.count_v; ++iv) {
        for (int iu = 0; iu < w.count_u; ++iu) {
            const double x = image.at(iu, iv);
            if (x > best.value) best = {iu, iv, w.coord_u(iu), w.coord_v(iv), x};
        }
    }
    return best;
}

Width image_fwhm(const ImageGrid& image, Axis axis) {
    const GridPeak p = global_peak(image);
    const Profile prof = profile_through(image, axis, p.iu, p.iv);
    return full_width(prof.coords, prof.values, static_cast<std::size_t>(axis == Axis::u ? p.iu : p.iv));
}

std::vector<GridPeak> local_maxima(const ImageGrid& image, double threshold) {
    const ImageWindow& w = image.window;
    std::vector<GridPeak> out;
    for (int iv = 0; iv < w.count_v; ++iv) {
        for (int iu = 0; iu < w.count_u; ++iu) {
            const double x = image.at(iu, iv);
            if (!(x > threshold)) continue;
            bool is_max = true;
            for (int dv = -1; dv <= 1 && is_max; ++dv) {
                for (int du = -1; du <= 1; ++du) {
                    if (du == 0 && dv == 0) continue;
                    const int ju = iu + du;
                    const int jv = iv + dv;
                    if (ju < 0 || ju >= w.count_u || jv < 0 || jv >= w.count_v) continue;
                    const double y = image.at(ju, jv);
                    // Earlier neighbours in scan order must be strictly lower.
                    const bool earlier = dv < 0 || (dv == 0 && du < 0);
                    if (y > x || (earlier && y == x)) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) out.push_back({iu, iv, w.coord_u(iu), w.coord_v(iv), x});
        }
    }
    return out;
}

double similarity(const ImageGrid& a, const ImageGrid& b) {
    if (a.values.size() != b.values.size()) throw DomainError("images live on different grids");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (Eigen::Index i = 0; i < a.values.size(); ++i) {
        ab += a.values[i] * b.values[i];
        aa += a.values[i] * a.values[i];
        bb += b.values[i] * b.values[i];
    }
    if (aa == 0.0 || bb == 0.0) throw DomainError("similarity of a zero image");
    // One loop and sqrt(aa * bb) so that identical images give exactly 1.
    return ab / std::sqrt(aa * bb);
}

}  // namespace xcorr
