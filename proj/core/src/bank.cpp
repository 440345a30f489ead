// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <mutex>

#include <cblas.h>

#include "phase_kernel.hpp"
#include "xcorr/errors.hpp"
#include "xcorr/imaging.hpp"
#include "xcorr/parallel.hpp"

extern "C" void openblas_set_num_threads(int);

namespace xcorr {

namespace {

// Rows per tile of the pattern. Tiles are fixed so that the BLAS calls, and
// therefore the rounding, do not depend on how many workers run them.
constexpr Eigen::Index kTile = 256;

// Grid points per migration block.
constexpr int kGridBlock = 64;

void single_threaded_blas() {
    static std::once_flag once;
    std::call_once(once, [] { openblas_set_num_threads(1); });
}

struct FrequencyLayout {
    double first = 0.0;
    double step = 0.0;
    bool uniform = true;
};

FrequencyLayout frequency_layout(const std::vector<double>& w) {
    FrequencyLayout out;
    if (w.empty()) return out;
    out.first = w.front();
    if (w.size() == 1) return out;
    out.step = (w.back() - w.front()) / static_cast<double>(w.size() - 1);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double expect = out.first + static_cast<double>(i) * out.step;
        if (std::abs(w[i] - expect) > 1e-12 * std::abs(w[i])) out.uniform = false;
    }
    return out;
}

// Writes the K x N_omega bank block of pulse s into `out` (leading dimension ld).
void migrate_pulse_into(const SignalSet& data, const ImageWindow& window, std::size_t s,
                        std::complex<double>* out, Eigen::Index ld) {
    const auto& geo = data.geometry();
    const double c0 = geo.c0;
    const double ts = data.pulse_times()[s];
    const Vec3 center = window.center_at(ts);
    const Vec3& v = window.center_velocity;
    const auto K = static_cast<int>(window.size());
    const auto nw = static_cast<int>(data.frequency_count());
    const FrequencyLayout layout = frequency_layout(data.frequencies());

    std::vector<Vec3> y(static_cast<std::size_t>(K));
    std::vector<double> emitter_leg(static_cast<std::size_t>(K));
    const Vec3 ae = center - geo.emitter.position;
    for (int k = 0; k < K; ++k) {
        y[static_cast<std::size_t>(k)] = window.offset(static_cast<std::size_t>(k));
        emitter_leg[static_cast<std::size_t>(k)] = distance_increment(ae, y[static_cast<std::size_t>(k)]);
    }

    // Offset delays for every receiver, [receiver][grid point]. Rows are padded
    // to whole lanes; padded entries carry zero delay and are never read back.
    const std::size_t nr = data.receiver_count();
    const int Kp = (K + detail::kLanes - 1) / detail::kLanes * detail::kLanes;
    std::vector<double> delay(nr * static_cast<std::size_t>(Kp), 0.0);
    for (std::size_t r = 0; r < nr; ++r) {
        const Vec3& xr = geo.receivers[r];
        const double gamma = doppler_factor(center, geo.emitter.position, xr, v, c0);
        const Vec3 a = center - xr;
        double* dr = delay.data() + r * static_cast<std::size_t>(Kp);
        for (int k = 0; k < K; ++k) {
            dr[k] = (emitter_leg[static_cast<std::size_t>(k)] + gamma * distance_increment(a, y[static_cast<std::size_t>(k)])) / c0;
        }
    }

    std::vector<const std::complex<double>*> traces(nr);
    std::vector<const double*> delays(nr);
    for (std::size_t r = 0; r < nr; ++r) traces[r] = data.trace(s, r);

    // Grid blocks outermost so the accumulator block stays in cache while
    // every receiver is folded into it.
    std::vector<double> acc_re(static_cast<std::size_t>(Kp) * nw, 0.0);
    std::vector<double> acc_im(static_cast<std::size_t>(Kp) * nw, 0.0);
    const int nri = static_cast<int>(nr);
    for (int k0 = 0; k0 < Kp; k0 += kGridBlock) {
        const int nk = std::min(kGridBlock, Kp - k0);
        for (std::size_t r = 0; r < nr; ++r) delays[r] = delay.data() + r * static_cast<std::size_t>(Kp) + k0;
        if (layout.uniform) {
            detail::accumulate_block(delays.data(), traces.data(), nri, nk, layout.first, layout.step, nw,
                                     acc_re.data() + k0, acc_im.data() + k0, Kp);
        } else {
            // Irregular frequency grids take one single-frequency pass each.
            std::vector<const std::complex<double>*> sample(nr);
            for (int i = 0; i < nw; ++i) {
                for (std::size_t r = 0; r < nr; ++r) sample[r] = traces[r] + i;
                const std::size_t off = static_cast<std::size_t>(i) * Kp + k0;
                detail::accumulate_block(delays.data(), sample.data(), nri, nk,
                                         data.frequencies()[static_cast<std::size_t>(i)], 0.0, 1,
                                         acc_re.data() + off, acc_im.data() + off, Kp);
            }
        }
    }
    for (int i = 0; i < nw; ++i) {
        std::complex<double>* col = out + static_cast<Eigen::Index>(i) * ld;
        const double* pr = acc_re.data() + static_cast<std::size_t>(i) * Kp;
        const double* pi = acc_im.data() + static_cast<std::size_t>(i) * Kp;
        for (int k = 0; k < K; ++k) col[k] = {pr[k], pi[k]};
    }
}

struct Tile {
    Eigen::Index row0, rows, col0, cols;
};

std::vector<Tile> lower_tiles(Eigen::Index k) {
    std::vector<Tile> tiles;
    for (Eigen::Index i = 0; i < k; i += kTile) {
        for (Eigen::Index j = 0; j <= i; j += kTile) {
            tiles.push_back({i, std::min(kTile, k - i), j, std::min(kTile, k - j)});
        }
    }
    return tiles;
}

// X(lower) += B B^H over the fixed tiling.
void hermitian_update(const Eigen::MatrixXcd& b, Eigen::Index ncols, Eigen::MatrixXcd& x,
                      const std::vector<Tile>& tiles) {
    const Eigen::Index ld = b.rows();
    const std::complex<double> one{1.0, 0.0};
    parallel_for(tiles.size(), [&](std::size_t t) {
        const Tile& tile = tiles[t];
        const std::complex<double>* ai = b.data() + tile.row0;
        std::complex<double>* c = x.data() + tile.row0 + tile.col0 * x.rows();
        if (tile.row0 == tile.col0) {
            cblas_zherk(CblasColMajor, CblasLower, CblasNoTrans, static_cast<int>(tile.rows),
                        static_cast<int>(ncols), 1.0, ai, static_cast<int>(ld), 1.0, c,
                        static_cast<int>(x.rows()));
        } else {
            const std::complex<double>* aj = b.data() + tile.col0;
            cblas_zgemm(CblasColMajor, CblasNoTrans, CblasConjTrans, static_cast<int>(tile.rows),
                        static_cast<int>(tile.cols), static_cast<int>(ncols), &one, ai,
                        static_cast<int>(ld), aj, static_cast<int>(ld), &one, c,
                        static_cast<int>(x.rows()));
        }
    });
}

// X += B B_S^H where B_S holds the subset rows of B.
void rectangular_update(const Eigen::MatrixXcd& b, Eigen::Index ncols, const Eigen::MatrixXcd& bs,
                        Eigen::MatrixXcd& x) {
    const Eigen::Index k = b.rows();
    const std::complex<double> one{1.0, 0.0};
    const auto tiles = static_cast<std::size_t>((k + kTile - 1) / kTile);
    parallel_for(tiles, [&](std::size_t t) {
        const Eigen::Index row0 = static_cast<Eigen::Index>(t) * kTile;
        const Eigen::Index rows = std::min(kTile, k - row0);
        cblas_zgemm(CblasColMajor, CblasNoTrans, CblasConjTrans, static_cast<int>(rows),
                    static_cast<int>(x.cols()), static_cast<int>(ncols), &one, b.data() + row0,
                    static_cast<int>(k), bs.data(), static_cast<int>(bs.rows()), &one,
                    x.data() + row0, static_cast<int>(k));
    });
}

void check_shapes(const SignalSet& data, const ImageWindow& window) {
    window.validate();
    if (data.sample_count() != data.pulse_count() * data.receiver_count() * data.frequency_count()) {
        throw DomainError("signal set shape is inconsistent");
    }
    if (data.geometry().receivers.size() != data.receiver_count()) {
        throw DomainError("signal set geometry does not match its receiver count");
    }
}

}  // namespace

Eigen::MatrixXcd migrate_pulse(const SignalSet& data, const ImageWindow& window, std::size_t pulse) {
    check_shapes(data, window);
    if (pulse >= data.pulse_count()) throw DomainError("pulse index out of range");
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(window.size()),
                         static_cast<Eigen::Index>(data.frequency_count()));
    migrate_pulse_into(data, window, pulse, out.data(), out.rows());
    return out;
}

MigratedBank migrated_bank(const SignalSet& data, const ImageWindow& window) {
    check_shapes(data, window);
    const auto K = static_cast<Eigen::Index>(window.size());
    const auto nw = static_cast<Eigen::Index>(data.frequency_count());
    MigratedBank bank;
    bank.columns.resize(K, static_cast<Eigen::Index>(data.pulse_count()) * nw);
    bank.index.reserve(static_cast<std::size_t>(bank.columns.cols()));
    for (std::size_t s = 0; s < data.pulse_count(); ++s) {
        for (Eigen::Index w = 0; w < nw; ++w) {
            bank.index.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(w));
        }
    }
    parallel_for(data.pulse_count(), [&](std::size_t s) {
        migrate_pulse_into(data, window, s, bank.columns.data() + static_cast<Eigen::Index>(s) * nw * K, K);
    });
    return bank;
}

ImagingProducts accumulate_products(const SignalSet& data, const ImageWindow& window,
                                    const AccumulateOptions& options) {
    check_shapes(data, window);
    single_threaded_blas();
    const auto K = static_cast<Eigen::Index>(window.size());
    const auto nw = static_cast<Eigen::Index>(data.frequency_count());
    const std::size_t per_block = std::max<std::size_t>(1, options.pulses_per_block);

    ImagingProducts out;
    out.km_preimage = Eigen::VectorXcd::Zero(K);
    Eigen::MatrixXcd x;
    if (options.full_pattern) x = Eigen::MatrixXcd::Zero(K, K);
    Eigen::MatrixXcd xs;
    std::vector<Eigen::Index> subset;
    if (options.column_subset) {
        subset = *options.column_subset;
        if (subset.empty()) throw DomainError("column subset is empty");
        for (auto c : subset) {
            if (c < 0 || c >= K) throw DomainError("column subset index out of range");
        }
        xs = Eigen::MatrixXcd::Zero(K, static_cast<Eigen::Index>(subset.size()));
    }
    const auto tiles = lower_tiles(K);

    Eigen::MatrixXcd block(K, static_cast<Eigen::Index>(per_block) * nw);
    Eigen::MatrixXcd block_subset;
    for (std::size_t s0 = 0; s0 < data.pulse_count(); s0 += per_block) {
        const std::size_t np = std::min(per_block, data.pulse_count() - s0);
        const Eigen::Index ncols = static_cast<Eigen::Index>(np) * nw;
        parallel_for(np, [&](std::size_t j) {
            migrate_pulse_into(data, window, s0 + j, block.data() + static_cast<Eigen::Index>(j) * nw * K, K);
        });
        out.km_preimage += block.leftCols(ncols).rowwise().sum();
        if (options.full_pattern) hermitian_update(block, ncols, x, tiles);
        if (!subset.empty()) {
            block_subset.resize(static_cast<Eigen::Index>(subset.size()), ncols);
            for (std::size_t i = 0; i < subset.size(); ++i) {
                block_subset.row(static_cast<Eigen::Index>(i)) = block.row(subset[i]).head(ncols);
            }
            rectangular_update(block, ncols, block_subset, xs);
        }
    }

    if (options.full_pattern) {
        for (Eigen::Index j = 0; j < K; ++j) {
            x(j, j) = {x(j, j).real(), 0.0};
            for (Eigen::Index i = j + 1; i < K; ++i) x(j, i) = std::conj(x(i, j));
        }
        out.pattern = InterferencePattern{std::move(x), window, {}};
    }
    if (!subset.empty()) out.downsampled = InterferencePattern{std::move(xs), window, subset};
    return out;
}

}  // namespace xcorr
