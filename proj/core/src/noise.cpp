// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "xcorr/errors.hpp"
#include "xcorr/forward.hpp"
#include "xcorr/parallel.hpp"
#include "xcorr/random.hpp"

namespace xcorr {

SignalSet add_noise(const SignalSet& data, const NoiseSpec& noise) {
    if (noise.noiseless()) return data;
    if (!std::isfinite(noise.snr_db)) throw DomainError("snr_db must be finite or +infinity");

    double power = 0.0;
    for (const auto& z : data.data()) power += std::norm(z);
    if (!data.data().empty()) power /= static_cast<double>(data.data().size());
    const double sigma = std::sqrt(0.5 * power * std::pow(10.0, -noise.snr_db / 10.0));

    SignalSet out = data;
    const std::size_t nr = data.receiver_count();
    const std::size_t nw = data.frequency_count();
    parallel_for(data.pulse_count(), [&](std::size_t s) {
        for (std::size_t r = 0; r < nr; ++r) {
            const std::uint64_t stream = static_cast<std::uint64_t>(s) * nr + r;
            cplx* u = out.trace(s, r);
            for (std::size_t w = 0; w < nw; ++w) {
                const auto [re, im] = random::normal_pair(noise.seed, stream, w);
                u[w] += cplx(sigma * re, sigma * im);
            }
        }
    });
    return out;
}

}  // namespace xcorr
