#pragma once

// Uniform periodic grids on [0, 2pi): sampling, spectral differentiation and
// trapezoid quadrature (spectrally accurate for smooth periodic data).

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace h2r {

inline double theta_at(int j, int n) { return 2.0 * std::numbers::pi * j / n; }

inline std::vector<double> theta_grid(int n) {
    std::vector<double> t(n);
    for (int j = 0; j < n; ++j) t[j] = theta_at(j, n);
    return t;
}

inline std::vector<std::complex<double>> dft(const std::vector<double>& samples) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out;
    fft.fwd(out, samples);
    // complete a half spectrum by conjugate symmetry
    const std::size_t n = samples.size();
    const std::size_t half = out.size();
    if (half != n) {
        out.resize(n);
        for (std::size_t k = half; k < n; ++k) out[k] = std::conj(out[n - k]);
    }
    return out;
}

inline std::vector<double> inverse_dft_real(const std::vector<std::complex<double>>& spectrum) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> tmp;
    fft.inv(tmp, spectrum);
    std::vector<double> out(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
    return out;
}

/// d/dtheta of periodic samples; the Nyquist mode is dropped (its derivative is not real).
inline std::vector<double> spectral_derivative(const std::vector<double>& samples) {
    const int n = static_cast<int>(samples.size());
    auto c = dft(samples);
    for (int k = 0; k < n; ++k) {
        int freq = k <= n / 2 ? k : k - n;
        if (n % 2 == 0 && k == n / 2) freq = 0;
        c[k] *= std::complex<double>(0.0, static_cast<double>(freq));
    }
    return inverse_dft_real(c);
}

/// Shift periodic samples: out(theta) = in(theta - zeta), exact for band-limited data.
inline std::vector<double> spectral_shift(const std::vector<double>& samples, double zeta) {
    const int n = static_cast<int>(samples.size());
    auto c = dft(samples);
    for (int k = 0; k < n; ++k) {
        int freq = k <= n / 2 ? k : k - n;
        if (n % 2 == 0 && k == n / 2) {
            // keep the Nyquist mode real: cos(N/2 (theta - zeta)) sampled on the grid
            c[k] *= std::cos(freq * zeta);
            continue;
        }
        c[k] *= std::polar(1.0, -freq * zeta);
    }
    return inverse_dft_real(c);
}

/// Integral over [0, 2pi) by the periodic trapezoid rule.
inline double periodic_integral(const std::vector<double>& samples) {
    double s = 0.0;
    for (double v : samples) s += v;
    return s * 2.0 * std::numbers::pi / static_cast<double>(samples.size());
}

}  // namespace h2r
