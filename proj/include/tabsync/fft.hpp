#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>

#include <Eigen/Core>

#include "tabsync/errors.hpp"

namespace tabsync {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

constexpr bool is_power_of_two(std::size_t n) noexcept {
    return n != 0 && (n & (n - 1)) == 0;
}

/// Forward DFT of a real sequence, X[k] = sum_n x[n] e^{-2 pi i k n / N}.
/// Iterative radix-2 Cooley-Tukey; all N bins are returned so the caller
/// sees the conjugate-symmetric upper half as well.
///
/// Twiddles are evaluated directly with cos/sin rather than by recurrence,
/// which keeps the error at a few ulps times log2(N).
template <typename Derived>
ComplexVector<typename Derived::Scalar> fft_real(const Eigen::DenseBase<Derived>& frame) {
    using Scalar = typename Derived::Scalar;
    using Complex = std::complex<Scalar>;

    const Eigen::Index n = frame.size();
    if (!is_power_of_two(static_cast<std::size_t>(n))) {
        throw SizeError("fft_real: length " + std::to_string(n) + " is not a power of two");
    }

    ComplexVector<Scalar> out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = Complex(frame.derived().coeff(i), Scalar(0));
    }
    if (n == 1) {
        return out;
    }

    // Bit-reversal permutation.
    for (Eigen::Index i = 1, j = 0; i < n; ++i) {
        Eigen::Index bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(out(i), out(j));
        }
    }

    const Eigen::Index half = n / 2;
    ComplexVector<Scalar> twiddle(half);
    const Scalar step = Scalar(-2) * std::numbers::pi_v<Scalar> / static_cast<Scalar>(n);
    for (Eigen::Index k = 0; k < half; ++k) {
        const Scalar angle = step * static_cast<Scalar>(k);
        twiddle(k) = Complex(std::cos(angle), std::sin(angle));
    }

    for (Eigen::Index len = 2; len <= n; len <<= 1) {
        const Eigen::Index span = len / 2;
        const Eigen::Index stride = n / len;
        for (Eigen::Index start = 0; start < n; start += len) {
            for (Eigen::Index k = 0; k < span; ++k) {
                const Complex t = twiddle(k * stride) * out(start + k + span);
                const Complex u = out(start + k);
                out(start + k) = u + t;
                out(start + k + span) = u - t;
            }
        }
    }
    return out;
}

/// Periodic Hann window of length n.
template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> hann_window(Eigen::Index n) {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        w(i) = Scalar(0.5) - Scalar(0.5) * std::cos(Scalar(2) * std::numbers::pi_v<Scalar> *
                                                     static_cast<Scalar>(i) / static_cast<Scalar>(n));
    }
    return w;
}

} // namespace tabsync
