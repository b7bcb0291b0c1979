#pragma once

/// Desk-scale verification of the continuous-to-digital reduction: truncated
/// Shannon D-to-A / A-to-D maps, the shift-intertwining check, and the
/// narrowband (time-scale to frequency-shift) approximation residual.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "sce/errors.hpp"
#include "sce/signal.hpp"

namespace sce {

struct AnalogParams {
    double bandwidth = 1.0;       // W (Hz)
    double duration = 1.0;        // T (s); N = T W
    double carrier = 0.0;         // f_c, integer multiple of W
    std::uint64_t modulus = 1;    // N
    std::uint64_t trunc_lobes = 32;  // sinc lobes retained per side

    static AnalogParams make(std::uint64_t n, double bandwidth, double carrier_mult,
                             std::uint64_t trunc_lobes) {
        AnalogParams p;
        p.modulus = n;
        p.bandwidth = bandwidth;
        p.duration = static_cast<double>(n) / bandwidth;
        p.carrier = carrier_mult * bandwidth;
        p.trunc_lobes = trunc_lobes;
        return p;
    }
};

struct ContinuousSignal {
    std::function<cplx(double)> evaluator;
    double support_begin = 0.0;
    double support_end = 0.0;

    cplx operator()(double t) const { return evaluator(t); }
};

inline double sinc_w(double bandwidth, double t) {
    const double x = M_PI * bandwidth * t;
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(x) / x;
}

/// s(t) = e^{2 pi i f_c t} sum_tau S[tau] sinc_W(t - tau/W), the sum
/// truncated to |t - tau/W| <= trunc_lobes / W.
inline ContinuousSignal d_to_a(const Signal& s, const AnalogParams& p) {
    if (s.modulus() != p.modulus) throw param_mismatch("signal length differs from T*W");
    const double w = p.bandwidth;
    const double fc = p.carrier;
    const double reach = static_cast<double>(p.trunc_lobes) / w;
    const std::uint64_t n = p.modulus;
    std::vector<cplx> samples = s.samples;  // captured by value

    ContinuousSignal out;
    out.support_begin = -reach;
    out.support_end = p.duration + reach;
    out.evaluator = [samples, w, fc, reach, n](double t) -> cplx {
        const std::int64_t lo =
            static_cast<std::int64_t>(std::ceil((t - reach) * w));
        const std::int64_t hi =
            static_cast<std::int64_t>(std::floor((t + reach) * w));
        cplx acc{};
        for (std::int64_t tau = lo; tau <= hi; ++tau) {
            if (tau < 0 || tau >= static_cast<std::int64_t>(n)) continue;
            acc += samples[static_cast<std::size_t>(tau)] *
                   sinc_w(w, t - static_cast<double>(tau) / w);
        }
        const double ang = 2.0 * M_PI * fc * t;
        return cplx(std::cos(ang), std::sin(ang)) * acc;
    };
    return out;
}

/// R[tau] = sum_m r(tau/W + m T), m restricted to the declared support.
inline Signal a_to_d(const ContinuousSignal& r, const AnalogParams& p) {
    const std::uint64_t n = p.modulus;
    Signal out(n);
    for (std::uint64_t tau = 0; tau < n; ++tau) {
        const double base = static_cast<double>(tau) / p.bandwidth;
        const double m_lo = std::floor((r.support_begin - base) / p.duration);
        const double m_hi = std::ceil((r.support_end - base) / p.duration);
        cplx acc{};
        for (double m = m_lo; m <= m_hi; m += 1.0) {
            const double t = base + m * p.duration;
            if (t < r.support_begin || t > r.support_end) continue;
            acc += r(t);
        }
        out[tau] = acc;
    }
    return out;
}

/// Continuous time-frequency shift h_{t0,f0}.
inline ContinuousSignal continuous_shift(const ContinuousSignal& s, double t0, double f0) {
    ContinuousSignal out;
    out.support_begin = s.support_begin + t0;
    out.support_end = s.support_end + t0;
    auto inner = s.evaluator;
    out.evaluator = [inner, t0, f0](double t) -> cplx {
        const double ang = 2.0 * M_PI * f0 * t;
        return cplx(std::cos(ang), std::sin(ang)) * inner(t - t0);
    };
    return out;
}

/// || A-to-D(h_{t0,f0}(D-to-A(S))) - H_{tau0,omega0} S || for the on-grid
/// shift (t0, f0) = (tau0/W, omega0/T). Small residual certifies the
/// intertwining at this truncation level.
inline double verify_shift_intertwining(const Signal& s, double t0, double f0,
                                        const AnalogParams& p) {
    const double ti = t0 * p.bandwidth;
    const double fi = f0 * p.duration;
    if (std::abs(ti - std::round(ti)) > 1e-9 || std::abs(fi - std::round(fi)) > 1e-9)
        throw off_grid("(t0, f0) must lie on the time-frequency grid");
    const std::uint64_t n = p.modulus;
    const ZMod tau0(static_cast<std::int64_t>(std::llround(ti)), n);
    const ZMod omega0(static_cast<std::int64_t>(std::llround(fi)), n);

    const ContinuousSignal analog = d_to_a(s, p);
    const Signal round_trip = a_to_d(continuous_shift(analog, t0, f0), p);
    const Signal expected = apply_shift(ShiftOp(tau0, omega0), s);

    double acc = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) acc += std::norm(round_trip[t] - expected[t]);
    return std::sqrt(acc);
}

struct NarrowbandResidual {
    double max_residual = 0.0;             // sup_t |s(a0 t) - e^{2 pi i f0 t} s(t)|
    std::vector<double> bound_shape;       // f0 * t * (W/f_c) per grid point
    double frequency_shift = 0.0;          // f0 = f_c (a0 - 1)
};

/// Measures how well the time-scale by a0 is approximated by a pure
/// frequency shift over the given evaluation grid.
inline NarrowbandResidual narrowband_residual(const ContinuousSignal& s, double a0,
                                              double carrier, double bandwidth,
                                              const std::vector<double>& t_grid) {
    NarrowbandResidual out;
    out.frequency_shift = carrier * (a0 - 1.0);
    out.bound_shape.reserve(t_grid.size());
    for (double t : t_grid) {
        const double ang = 2.0 * M_PI * out.frequency_shift * t;
        const cplx approx = cplx(std::cos(ang), std::sin(ang)) * s(t);
        const double resid = std::abs(s(a0 * t) - approx);
        out.max_residual = std::max(out.max_residual, resid);
        out.bound_shape.push_back(std::abs(out.frequency_shift * t) * bandwidth / carrier);
    }
    return out;
}

}  // namespace sce
