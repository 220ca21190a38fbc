#ifndef PBSIM_INTEGRATOR_HPP
#define PBSIM_INTEGRATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "types.hpp"

namespace pbsim {

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_initial = 0.0;  // 0 -> automatic
    double h_max = std::numeric_limits<double>::infinity();
    std::int64_t max_steps = 2'000'000'000;
};

struct IntegratorStats {
    std::int64_t n_steps = 0;
    std::int64_t n_rejected = 0;
    std::int64_t n_rhs = 0;
};

using Rhs = std::function<void(double, const Vector&, Vector&)>;
using SampleCallback = std::function<void(double, const Vector&)>;

// Embedded Dormand-Prince 5(4) with the standard 4th-order dense-output
// interpolant. State is a complex vector; the error norm is the scaled RMS
// over components with sc_i = atol + rtol * max(|y0_i|, |y1_i|).
class DormandPrince54 {
public:
    explicit DormandPrince54(Rhs rhs) : rhs_(std::move(rhs)) {}

    // Integrates y from t0 to t1 (t1 > t0). sample_times must be sorted and lie
    // within [t0, t1]; each is evaluated from the dense interpolant.
    IntegratorStats integrate(double t0, double t1, Vector& y, const IntegratorOptions& opts,
                              const std::vector<double>& sample_times = {},
                              const SampleCallback& on_sample = nullptr) {
        const Eigen::Index n = y.size();
        Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);
        Vector rcont1(n), rcont2(n), rcont3(n), rcont4(n), rcont5(n);

        IntegratorStats stats;
        std::size_t next_sample = 0;
        if (on_sample) {
            while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
                on_sample(sample_times[next_sample], y);
                ++next_sample;
            }
        }
        if (t1 <= t0) return stats;

        double t = t0;
        rhs_(t, y, k1);
        ++stats.n_rhs;
        double h = opts.h_initial > 0 ? opts.h_initial : initial_step(t, y, k1, opts);
        h = std::min(h, opts.h_max);

        while (t < t1) {
            if (stats.n_steps + stats.n_rejected >= opts.max_steps)
                throw StiffnessError("integrator: exceeded max_steps at t = " + std::to_string(t));
            const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-300);
            if (t1 - t < h_floor) break;  // already at the endpoint up to roundoff
            h = std::min(h, t1 - t);
            if (h < h_floor)
                throw StiffnessError("integrator: step size underflow at t = " + std::to_string(t) +
                                     " (h = " + std::to_string(h) + ")");

            ytmp = y + h * (a21 * k1);
            rhs_(t + c2 * h, ytmp, k2);
            ytmp = y + h * (a31 * k1 + a32 * k2);
            rhs_(t + c3 * h, ytmp, k3);
            ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs_(t + c4 * h, ytmp, k4);
            ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs_(t + c5 * h, ytmp, k5);
            ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs_(t + h, ytmp, k6);
            ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            rhs_(t + h, ynew, k7);
            stats.n_rhs += 6;

            yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double err = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
                const double e = std::abs(yerr(i)) / sc;
                err += e * e;
            }
            err = std::sqrt(err / double(n));

            if (err <= 1.0) {
                if (on_sample && next_sample < sample_times.size() && sample_times[next_sample] <= t + h) {
                    rcont1 = y;
                    rcont2 = ynew - y;
                    rcont3 = h * k1 - rcont2;
                    rcont4 = rcont2 - h * k7 - rcont3;
                    rcont5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                    while (next_sample < sample_times.size() && sample_times[next_sample] <= t + h) {
                        const double theta = (sample_times[next_sample] - t) / h;
                        const double theta1 = 1.0 - theta;
                        ytmp = rcont1 +
                               theta * (rcont2 + theta1 * (rcont3 + theta * (rcont4 + theta1 * rcont5)));
                        on_sample(sample_times[next_sample], ytmp);
                        ++next_sample;
                    }
                }
                t += h;
                y.swap(ynew);
                k1.swap(k7);  // FSAL
                ++stats.n_steps;
                const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 8.0);
                h = std::min(h * fac, opts.h_max);
            } else {
                ++stats.n_rejected;
                h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            }
        }
        return stats;
    }

private:
    double initial_step(double t0, const Vector& y, const Vector& f0, const IntegratorOptions& opts) const {
        double d0 = 0.0, d1 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = opts.atol + opts.rtol * std::abs(y(i));
            d0 += std::norm(y(i) / sc);
            d1 += std::norm(f0(i) / sc);
        }
        d0 = std::sqrt(d0 / double(y.size()));
        d1 = std::sqrt(d1 / double(y.size()));
        double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        return std::min(h0, opts.h_max);
    }

    Rhs rhs_;

    // Dormand-Prince nodes and tableau
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                            a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                            a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    // 5th-minus-4th order error weights
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    // dense-output weights
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
};

}  // namespace pbsim

#endif
