/*
 * Copyright 2026 The TXL-ACAM Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

namespace txl::numerics {

/// Bisection on a bracket [lo, hi] for a function whose sign at lo differs
/// from its sign at hi (or is zero). Stops once the bracket is narrower than
/// `tol`. Returns the bracket midpoint.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200)
{
    double f_lo = f(lo);
    if (f_lo == 0.0) return lo;
    for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bracketed root of a monotone function via TOMS 748. Converges in far fewer
/// evaluations than bisection; the result is the bracket midpoint once its
/// width falls under `tol`.
template <typename F>
double bracketed_root(F&& f, double lo, double hi, double tol)
{
    const double f_lo = f(lo);
    if (f_lo == 0.0) return lo;
    const double f_hi = f(hi);
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    std::uintmax_t max_iter = 100;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, max_iter);
    return 0.5 * (r.first + r.second);
}

/// One classical fourth-order Runge-Kutta step for the scalar ODE y' = f(t, y).
template <typename F>
double rk4_step(F&& f, double t, double y, double h)
{
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// SplitMix64 finalizer; used to derive independent per-device seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename... Ts>
constexpr std::uint64_t mix_seed(std::uint64_t first, Ts... rest)
{
    std::uint64_t h = mix_seed(first);
    ((h = mix_seed(h ^ static_cast<std::uint64_t>(rest))), ...);
    return h;
}

} // namespace txl::numerics
