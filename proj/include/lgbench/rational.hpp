// Copyright 2026 The lgbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <gmpxx.h>

namespace lgbench {

using Rational = mpq_class;

inline constexpr std::uint64_t kDefaultMaxDenominator = 1'000'000'000;

/// Best rational approximation of `x` with denominator at most `max_den`,
/// found from the continued-fraction convergents and the last semiconvergent.
inline Rational rationalize(double x, std::uint64_t max_den = kDefaultMaxDenominator) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("rationalize: non-finite input");
    }
    if (max_den == 0) {
        throw std::invalid_argument("rationalize: max denominator must be positive");
    }
    Rational exact(x);  // doubles are dyadic rationals; this is exact
    exact.canonicalize();
    const mpz_class bound(static_cast<unsigned long>(max_den));
    if (exact.get_den() <= bound) {
        return exact;
    }
    const bool negative = exact < 0;
    if (negative) {
        exact = -exact;
    }
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    mpz_class n = exact.get_num(), d = exact.get_den();
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        mpz_class q2 = q0 + a * q1;
        if (q2 > bound) {
            break;
        }
        mpz_class p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        mpz_class r = n - a * d;
        n = d;
        d = r;
        if (d == 0) {
            break;
        }
    }
    Rational best(p1, q1);
    if (d != 0) {
        mpz_class k;
        mpz_fdiv_q(k.get_mpz_t(), mpz_class(bound - q0).get_mpz_t(), q1.get_mpz_t());
        Rational semi(p0 + k * p1, q0 + k * q1);
        semi.canonicalize();
        best.canonicalize();
        if (abs(semi - exact) < abs(best - exact)) {
            best = semi;
        }
    }
    best.canonicalize();
    return negative ? Rational(-best) : best;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace lgbench
