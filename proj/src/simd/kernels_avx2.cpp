#include "autogyro/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace autogyro::simd {

namespace {

// Cephes atan rational approximation on |x| <= 0.66.
constexpr double P0 = -8.750608600031904122785e-1;
constexpr double P1 = -1.615753718733365076637e1;
constexpr double P2 = -7.500855792314704667340e1;
constexpr double P3 = -1.228866684490136173410e2;
constexpr double P4 = -6.485021904942025371773e1;
constexpr double Q0 = 2.485846490142306297962e1;
constexpr double Q1 = 1.650270098316988542046e2;
constexpr double Q2 = 4.328810604912902668951e2;
constexpr double Q3 = 4.853903996359136964868e2;
constexpr double Q4 = 1.945506571482613964425e2;
constexpr double PIO4 = 7.85398163397448309616e-1;
constexpr double PIO2 = 1.57079632679489661923;
constexpr double PI = 3.14159265358979323846;
constexpr double MOREBITS = 6.123233995736765886130e-17;

inline __m256d atan_unit(__m256d a)  // a in [0, 1]
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d big = _mm256_cmp_pd(a, _mm256_set1_pd(0.66), _CMP_GT_OQ);
    const __m256d reduced = _mm256_div_pd(_mm256_sub_pd(a, one), _mm256_add_pd(a, one));
    const __m256d x = _mm256_blendv_pd(a, reduced, big);
    const __m256d base = _mm256_and_pd(big, _mm256_set1_pd(PIO4));
    const __m256d extra = _mm256_and_pd(big, _mm256_set1_pd(0.5 * MOREBITS));

    const __m256d z = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(P0);
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(P1));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(P2));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(P3));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(P4));
    __m256d q = _mm256_add_pd(z, _mm256_set1_pd(Q0));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(Q1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(Q2));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(Q3));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(Q4));
    const __m256d r = _mm256_div_pd(_mm256_mul_pd(z, p), q);
    const __m256d t = _mm256_fmadd_pd(x, r, x);
    return _mm256_add_pd(base, _mm256_add_pd(t, extra));
}

inline __m256d atan2_pd(__m256d y, __m256d x)
{
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d ay = _mm256_andnot_pd(sign, y);
    const __m256d ax = _mm256_andnot_pd(sign, x);
    const __m256d hi = _mm256_max_pd(ax, ay);
    const __m256d lo = _mm256_min_pd(ax, ay);
    const __m256d zero_hi = _mm256_cmp_pd(hi, _mm256_setzero_pd(), _CMP_EQ_OQ);
    const __m256d ratio = _mm256_andnot_pd(zero_hi, _mm256_div_pd(lo, hi));
    __m256d r = atan_unit(ratio);

    const __m256d swap = _mm256_cmp_pd(ay, ax, _CMP_GT_OQ);
    r = _mm256_blendv_pd(r, _mm256_sub_pd(_mm256_set1_pd(PIO2), r), swap);
    const __m256d neg_x = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
    r = _mm256_blendv_pd(r, _mm256_sub_pd(_mm256_set1_pd(PI), r), neg_x);
    // copy the sign of y (atan2(+-0, x>=0) = +-0 as in libm)
    return _mm256_or_pd(r, _mm256_and_pd(sign, y));
}

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

RotorSums rotor_sums_avx2(const RotorGridView& g, const SectionParams& sp,
                          double omega, double v_inplane, double u_p)
{
    const __m256d vom = _mm256_set1_pd(omega);
    const __m256d vvip = _mm256_set1_pd(v_inplane);
    const __m256d vup = _mm256_set1_pd(u_p);
    const __m256d vth = _mm256_set1_pd(sp.theta0);
    const __m256d va0 = _mm256_set1_pd(sp.a0);
    const __m256d vcd = _mm256_set1_pd(sp.cd0);
    const __m256d up2 = _mm256_mul_pd(vup, vup);

    __m256d st = _mm256_setzero_pd();
    __m256d sq = _mm256_setzero_pd();
    __m256d sh = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= g.n; k += 4) {
        const __m256d r = _mm256_loadu_pd(g.radius + k);
        const __m256d sp4 = _mm256_loadu_pd(g.sin_psi + k);
        const __m256d q = _mm256_loadu_pd(g.q + k);
        const __m256d ut = _mm256_fmadd_pd(vom, r, _mm256_mul_pd(vvip, sp4));
        const __m256d u = _mm256_sqrt_pd(_mm256_fmadd_pd(ut, ut, up2));
        const __m256d alpha = _mm256_add_pd(vth, atan2_pd(vup, ut));
        const __m256d qu = _mm256_mul_pd(q, u);
        const __m256d a0a = _mm256_mul_pd(va0, alpha);
        const __m256d fn = _mm256_mul_pd(qu, _mm256_fmsub_pd(a0a, ut, _mm256_mul_pd(vcd, vup)));
        const __m256d ft = _mm256_mul_pd(qu, _mm256_fmsub_pd(a0a, vup, _mm256_mul_pd(vcd, ut)));
        st = _mm256_add_pd(st, fn);
        sq = _mm256_fmadd_pd(r, ft, sq);
        sh = _mm256_fnmadd_pd(ft, sp4, sh);
    }
    RotorSums s{hsum(st), hsum(sq), hsum(sh)};
    for (; k < g.n; ++k) {
        const double ut = omega * g.radius[k] + v_inplane * g.sin_psi[k];
        const double u = std::sqrt(ut * ut + u_p * u_p);
        const double alpha = sp.theta0 + std::atan2(u_p, ut);
        const double qu = g.q[k] * u;
        const double fn = qu * (sp.a0 * alpha * ut - sp.cd0 * u_p);
        const double ft = qu * (sp.a0 * alpha * u_p - sp.cd0 * ut);
        s.thrust += fn;
        s.torque += g.radius[k] * ft;
        s.h_force -= ft * g.sin_psi[k];
    }
    return s;
}

void section_forces_avx2(const double* u_t, const double* u_p, const double* q,
                         std::size_t n, const SectionParams& sp, double* f_n, double* f_t)
{
    const __m256d vth = _mm256_set1_pd(sp.theta0);
    const __m256d va0 = _mm256_set1_pd(sp.a0);
    const __m256d vcd = _mm256_set1_pd(sp.cd0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d ut = _mm256_loadu_pd(u_t + k);
        const __m256d up = _mm256_loadu_pd(u_p + k);
        const __m256d u = _mm256_sqrt_pd(_mm256_fmadd_pd(ut, ut, _mm256_mul_pd(up, up)));
        const __m256d alpha = _mm256_add_pd(vth, atan2_pd(up, ut));
        const __m256d qu = _mm256_mul_pd(_mm256_loadu_pd(q + k), u);
        const __m256d a0a = _mm256_mul_pd(va0, alpha);
        _mm256_storeu_pd(f_n + k, _mm256_mul_pd(qu, _mm256_fmsub_pd(a0a, ut, _mm256_mul_pd(vcd, up))));
        _mm256_storeu_pd(f_t + k, _mm256_mul_pd(qu, _mm256_fmsub_pd(a0a, up, _mm256_mul_pd(vcd, ut))));
    }
    for (; k < n; ++k) {
        const double u = std::sqrt(u_t[k] * u_t[k] + u_p[k] * u_p[k]);
        const double alpha = sp.theta0 + std::atan2(u_p[k], u_t[k]);
        const double qu = q[k] * u;
        f_n[k] = qu * (sp.a0 * alpha * u_t[k] - sp.cd0 * u_p[k]);
        f_t[k] = qu * (sp.a0 * alpha * u_p[k] - sp.cd0 * u_t[k]);
    }
}

}  // namespace

const KernelTable& avx2_kernels()
{
    static const KernelTable t{"avx2", rotor_sums_avx2, section_forces_avx2};
    return t;
}

}  // namespace autogyro::simd
