# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the probability core.

Same algorithms and summation order as lotqc._kernels._pure; selected at
import when the extension built.
"""

from libc.math cimport lgamma, exp, log, log1p, floor, ceil, INFINITY
from libc.stdlib cimport malloc, free

cdef double NEG_INF = -INFINITY
cdef int SENTINEL = 1 << 30


cpdef double log_binom(double a, double k):
    if k < 0 or k > a:
        return NEG_INF
    return lgamma(a + 1.0) - lgamma(k + 1.0) - lgamma(a - k + 1.0)


# --- hypergeometric ----------------------------------------------------------

cpdef double hyper_logpmf(long N, long D, long n, long k):
    cdef long lo = n - (N - D)
    if lo < 0:
        lo = 0
    cdef long hi = n if n < D else D
    if k < lo or k > hi:
        return NEG_INF
    return log_binom(D, k) + log_binom(N - D, n - k) - log_binom(N, n)


cpdef double hyper_pmf(long N, long D, long n, long k):
    cdef double lp = hyper_logpmf(N, D, n, k)
    if lp == NEG_INF:
        return 0.0
    return exp(lp)


cdef double _hyper_tail(long N, long D, long n, long j_from, long j_to):
    cdef double base = -log_binom(N, n)
    cdef double lgD = lgamma(D + 1.0)
    cdef double lgR = lgamma(N - D + 1.0)
    cdef double total = 0.0
    cdef long j, step
    step = 1 if j_to >= j_from else -1
    j = j_from
    while True:
        total += exp(
            base
            + lgD - lgamma(j + 1.0) - lgamma(D - j + 1.0)
            + lgR - lgamma(n - j + 1.0) - lgamma(N - D - n + j + 1.0)
        )
        if j == j_to:
            break
        j += step
    return total


cpdef double hyper_cdf(long N, long D, long n, long k):
    cdef long lo = n - (N - D)
    if lo < 0:
        lo = 0
    cdef long hi = n if n < D else D
    if k < lo:
        return 0.0
    if k >= hi:
        return 1.0
    cdef long mode = ((n + 1) * (D + 1)) // (N + 2)
    cdef double v
    if k < mode:
        v = _hyper_tail(N, D, n, lo, k)
        return v if v < 1.0 else 1.0
    v = 1.0 - _hyper_tail(N, D, n, hi, k + 1)
    return v if v > 0.0 else 0.0


cpdef double hyper_sf(long N, long D, long n, long k):
    cdef long lo = n - (N - D)
    if lo < 0:
        lo = 0
    cdef long hi = n if n < D else D
    if k <= lo:
        return 1.0
    if k > hi:
        return 0.0
    cdef long mode = ((n + 1) * (D + 1)) // (N + 2)
    cdef double v
    if k > mode:
        v = _hyper_tail(N, D, n, hi, k)
        return v if v < 1.0 else 1.0
    v = 1.0 - _hyper_tail(N, D, n, lo, k - 1)
    return v if v > 0.0 else 0.0


# --- binomial ----------------------------------------------------------------

cpdef double binom_logpmf(double p, long n, long k):
    if k < 0 or k > n:
        return NEG_INF
    if p <= 0.0:
        return 0.0 if k == 0 else NEG_INF
    if p >= 1.0:
        return 0.0 if k == n else NEG_INF
    return log_binom(n, k) + k * log(p) + (n - k) * log1p(-p)


cpdef double binom_pmf(double p, long n, long k):
    cdef double lp = binom_logpmf(p, n, k)
    if lp == NEG_INF:
        return 0.0
    return exp(lp)


cdef double _binom_tail(double p, long n, long j_from, long j_to):
    cdef double lp_ = log(p)
    cdef double lq = log1p(-p)
    cdef double total = 0.0
    cdef long j, step
    step = 1 if j_to >= j_from else -1
    j = j_from
    while True:
        total += exp(log_binom(n, j) + j * lp_ + (n - j) * lq)
        if j == j_to:
            break
        j += step
    return total


cpdef double binom_cdf(double p, long n, long k):
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    cdef long mode = <long>floor((n + 1) * p)
    cdef double v
    if k < mode:
        v = _binom_tail(p, n, 0, k)
        return v if v < 1.0 else 1.0
    v = 1.0 - _binom_tail(p, n, n, k + 1)
    return v if v > 0.0 else 0.0


cpdef double binom_sf(double p, long n, long k):
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    cdef long mode = <long>floor((n + 1) * p)
    cdef double v
    if k > mode:
        v = _binom_tail(p, n, n, k)
        return v if v < 1.0 else 1.0
    v = 1.0 - _binom_tail(p, n, 0, k - 1)
    return v if v > 0.0 else 0.0


# --- double-plan composite acceptance ---------------------------------------

cpdef double double_accept_hyper(long N, long D, long n1, long n2, long c1, long c2, bint conditioned):
    cdef double acc = hyper_cdf(N, D, n1, c1)
    cdef long top = c2
    if n1 < top:
        top = n1
    if D < top:
        top = D
    cdef long i
    cdef double w
    for i in range(c1 + 1, top + 1):
        w = hyper_pmf(N, D, n1, i)
        if w <= 0.0:
            continue
        if conditioned:
            acc += w * hyper_cdf(N - n1, D - i, n2, c2 - i)
        else:
            acc += w * hyper_cdf(N, D, n2, c2 - i)
    return acc


cpdef double double_accept_binom(double p, long n1, long n2, long c1, long c2):
    cdef double acc = binom_cdf(p, n1, c1)
    cdef long top = c2 if c2 < n1 else n1
    cdef long i
    cdef double w
    for i in range(c1 + 1, top + 1):
        w = binom_pmf(p, n1, i)
        if w > 0.0:
            acc += w * binom_cdf(p, n2, c2 - i)
    return acc


# --- sequential boundaries ---------------------------------------------------

def hyper_llr_boundaries(long N, long Da, long Dr, double log_a, double log_b, long n_t):
    cdef long dmax = Da if Da < n_t else n_t
    cdef double *dcum = <double *>malloc((dmax + 1) * sizeof(double))
    cdef double *ccum = <double *>malloc((n_t + 1) * sizeof(double))
    if dcum == NULL or ccum == NULL:
        if dcum != NULL:
            free(dcum)
        if ccum != NULL:
            free(ccum)
        raise MemoryError()
    cdef long j
    dcum[0] = 0.0
    for j in range(dmax):
        dcum[j + 1] = dcum[j] + log((<double>(Dr - j)) / (<double>(Da - j)))
    cdef long dead = n_t + 1
    ccum[0] = 0.0
    for j in range(n_t):
        if N - Dr - j <= 0:
            dead = j + 1
            break
        ccum[j + 1] = ccum[j] + log((<double>(N - Dr - j)) / (<double>(N - Da - j)))

    a = [-1] * (n_t + 1)
    r = [SENTINEL] * (n_t + 1)
    cdef long m, am, rm
    cdef double lam
    cdef long prev_r = SENTINEL
    cdef long prev_a = -1
    for m in range(1, n_t + 1):
        am = prev_a
        while am + 1 <= m:
            lam = _llr(dcum, ccum, dmax, dead, m, am + 1)
            if lam <= log_b:
                am += 1
            else:
                break
        rm = prev_r if prev_r < SENTINEL else am + 1
        if rm <= am:
            rm = am + 1
        while rm <= m:
            lam = _llr(dcum, ccum, dmax, dead, m, rm)
            if lam < log_a:
                rm += 1
            else:
                break
        if rm <= m and _llr(dcum, ccum, dmax, dead, m, rm) >= log_a:
            a[m] = am if am < rm else rm - 1
            r[m] = rm
            prev_r = rm
        else:
            a[m] = am
            r[m] = SENTINEL
            prev_r = SENTINEL
        prev_a = am
    free(dcum)
    free(ccum)
    return a, r


cdef inline double _llr(double *dcum, double *ccum, long dmax, long dead, long m, long d):
    if d > dmax:
        return INFINITY
    if m - d >= dead:
        return NEG_INF
    return dcum[d] + ccum[m - d]


def binom_llr_boundaries(double pa, double pr, double log_a, double log_b, long n_t):
    cdef double k1 = log(pr / pa)
    cdef double k2 = log((1.0 - pr) / (1.0 - pa))
    a = [-1] * (n_t + 1)
    r = [SENTINEL] * (n_t + 1)
    cdef long m, am, rm
    for m in range(1, n_t + 1):
        am = <long>floor((log_b - m * k2) / (k1 - k2))
        rm = <long>ceil((log_a - m * k2) / (k1 - k2))
        if (rm - 1) * k1 + (m - rm + 1) * k2 >= log_a:
            rm -= 1
        if am > m:
            am = m
        a[m] = am
        r[m] = rm if rm <= m else SENTINEL
        if a[m] >= r[m]:
            a[m] = r[m] - 1
    return a, r


# --- sequential absorbing DP ---------------------------------------------------

def sequential_dp_hyper(long N, long D, a, r, long n_t, long c_t):
    cdef long size = n_t + 2
    cdef double *cur = <double *>malloc(size * sizeof(double))
    cdef double *nxt = <double *>malloc(size * sizeof(double))
    if cur == NULL or nxt == NULL:
        if cur != NULL:
            free(cur)
        if nxt != NULL:
            free(nxt)
        raise MemoryError()
    cdef long lo = 0, hi = 0, m, d, am, rm, nlo, nhi
    cdef double asn = 0.0, oc = 0.0, stopped, pd, pr_, q
    cdef long[:] av
    cur[0] = 1.0
    import numpy as np
    a_arr = np.asarray(a, dtype=np.int64)
    r_arr = np.asarray(r, dtype=np.int64)
    cdef long[:] aa = a_arr
    cdef long[:] rr = r_arr
    for m in range(1, n_t + 1):
        nlo, nhi = lo, hi + 1
        for d in range(nlo, nhi + 1):
            nxt[d] = 0.0
        for d in range(lo, hi + 1):
            pr_ = cur[d]
            if pr_ == 0.0:
                continue
            pd = (<double>(D - d)) / (<double>(N - (m - 1)))
            if pd > 0.0:
                nxt[d + 1] += pr_ * pd
            q = pr_ * (1.0 - pd)
            if q > 0.0:
                nxt[d] += q
        am = c_t if m == n_t else aa[m]
        rm = (c_t + 1) if m == n_t else (rr[m] if rr[m] < SENTINEL else n_t + 2)
        stopped = 0.0
        lo, hi = nlo, nhi
        for d in range(nlo, nhi + 1):
            pr_ = nxt[d]
            if pr_ == 0.0:
                continue
            if m == n_t:
                stopped += pr_
                if d <= am:
                    oc += pr_
                nxt[d] = 0.0
            elif d >= rm:
                stopped += pr_
                nxt[d] = 0.0
            elif d <= am:
                stopped += pr_
                oc += pr_
                nxt[d] = 0.0
        asn += m * stopped
        # shrink alive window
        while lo <= hi and nxt[lo] == 0.0:
            lo += 1
        while hi >= lo and nxt[hi] == 0.0:
            hi -= 1
        cur, nxt = nxt, cur
        if lo > hi:
            break
    free(cur)
    free(nxt)
    return oc, asn


def sequential_dp_binom(double p, a, r, long n_t, long c_t):
    cdef long size = n_t + 2
    cdef double *cur = <double *>malloc(size * sizeof(double))
    cdef double *nxt = <double *>malloc(size * sizeof(double))
    if cur == NULL or nxt == NULL:
        if cur != NULL:
            free(cur)
        if nxt != NULL:
            free(nxt)
        raise MemoryError()
    cdef long lo = 0, hi = 0, m, d, am, rm, nlo, nhi
    cdef double asn = 0.0, oc = 0.0, stopped, pr_, q
    cur[0] = 1.0
    import numpy as np
    a_arr = np.asarray(a, dtype=np.int64)
    r_arr = np.asarray(r, dtype=np.int64)
    cdef long[:] aa = a_arr
    cdef long[:] rr = r_arr
    for m in range(1, n_t + 1):
        nlo, nhi = lo, hi + 1
        for d in range(nlo, nhi + 1):
            nxt[d] = 0.0
        for d in range(lo, hi + 1):
            pr_ = cur[d]
            if pr_ == 0.0:
                continue
            if p > 0.0:
                nxt[d + 1] += pr_ * p
            q = pr_ * (1.0 - p)
            if q > 0.0:
                nxt[d] += q
        am = c_t if m == n_t else aa[m]
        rm = (c_t + 1) if m == n_t else (rr[m] if rr[m] < SENTINEL else n_t + 2)
        stopped = 0.0
        lo, hi = nlo, nhi
        for d in range(nlo, nhi + 1):
            pr_ = nxt[d]
            if pr_ == 0.0:
                continue
            if m == n_t:
                stopped += pr_
                if d <= am:
                    oc += pr_
                nxt[d] = 0.0
            elif d >= rm:
                stopped += pr_
                nxt[d] = 0.0
            elif d <= am:
                stopped += pr_
                oc += pr_
                nxt[d] = 0.0
        asn += m * stopped
        while lo <= hi and nxt[lo] == 0.0:
            lo += 1
        while hi >= lo and nxt[hi] == 0.0:
            hi -= 1
        cur, nxt = nxt, cur
        if lo > hi:
            break
    free(cur)
    free(nxt)
    return oc, asn


# --- curtailed stage-2 expected inspections -----------------------------------

cpdef double curtailed_stage2_mean_hyper(long N2, long D2, long n2, long c):
    if c >= n2 or D2 <= 0:
        return <double>n2
    cdef double full = n2 * hyper_cdf(N2, D2, n2, c)
    cdef double early = (c + 1.0) * (N2 + 1.0) / (D2 + 1.0) * hyper_sf(N2 + 1, D2 + 1, n2 + 1, c + 2)
    return full + early


cpdef double curtailed_stage2_mean_binom(double p, long n2, long c):
    if c >= n2 or p <= 0.0:
        return <double>n2
    cdef double full = n2 * binom_cdf(p, n2, c)
    cdef double early = (c + 1.0) / p * binom_sf(p, n2 + 1, c + 2)
    return full + early
