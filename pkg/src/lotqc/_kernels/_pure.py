"""Pure-Python reference kernels for the probability core.

Mirrors lotqc._kernels._native exactly; the compiled module is preferred at
import time when available. All tail sums run in log domain and accumulate
the smaller tail so that values near 0 and 1 keep full absolute precision.
"""

import math

_NEG_INF = float("-inf")
_POS_INF = float("inf")


def log_binom(a, k):
    """log C(a, k) via lgamma; -inf outside the support."""
    if k < 0 or k > a:
        return _NEG_INF
    return (
        math.lgamma(a + 1.0) - math.lgamma(k + 1.0) - math.lgamma(a - k + 1.0)
    )


# --- hypergeometric ----------------------------------------------------------

def hyper_logpmf(N, D, n, k):
    if k < max(0, n - (N - D)) or k > min(n, D):
        return _NEG_INF
    return log_binom(D, k) + log_binom(N - D, n - k) - log_binom(N, n)


def hyper_pmf(N, D, n, k):
    lp = hyper_logpmf(N, D, n, k)
    return 0.0 if lp == _NEG_INF else math.exp(lp)


def _hyper_tail(N, D, n, j_from, j_to):
    # sum pmf over j_from..j_to, smallest terms first (j_from is the far end)
    base = -log_binom(N, n)
    lgD = math.lgamma(D + 1.0)
    lgR = math.lgamma(N - D + 1.0)
    total = 0.0
    step = 1 if j_to >= j_from else -1
    for j in range(j_from, j_to + step, step):
        lp = (
            base
            + lgD - math.lgamma(j + 1.0) - math.lgamma(D - j + 1.0)
            + lgR - math.lgamma(n - j + 1.0) - math.lgamma(N - D - n + j + 1.0)
        )
        total += math.exp(lp)
    return total


def hyper_cdf(N, D, n, k):
    lo = max(0, n - (N - D))
    hi = min(n, D)
    if k < lo:
        return 0.0
    if k >= hi:
        return 1.0
    mode = ((n + 1) * (D + 1)) // (N + 2)
    if k < mode:
        return min(1.0, _hyper_tail(N, D, n, lo, k))
    return max(0.0, 1.0 - _hyper_tail(N, D, n, hi, k + 1))


def hyper_sf(N, D, n, k):
    """P(X >= k), inclusive."""
    lo = max(0, n - (N - D))
    hi = min(n, D)
    if k <= lo:
        return 1.0
    if k > hi:
        return 0.0
    mode = ((n + 1) * (D + 1)) // (N + 2)
    if k > mode:
        return min(1.0, _hyper_tail(N, D, n, hi, k))
    return max(0.0, 1.0 - _hyper_tail(N, D, n, lo, k - 1))


# --- binomial ----------------------------------------------------------------

def binom_logpmf(p, n, k):
    if k < 0 or k > n:
        return _NEG_INF
    if p <= 0.0:
        return 0.0 if k == 0 else _NEG_INF
    if p >= 1.0:
        return 0.0 if k == n else _NEG_INF
    return log_binom(n, k) + k * math.log(p) + (n - k) * math.log1p(-p)


def binom_pmf(p, n, k):
    lp = binom_logpmf(p, n, k)
    return 0.0 if lp == _NEG_INF else math.exp(lp)


def _binom_tail(p, n, j_from, j_to):
    lp_ = math.log(p)
    lq = math.log1p(-p)
    total = 0.0
    step = 1 if j_to >= j_from else -1
    for j in range(j_from, j_to + step, step):
        total += math.exp(log_binom(n, j) + j * lp_ + (n - j) * lq)
    return total


def binom_cdf(p, n, k):
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    mode = int(math.floor((n + 1) * p))
    if k < mode:
        return min(1.0, _binom_tail(p, n, 0, k))
    return max(0.0, 1.0 - _binom_tail(p, n, n, k + 1))


def binom_sf(p, n, k):
    """P(X >= k), inclusive."""
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    mode = int(math.floor((n + 1) * p))
    if k > mode:
        return min(1.0, _binom_tail(p, n, n, k))
    return max(0.0, 1.0 - _binom_tail(p, n, 0, k - 1))


# --- double-plan composite acceptance ---------------------------------------

def double_accept_hyper(N, D, n1, n2, c1, c2, conditioned):
    """P(accept) of an (n1, n2, c1, c2) plan on a lot with D defects.

    conditioned=True removes the stage-1 sample before drawing stage 2 (the
    exact inspection process); False draws stage 2 from the untouched lot.
    """
    acc = hyper_cdf(N, D, n1, c1)
    top = min(c2, n1, D)
    for i in range(c1 + 1, top + 1):
        w = hyper_pmf(N, D, n1, i)
        if w <= 0.0:
            continue
        if conditioned:
            acc += w * hyper_cdf(N - n1, D - i, n2, c2 - i)
        else:
            acc += w * hyper_cdf(N, D, n2, c2 - i)
    return acc


def double_accept_binom(p, n1, n2, c1, c2):
    acc = binom_cdf(p, n1, c1)
    for i in range(c1 + 1, min(c2, n1) + 1):
        w = binom_pmf(p, n1, i)
        if w > 0.0:
            acc += w * binom_cdf(p, n2, c2 - i)
    return acc


# --- sequential boundaries ---------------------------------------------------

def hyper_llr_boundaries(N, Da, Dr, log_a, log_b, n_t):
    """Integer accept/reject thresholds of the truncated hypergeometric SPRT.

    Returns (a, r) lists indexed 1..n_t (index 0 unused): after m draws with d
    defects, accept iff d <= a[m], reject iff d >= r[m]. Llr(m, d) is the exact
    log-likelihood ratio of D=Dr against D=Da; d > Da counts as +inf (reject),
    clean draws impossible under Dr count as -inf (accept).
    """
    dmax = min(Da, n_t)
    dcum = [0.0] * (dmax + 1)
    for j in range(dmax):
        dcum[j + 1] = dcum[j] + math.log((Dr - j) / (Da - j))
    ccum = [0.0] * (n_t + 1)
    dead = n_t + 1  # first clean-count impossible under Dr
    for j in range(n_t):
        if N - Dr - j <= 0:
            dead = j + 1
            break
        ccum[j + 1] = ccum[j] + math.log((N - Dr - j) / (N - Da - j))

    def llr(m, d):
        if d > Da:
            return _POS_INF
        if m - d >= dead:
            return _NEG_INF
        return dcum[d] + ccum[m - d]

    a = [-1] * (n_t + 1)
    r = [1 << 30] * (n_t + 1)
    for m in range(1, n_t + 1):
        am = a[m - 1] if m > 1 else -1
        # llr is increasing in d at fixed m; advance the two pointers
        while am + 1 <= m and llr(m, am + 1) <= log_b:
            am += 1
        rm = r[m - 1] if (m > 1 and r[m - 1] < (1 << 30)) else am + 1
        if rm <= am:
            rm = am + 1
        while rm <= m and llr(m, rm) < log_a:
            rm += 1
        a[m] = am
        r[m] = rm if (rm <= m and llr(m, rm) >= log_a) else (1 << 30)
        if a[m] >= r[m]:
            a[m] = r[m] - 1
    return a, r


def binom_llr_boundaries(pa, pr, log_a, log_b, n_t):
    """Integer SPRT thresholds for the with-replacement (binomial) model."""
    k1 = math.log(pr / pa)
    k2 = math.log((1.0 - pr) / (1.0 - pa))
    a = [-1] * (n_t + 1)
    r = [1 << 30] * (n_t + 1)
    for m in range(1, n_t + 1):
        # llr = d*k1 + (m-d)*k2; accept: llr <= log_b; reject: llr >= log_a
        am = math.floor((log_b - m * k2) / (k1 - k2))
        rm = math.ceil((log_a - m * k2) / (k1 - k2))
        # inclusive ties: exact hits accept/reject respectively
        if (rm - 1) * k1 + (m - rm + 1) * k2 >= log_a:
            rm -= 1
        a[m] = min(am, m)
        r[m] = rm if rm <= m else (1 << 30)
        if a[m] >= r[m]:
            a[m] = r[m] - 1
    return a, r


# --- sequential absorbing DP --------------------------------------------------

def sequential_dp_hyper(N, D, a, r, n_t, c_t):
    """Exact (oc, asn) of a truncated boundary plan on a lot with D defects."""
    alive = {0: 1.0}
    asn = 0.0
    oc = 0.0
    for m in range(1, n_t + 1):
        rem = N - (m - 1)
        new = {}
        for d, pr_ in alive.items():
            pd = (D - d) / rem
            if pd > 0.0:
                new[d + 1] = new.get(d + 1, 0.0) + pr_ * pd
            q = pr_ * (1.0 - pd)
            if q > 0.0:
                new[d] = new.get(d, 0.0) + q
        alive = {}
        stopped = 0.0
        am = c_t if m == n_t else a[m]
        rm = (c_t + 1) if m == n_t else r[m]
        for d, pr_ in new.items():
            if m == n_t:
                stopped += pr_
                if d <= am:
                    oc += pr_
            elif d >= rm:
                stopped += pr_
            elif d <= am:
                stopped += pr_
                oc += pr_
            else:
                alive[d] = pr_
        asn += m * stopped
        if not alive:
            break
    return oc, asn


def sequential_dp_binom(p, a, r, n_t, c_t):
    alive = {0: 1.0}
    asn = 0.0
    oc = 0.0
    for m in range(1, n_t + 1):
        new = {}
        for d, pr_ in alive.items():
            if p > 0.0:
                new[d + 1] = new.get(d + 1, 0.0) + pr_ * p
            q = pr_ * (1.0 - p)
            if q > 0.0:
                new[d] = new.get(d, 0.0) + q
        alive = {}
        stopped = 0.0
        am = c_t if m == n_t else a[m]
        rm = (c_t + 1) if m == n_t else r[m]
        for d, pr_ in new.items():
            if m == n_t:
                stopped += pr_
                if d <= am:
                    oc += pr_
            elif d >= rm:
                stopped += pr_
            elif d <= am:
                stopped += pr_
                oc += pr_
            else:
                alive[d] = pr_
        asn += m * stopped
        if not alive:
            break
    return oc, asn


# --- curtailed stage-2 expected inspections -----------------------------------

def curtailed_stage2_mean_hyper(N2, D2, n2, c):
    """E[items inspected] when stage 2 stops at the (c+1)-th defect.

    Exact for sampling without replacement from a population of N2 with D2
    defects: the truncated negative-hypergeometric identity augments the
    population by one item and one defect.
    """
    if c >= n2:
        return float(n2)
    if D2 <= 0:
        return float(n2)
    full = n2 * hyper_cdf(N2, D2, n2, c)
    early = (c + 1.0) * (N2 + 1.0) / (D2 + 1.0) * hyper_sf(N2 + 1, D2 + 1, n2 + 1, c + 2)
    return full + early


def curtailed_stage2_mean_binom(p, n2, c):
    if c >= n2 or p <= 0.0:
        return float(n2)
    full = n2 * binom_cdf(p, n2, c)
    early = (c + 1.0) / p * binom_sf(p, n2 + 1, c + 2)
    return full + early
