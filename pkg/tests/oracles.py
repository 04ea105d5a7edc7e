"""Independent exact-rational oracles (big-integer arithmetic only).

Everything here recomputes quantities from first principles with Fraction
arithmetic and exhaustive enumeration, sharing no code with the production
kernels. Test-suite only.
"""

from fractions import Fraction
from math import comb


# --- distributions -------------------------------------------------------------

def hyper_pmf_row(N, D, n):
    """[P(X = k)] for k = 0..n as Fractions."""
    denom = comb(N, n)
    return [Fraction(comb(D, k) * comb(N - D, n - k), denom) for k in range(n + 1)]


def hyper_cdf_frac(N, D, n, k):
    if k < 0:
        return Fraction(0)
    k = min(k, n)
    denom = comb(N, n)
    return Fraction(sum(comb(D, j) * comb(N - D, n - j) for j in range(k + 1)), denom)


def hyper_sf_frac(N, D, n, k):
    """P(X >= k), inclusive."""
    return 1 - hyper_cdf_frac(N, D, n, k - 1)


def binom_pmf_frac(p: Fraction, n, k):
    return comb(n, k) * p**k * (1 - p) ** (n - k)


def binom_cdf_frac(p: Fraction, n, k):
    if k < 0:
        return Fraction(0)
    return sum(binom_pmf_frac(p, n, j) for j in range(min(k, n) + 1))


# --- plan design ----------------------------------------------------------------

def single_plan_oracle(pa, pr, alpha, beta_eff, N):
    """Exhaustive steps-1..5 search with rational comparisons.

    beta_eff is the consumer-side target actually used by the search.
    Returns (n, c) or None.
    """
    fa = Fraction(1) - Fraction(alpha)
    fb = Fraction(beta_eff)
    Da = int(Fraction(pa) * N + Fraction(1, 2))
    Dr = int(Fraction(pr) * N + Fraction(1, 2))
    for c in range(0, N + 1):
        n_upper = None
        for n in range(c, N + 1):
            if hyper_cdf_frac(N, Da, n, c) >= fa:
                n_upper = n
        n_lower = None
        for n in range(c, N + 1):
            if hyper_cdf_frac(N, Dr, n, c) <= fb:
                n_lower = n
                break
        if n_lower is not None and n_upper is not None and n_lower <= n_upper:
            return n_lower, c
    return None


def double_accept_frac(N, D, n1, n2, c1, c2, conditioned):
    acc = hyper_cdf_frac(N, D, n1, c1)
    for i in range(c1 + 1, min(c2, n1, D) + 1):
        if n1 - i > N - D:
            continue  # stage-1 outcome impossible: not enough clean items
        row = Fraction(comb(D, i) * comb(N - D, n1 - i), comb(N, n1))
        if row == 0:
            continue
        if conditioned:
            acc += row * hyper_cdf_frac(N - n1, D - i, n2, c2 - i)
        else:
            acc += row * hyper_cdf_frac(N, D, n2, c2 - i)
    return acc


def double_plan_oracle(pa, pr, alpha, beta_eff, N, n_max, c2_max):
    """Exhaustive (n, c1, c2) search minimizing expected effort at the
    acceptable rate; mirrors the production selection rule with rational
    feasibility checks. Returns (n, c1, c2) or None."""
    fa = Fraction(1) - Fraction(alpha)
    fb = Fraction(beta_eff)
    Da = int(Fraction(pa) * N + Fraction(1, 2))
    Dr = int(Fraction(pr) * N + Fraction(1, 2))
    best = None
    for c2 in range(1, c2_max + 1):
        for c1 in range(0, c2):
            for n in range(1, n_max + 1):
                if double_accept_frac(N, Dr, n, n, c1, c2, False) <= fb:
                    break
            else:
                continue
            if double_accept_frac(N, Da, n, n, c1, c2, False) < fa:
                continue
            p_i = hyper_cdf_frac(N, Da, n, c1) + 1 - hyper_cdf_frac(N, Da, n, min(c2, n))
            asn = n * (2 - p_i)
            cand = (asn, n, c2, c1)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    _, n, c2, c1 = best
    return n, c1, c2


# --- sequential -----------------------------------------------------------------

def sprt_regions_oracle(N, Da, Dr, ratio_a: Fraction, ratio_r: Fraction, n_t):
    """Integer accept/reject thresholds from exact likelihood ratios.

    ratio_r = (1-b)/alpha (reject at or above), ratio_a = b/(1-alpha)
    (accept at or below); the likelihood ratio of D=Dr against D=Da is
    evaluated as an exact rational. Returns (a, r) lists for m = 1..n_t.
    """
    a = [-1] * (n_t + 1)
    r = [1 << 30] * (n_t + 1)
    for m in range(1, n_t + 1):
        am, rm = -1, 1 << 30
        for d in range(0, m + 1):
            la = comb(Da, d) * comb(N - Da, m - d) if d <= Da and m - d <= N - Da else 0
            lr = comb(Dr, d) * comb(N - Dr, m - d) if d <= Dr and m - d <= N - Dr else 0
            if d > Da:
                accept, reject = False, True  # defect count impossible even under Dr's rival
            elif lr == 0:
                accept, reject = True, False  # clean run impossible under Dr
            else:
                ratio = Fraction(lr, la)
                accept = ratio <= ratio_a
                reject = ratio >= ratio_r
            if accept:
                am = d
            if reject:
                rm = d
                break
        a[m], r[m] = am, rm
    return a, r


def sequential_enum(N, D, a, r, n_t, c_t):
    """Exact (oc, asn) of boundary-plan execution by rational forward DP."""
    alive = {0: Fraction(1)}
    oc = Fraction(0)
    asn = Fraction(0)
    for m in range(1, n_t + 1):
        rem = N - (m - 1)
        new = {}
        for d, pr_ in alive.items():
            pd = Fraction(D - d, rem)
            if pd > 0:
                new[d + 1] = new.get(d + 1, Fraction(0)) + pr_ * pd
            q = pr_ * (1 - pd)
            if q > 0:
                new[d] = new.get(d, Fraction(0)) + q
        alive = {}
        stopped = Fraction(0)
        for d, pr_ in new.items():
            if m == n_t:
                stopped += pr_
                if d <= c_t:
                    oc += pr_
            elif d >= r[m]:
                stopped += pr_
            elif d <= a[m]:
                stopped += pr_
                oc += pr_
            else:
                alive[d] = pr_
        asn += m * stopped
        if not alive:
            break
    return oc, asn


# --- curtailed double enumeration ------------------------------------------------

def stage2_curtailed_mean_enum(N2, D2, n2, c):
    """E[draws] stopping at the (c+1)-th defect or after n2 draws, exact.

    E[min(T, n2)] = sum_{t=0}^{n2-1} P(first t draws contain <= c defects).
    """
    total = Fraction(0)
    for t in range(0, n2):
        total += hyper_cdf_frac(N2, D2, t, c)
    return total


def double_curtailed_asn_enum(N, D, n1, n2, c1, c2):
    """Exact expected inspections of the curtailed two-stage procedure."""
    total = Fraction(n1)
    row = hyper_pmf_row(N, D, n1)
    for i in range(c1 + 1, min(c2, n1, D) + 1):
        w = row[i]
        if w == 0:
            continue
        total += w * stage2_curtailed_mean_enum(N - n1, D - i, n2, c2 - i)
    return total
