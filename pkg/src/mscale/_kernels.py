"""Compiled pair-scan kernels behind the entropy estimators.

Every kernel scans unordered template pairs ``i < j`` over the first
``n_tpl = len(x) - m`` start positions, so the m and m+1 template sets share
one index range. Ordered-pair totals are twice the unordered ones.

Rows are split into interleaved chunks (row ``p`` travels with row
``n_tpl - 1 - p`` so the triangular loop balances) and per-row results land in
a buffer that is reduced sequentially afterwards. Results are therefore
identical for any thread count.

Fuzzy distances are taken from the pairwise difference vector with its own
mean removed. That equals the Chebyshev distance between the two
individually baseline-removed templates, but only ever touches sample
differences, so shifting the input by a constant cannot change the result
when those differences are exact.
"""

import warnings

import numpy as np
from numba import config, njit, prange
from numba.core.errors import NumbaWarning

if not config.THREADING_LAYER or config.THREADING_LAYER == "default":
    config.THREADING_LAYER = "threadsafe"
# an outdated TBB falls back to OpenMP, which is fine here
warnings.filterwarnings("ignore", message=".*TBB threading layer.*", category=NumbaWarning)

# no "reassoc": it would undo the two-constant ln2 split below
_FM = {"nnan", "ninf", "nsz", "arcp", "contract"}

_LOG2E = 1.4426950408889634
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
# below this exp() is subnormal; flushed to zero
_EXP_FLOOR = -708.0


@njit(fastmath=_FM, cache=True, nogil=True)
def _exp_nonpos(a, out, bits, length):
    # SIMD-friendly exp for a <= 0: Cody-Waite reduction, degree-12 Taylor
    # polynomial (|error| < 2e-16 on |r| <= ln2/2), exponent built by bit view.
    for j in range(length):
        x = max(a[j], _EXP_FLOOR)
        k = np.floor(x * _LOG2E + 0.5)
        r = (x - k * _LN2_HI) - k * _LN2_LO
        p = 1.0 / 479001600.0
        p = p * r + 1.0 / 39916800.0
        p = p * r + 1.0 / 3628800.0
        p = p * r + 1.0 / 362880.0
        p = p * r + 1.0 / 40320.0
        p = p * r + 1.0 / 5040.0
        p = p * r + 1.0 / 720.0
        p = p * r + 1.0 / 120.0
        p = p * r + 1.0 / 24.0
        p = p * r + 1.0 / 6.0
        p = p * r + 0.5
        p = p * r + 1.0
        p = p * r + 1.0
        out[j] = p
        bits[j] = (np.int64(k) + 1023) << 52
    scale = bits.view(np.float64)
    for j in range(length):
        out[j] = out[j] * scale[j]


@njit(cache=True, nogil=True)
def _sum(v, length):
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    j = 0
    while j + 4 <= length:
        s0 += v[j]
        s1 += v[j + 1]
        s2 += v[j + 2]
        s3 += v[j + 3]
        j += 4
    while j < length:
        s0 += v[j]
        j += 1
    return (s0 + s1) + (s2 + s3)


@njit(cache=True, nogil=True)
def _sample_row(x, m, r, i, n_tpl, mask):
    length = n_tpl - i - 1
    xi = x[i]
    for jj in range(length):
        mask[jj] = abs(xi - x[i + 1 + jj]) < r
    for k in range(1, m):
        xi = x[i + k]
        for jj in range(length):
            mask[jj] &= abs(xi - x[i + 1 + k + jj]) < r
    cm = 0
    cm1 = 0
    xi = x[i + m]
    for jj in range(length):
        cm += mask[jj]
        cm1 += mask[jj] & (abs(xi - x[i + 1 + m + jj]) < r)
    return cm, cm1


@njit(fastmath=_FM, cache=True, nogil=True)
def _fuzzy_args_m2(x, n, r, i, n_tpl, arg_m, arg_m1):
    length = n_tpl - i - 1
    a0 = x[i]
    a1 = x[i + 1]
    a2 = x[i + 2]
    square = n == 2.0
    for jj in range(length):
        j = i + 1 + jj
        d0 = a0 - x[j]
        d1 = a1 - x[j + 1]
        d2 = a2 - x[j + 2]
        mu = (d0 + d1) * 0.5
        mu1 = (d0 + d1 + d2) / 3.0
        dm = max(abs(d0 - mu), abs(d1 - mu))
        dm1 = max(max(abs(d0 - mu1), abs(d1 - mu1)), abs(d2 - mu1))
        if square:
            arg_m[jj] = -(dm * dm) / r
            arg_m1[jj] = -(dm1 * dm1) / r
        else:
            arg_m[jj] = -(dm ** n) / r
            arg_m1[jj] = -(dm1 ** n) / r


@njit(fastmath=_FM, cache=True, nogil=True)
def _fuzzy_args_generic(x, m, n, r, i, n_tpl, arg_m, arg_m1, diffs, mean_m, mean_m1):
    length = n_tpl - i - 1
    for jj in range(length):
        mean_m[jj] = 0.0
    for k in range(m + 1):
        xi = x[i + k]
        dk = diffs[k]
        for jj in range(length):
            dk[jj] = xi - x[i + 1 + k + jj]
    for k in range(m):
        dk = diffs[k]
        for jj in range(length):
            mean_m[jj] += dk[jj]
    dlast = diffs[m]
    for jj in range(length):
        s = mean_m[jj]
        mean_m[jj] = s / m
        mean_m1[jj] = (s + dlast[jj]) / (m + 1)
        arg_m[jj] = 0.0
        arg_m1[jj] = abs(dlast[jj] - mean_m1[jj])
    for k in range(m):
        dk = diffs[k]
        for jj in range(length):
            arg_m[jj] = max(arg_m[jj], abs(dk[jj] - mean_m[jj]))
            arg_m1[jj] = max(arg_m1[jj], abs(dk[jj] - mean_m1[jj]))
    if n == 2.0:
        for jj in range(length):
            arg_m[jj] = -(arg_m[jj] * arg_m[jj]) / r
            arg_m1[jj] = -(arg_m1[jj] * arg_m1[jj]) / r
    else:
        for jj in range(length):
            arg_m[jj] = -(arg_m[jj] ** n) / r
            arg_m1[jj] = -(arg_m1[jj] ** n) / r


@njit(cache=True, nogil=True)
def _fuzzy_row(x, m, n, r, i, n_tpl, arg_m, arg_m1, out, bits, diffs, mean_m, mean_m1):
    length = n_tpl - i - 1
    if m == 2:
        _fuzzy_args_m2(x, n, r, i, n_tpl, arg_m, arg_m1)
    else:
        _fuzzy_args_generic(x, m, n, r, i, n_tpl, arg_m, arg_m1, diffs, mean_m, mean_m1)
    _exp_nonpos(arg_m, out, bits, length)
    s_m = _sum(out, length)
    _exp_nonpos(arg_m1, out, bits, length)
    s_m1 = _sum(out, length)
    return s_m, s_m1


@njit(cache=True, parallel=True)
def sample_counts(x, m, r, n_chunks):
    """Unordered (m, m+1) Chebyshev match counts, strict ``< r``."""
    n_tpl = x.shape[0] - m
    rows = np.zeros((n_tpl, 2), dtype=np.int64)
    half = (n_tpl + 1) // 2
    n_chunks = max(1, min(n_chunks, half))
    for c in prange(n_chunks):
        mask = np.empty(n_tpl, dtype=np.bool_)
        for p in range(c, half, n_chunks):
            a, b = _sample_row(x, m, r, p, n_tpl, mask)
            rows[p, 0] = a
            rows[p, 1] = b
            q = n_tpl - 1 - p
            if q != p:
                a, b = _sample_row(x, m, r, q, n_tpl, mask)
                rows[q, 0] = a
                rows[q, 1] = b
    cm = 0
    cm1 = 0
    for i in range(n_tpl):
        cm += rows[i, 0]
        cm1 += rows[i, 1]
    return cm, cm1


@njit(cache=True, parallel=True)
def fuzzy_sums(x, m, n, r, n_chunks):
    """Unordered sums of exp(-d**n / r) for template lengths m and m+1."""
    n_tpl = x.shape[0] - m
    rows = np.zeros((n_tpl, 2))
    half = (n_tpl + 1) // 2
    n_chunks = max(1, min(n_chunks, half))
    for c in prange(n_chunks):
        arg_m = np.empty(n_tpl)
        arg_m1 = np.empty(n_tpl)
        out = np.empty(n_tpl)
        bits = np.empty(n_tpl, dtype=np.int64)
        if m == 2:
            diffs = np.empty((1, 1))
            mean_m = np.empty(1)
            mean_m1 = np.empty(1)
        else:
            diffs = np.empty((m + 1, n_tpl))
            mean_m = np.empty(n_tpl)
            mean_m1 = np.empty(n_tpl)
        for p in range(c, half, n_chunks):
            a, b = _fuzzy_row(x, m, n, r, p, n_tpl, arg_m, arg_m1, out, bits, diffs, mean_m, mean_m1)
            rows[p, 0] = a
            rows[p, 1] = b
            q = n_tpl - 1 - p
            if q != p:
                a, b = _fuzzy_row(x, m, n, r, q, n_tpl, arg_m, arg_m1, out, bits, diffs, mean_m, mean_m1)
                rows[q, 0] = a
                rows[q, 1] = b
    s_m = 0.0
    s_m1 = 0.0
    for i in range(n_tpl):
        s_m += rows[i, 0]
        s_m1 += rows[i, 1]
    return s_m, s_m1
