"""High-precision references for the group tests, built on numerical quadrature."""

import mpmath as mp

mp.mp.dps = 40


def _mean(v):
    return mp.fsum(v) / len(v)


def _var(v):
    mu = _mean(v)
    return mp.fsum((x - mu) ** 2 for x in v) / (len(v) - 1)


def t_density(s, df):
    c = mp.gamma((df + 1) / 2) / (mp.sqrt(df * mp.pi) * mp.gamma(df / 2))
    return c * (1 + s * s / df) ** (-(df + 1) / 2)


def f_density(x, d1, d2):
    if x == 0:
        return mp.mpf(0) if d1 > 2 else mp.inf
    num = (d1 * x) ** d1 * d2 ** d2 / (d1 * x + d2) ** (d1 + d2)
    return mp.sqrt(num) / (x * mp.beta(d1 / 2, d2 / 2))


def welch_p(a, b):
    a = [mp.mpf(x) for x in a]
    b = [mp.mpf(x) for x in b]
    va, vb = _var(a) / len(a), _var(b) / len(b)
    t = (_mean(a) - _mean(b)) / mp.sqrt(va + vb)
    df = (va + vb) ** 2 / (va ** 2 / (len(a) - 1) + vb ** 2 / (len(b) - 1))
    tail = mp.quad(lambda s: t_density(s, df), [abs(t), abs(t) + 10, mp.inf])
    return float(min(1, 2 * tail))


def levene_p(a, b):
    groups = [[mp.mpf(x) for x in g] for g in (a, b)]
    z = [[abs(x - _mean(g)) for x in g] for g in groups]
    n = sum(len(g) for g in z)
    grand = mp.fsum(mp.fsum(g) for g in z) / n
    between = mp.fsum(len(g) * (_mean(g) - grand) ** 2 for g in z)
    within = mp.fsum(mp.fsum((x - _mean(g)) ** 2 for x in g) for g in z)
    d1, d2 = 1, n - 2
    f = d2 / d1 * between / within
    if f == 0:
        return 1.0
    return float(mp.quad(lambda x: f_density(x, d1, d2), [f, f + 10, mp.inf]))


# (group a, group b) pairs shared by the unit tests and the acceptance gate
TEST_FIXTURES = [
    ([0, 0, 0, 0, 1], [1, 1, 1, 1, 0]),
    ([1.2, 3.4, 2.2, 5.1, 4.4], [2.0, 2.5, 1.9, 2.2]),
    ([10.1, 9.8, 10.4, 10.0, 9.7, 10.3], [11.5, 12.9, 10.2, 13.3, 12.0, 11.1, 14.2]),
    ([0.5, -0.25, 0.125, 1.5], [3.0, 2.75, 4.5, 2.0, 3.25]),
    ([1, 2, 3, 4, 5, 6, 7, 8], [2, 4, 6, 8, 10, 12, 14, 16]),
    ([2.31, 2.37, 2.29, 2.41, 2.35], [2.12, 2.58, 2.05, 2.66, 2.49]),
    ([100, 102, 98, 101, 99, 103, 97], [100.5, 101.5, 99.5]),
    ([-3.0, -1.0, 0.0, 2.0, 7.0], [-0.5, 0.5, 0.25, -0.25, 0.0, 0.75]),
    ([1.0, 1.1, 0.9, 1.05, 0.95, 1.02, 0.98, 1.01], [1.3, 0.7, 1.6, 0.4, 1.2, 0.8, 1.4, 0.6]),
    ([5.5, 6.1, 5.9, 6.4, 5.2, 6.0], [4.9, 5.1, 5.0, 4.8, 5.3, 5.2]),
]

# (raw p values, adjusted values worked out by hand with the step-up rule)
BH_FIXTURES = [
    ([0.04], [0.04]),
    ([0.01, 0.02, 0.03], [0.03, 0.03, 0.03]),
    ([0.9, 0.001], [0.9, 0.002]),
    ([0.375, 0.0625, 0.25, 1.0], [0.5, 0.25, 0.5, 1.0]),
    ([0.5, 0.5, 0.75, 0.015625], [2 / 3, 2 / 3, 0.75, 0.0625]),
]
