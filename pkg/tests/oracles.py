"""Slow pure-Python references, kept independent of the package code paths."""

import math


def templates(x, m, count):
    return [list(x[t:t + m]) for t in range(count)]


def chebyshev(a, b):
    return max(abs(p - q) for p, q in zip(a, b))


def naive_counts(x, m, r):
    x = [float(v) for v in x]
    count = len(x) - m
    tm = templates(x, m, count)
    tm1 = templates(x, m + 1, count)
    b_m = b_m1 = 0
    for i in range(count):
        for j in range(count):
            if i == j:
                continue
            if chebyshev(tm[i], tm[j]) < r:
                b_m += 1
            if chebyshev(tm1[i], tm1[j]) < r:
                b_m1 += 1
    return b_m, b_m1


def _centred(v):
    mu = sum(v) / len(v)
    return [a - mu for a in v]


def naive_phi(x, m, n, r):
    x = [float(v) for v in x]
    count = len(x) - m
    out = []
    for length in (m, m + 1):
        u = [_centred(v) for v in templates(x, length, count)]
        total = 0.0
        for i in range(count):
            row = 0.0
            for j in range(count):
                if i != j:
                    row += math.exp(-(chebyshev(u[i], u[j]) ** n) / r)
            total += row / (count - 1)
        out.append(total / count)
    return tuple(out)


def pop_sd(x):
    x = [float(v) for v in x]
    mu = sum(x) / len(x)
    return math.sqrt(sum((v - mu) ** 2 for v in x) / len(x))


def naive_grain(x, tau, offset, moment):
    x = [float(v) for v in x]
    out = []
    start = offset - 1
    while start + tau <= len(x):
        block = x[start:start + tau]
        mu = sum(block) / tau
        var = sum((b - mu) ** 2 for b in block) / tau
        out.append({"mean": mu, "var": var, "std": math.sqrt(var)}[moment])
        start += tau
    return out


def naive_profile_value(x, tau, moment, estimator, refined, m=2, n=2.0, factor=0.15):
    """Entropy at one scale, or None when undefined."""
    sd = pop_sd(x)
    r = factor * sd if estimator == "sample" else factor * sd ** n
    offsets = range(1, tau + 1) if refined else [1]
    grains = [naive_grain(x, tau, u, moment) for u in offsets]
    if any(len(g) < m + 2 for g in grains):
        return None
    if estimator == "sample":
        pairs = [naive_counts(g, m, r) for g in grains]
        num = sum(p[1] for p in pairs) / len(pairs)
        den = sum(p[0] for p in pairs) / len(pairs)
    else:
        pairs = [naive_phi(g, m, n, r) for g in grains]
        num = sum(p[1] for p in pairs) / len(pairs)
        den = sum(p[0] for p in pairs) / len(pairs)
    if num <= 0 or den <= 0:
        return None
    return -math.log(num / den)
