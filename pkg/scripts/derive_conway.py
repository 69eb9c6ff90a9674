#!/usr/bin/env python3
"""Derive Conway polynomials from their defining property.

A Conway polynomial for (p, n) is the minimal monic primitive polynomial of
degree n over GF(p) that is norm-compatible with the Conway polynomials of
all proper subfields, minimality being taken in the lexicographic order of
the tuple (a_{n-1}, ..., a_0) where f = x^n + sum_i (-1)^(n-i) a_i x^i.

This is slow (pure Python) and meant to be run once; the results are
bundled as literals in the package.
"""

import sys
from functools import reduce

sys.setrecursionlimit(10000)


def poly_mul_mod(a, b, f, p):
    n = len(f) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    # reduce mod f (monic)
    for i in range(len(res) - 1, n - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(n):
                res[i - n + j] = (res[i - n + j] - c * f[j]) % p
    while len(res) > n:
        res.pop()
    while len(res) < n:
        res.append(0)
    return res


def poly_pow_mod(a, e, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = list(a)
    while e:
        if e & 1:
            result = poly_mul_mod(result, base, f, p)
        e >>= 1
        if e:
            base = poly_mul_mod(base, base, f, p)
    return result


def poly_gcd(a, b, p):
    a, b = list(a), list(b)

    def deg(c):
        d = len(c) - 1
        while d >= 0 and c[d] == 0:
            d -= 1
        return d

    while True:
        db = deg(b)
        if db < 0:
            return a
        da = deg(a)
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[db], p - 2, p)
        while da >= db:
            c = (a[da] * inv) % p
            if c:
                for j in range(db + 1):
                    a[da - db + j] = (a[da - db + j] - c * b[j]) % p
            da = deg(a)
        a, b = b, a


def prime_factors(m):
    fs = set()
    d = 2
    while d * d <= m:
        while m % d == 0:
            fs.add(d)
            m //= d
        d += 1
    if m > 1:
        fs.add(m)
    return sorted(fs)


def is_irreducible(f, p, n):
    if f[0] == 0:
        return False
    x = [0, 1] + [0] * (n - 2) if n > 2 else ([0, 1][:n] + [0] * max(0, n - 2))
    x = ([0, 1] + [0] * (n - 2))[:n]
    # Frobenius chain: g_k = x^(p^k) mod f
    g = list(x)
    for k in range(1, n + 1):
        g = poly_pow_mod(g, p, f, p)
        if k < n and n % k == 0:
            # gcd(g - x, f) must be 1 for proper divisor degrees
            diff = [(g[i] - x[i]) % p for i in range(n)]
            gg = poly_gcd(list(f), diff, p)
            d = max((i for i, c in enumerate(gg) if c), default=-1)
            if d > 0:
                return False
    return g == x


def is_primitive_root_x(f, p, n, group_factors):
    order = p**n - 1
    for r in group_factors:
        e = order // r
        if poly_pow_mod([0, 1] + [0] * (n - 2) if n >= 2 else [0], e, f, p) == [1] + [0] * (n - 1):
            return False
    return True


def is_compatible(f, p, n, known):
    order = p**n - 1
    for m in range(1, n):
        if n % m:
            continue
        sub = known[(p, m)]
        e = order // (p**m - 1)
        y = poly_pow_mod([0, 1] + [0] * (n - 2) if n >= 2 else [0], e, f, p)
        # evaluate sub at y, mod f
        acc = [0] * n
        for c in reversed(sub):
            acc = poly_mul_mod(acc, y, f, p)
            acc[0] = (acc[0] + c) % p
        if any(acc):
            return False
    return True


def conway(p, n, known):
    group_factors = prime_factors(p**n - 1)
    # enumerate a-tuples (a_{n-1},...,a_0) lexicographically
    a = [0] * n

    def tuple_to_poly(a):
        # f = x^n + sum (-1)^(n-i) a_i x^i ; a listed high->low (a[0]=a_{n-1})
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for idx, ai in enumerate(a):
            i = n - 1 - idx
            coeffs[i] = (pow(-1, n - i, p) * ai) % p
        return coeffs

    import itertools

    for a in itertools.product(range(p), repeat=n):
        f = tuple_to_poly(a)
        if f[0] == 0:
            continue
        if n == 1:
            # x - a0 : root a0 must be a primitive root mod p
            root = a[0] % p
            if root == 0:
                continue
            ok = all(pow(root, (p - 1) // r, p) != 1 for r in prime_factors(p - 1))
            if ok:
                return f
            continue
        if not is_irreducible(f, p, n):
            continue
        if not is_primitive_root_x(f, p, n, group_factors):
            continue
        if not is_compatible(f, p, n, known):
            continue
        return f
    raise RuntimeError(f"no Conway polynomial found for ({p},{n})")


def main():
    wanted = [
        (3, 1), (3, 2), (3, 3), (3, 4), (3, 6), (3, 12),
        (5, 1), (5, 2), (5, 3), (5, 6),
        (7, 1), (7, 2), (7, 3), (7, 6),
        (11, 1), (11, 2), (11, 3),
    ]
    known = {}
    import time
    for (p, n) in sorted(wanted, key=lambda t: (t[0], t[1])):
        t0 = time.time()
        f = conway(p, n, known)
        known[(p, n)] = f
        print(f"({p},{n}): {f}   [{time.time()-t0:.1f}s]", flush=True)
    print()
    print("CONWAY_POLYNOMIALS = {")
    for k in sorted(known):
        print(f"    {k}: {tuple(known[k])},")
    print("}")


if __name__ == "__main__":
    main()
