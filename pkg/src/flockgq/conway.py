"""Bundled Conway polynomials and the machinery to re-derive them.

Coefficients are ascending, including the leading 1.  The bundled table was
produced by ``conway_polynomial`` below; every entry is re-checked for
irreducibility and primitivity when the corresponding field is built, and
the test suite re-derives the small entries from scratch.
"""

from __future__ import annotations

import itertools

CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (3, 12): (2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 6): (2, 0, 1, 4, 1, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 6): (3, 6, 4, 5, 1, 0, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
}


def prime_factors(m: int) -> list[int]:
    fs = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            fs.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fs.append(m)
    return fs


def _poly_mul_mod(a, b, f, p):
    n = len(f) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, n - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(n):
                res[i - n + j] = (res[i - n + j] - c * f[j]) % p
    res = res[:n]
    res += [0] * (n - len(res))
    return res


def _poly_pow_mod(a, e, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, f, p)
        e >>= 1
        if e:
            base = _poly_mul_mod(base, base, f, p)
    return result


def _poly_gcd_is_constant(a, b, p):
    a, b = list(a), list(b)

    def deg(c):
        d = len(c) - 1
        while d >= 0 and c[d] == 0:
            d -= 1
        return d

    while True:
        db = deg(b)
        if db < 0:
            return deg(a) <= 0
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


def _x(n):
    v = [0] * n
    if n >= 2:
        v[1] = 1
    return v


def is_irreducible(f: list[int] | tuple[int, ...], p: int) -> bool:
    n = len(f) - 1
    if n == 1:
        return True
    if f[0] == 0:
        return False
    x = _x(n)
    g = list(x)
    for k in range(1, n + 1):
        g = _poly_pow_mod(g, p, f, p)
        if k < n and n % k == 0:
            diff = [(g[i] - x[i]) % p for i in range(n)]
            if not _poly_gcd_is_constant(list(f), diff, p):
                return False
    return g == x


def root_is_primitive(f, p: int) -> bool:
    """Whether x generates the multiplicative group of GF(p)[x]/(f)."""
    n = len(f) - 1
    order = p**n - 1
    if n == 1:
        root = (-f[0]) % p
        return root != 0 and all(pow(root, order // r, p) != 1 for r in prime_factors(order))
    one = [1] + [0] * (n - 1)
    return all(_poly_pow_mod(_x(n), order // r, f, p) != one for r in prime_factors(order))


def is_norm_compatible(f, p: int, known: dict[tuple[int, int], tuple[int, ...]]) -> bool:
    """Roots of subfield Conway polynomials must be the corresponding norms."""
    n = len(f) - 1
    order = p**n - 1
    for m in range(1, n):
        if n % m:
            continue
        sub = known[(p, m)]
        y = _poly_pow_mod(_x(n), order // (p**m - 1), f, p)
        acc = [0] * n
        for c in reversed(sub):
            acc = _poly_mul_mod(acc, y, f, p)
            acc[0] = (acc[0] + c) % p
        if any(acc):
            return False
    return True


def conway_polynomial(p: int, n: int, known=None) -> tuple[int, ...]:
    """Recompute the Conway polynomial for (p, n) from the definition.

    ``known`` maps (p, m) to Conway polynomials for the proper divisors m of
    n; it defaults to the bundled table.
    """
    if known is None:
        known = CONWAY_POLYNOMIALS
    for a in itertools.product(range(p), repeat=n):
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for idx, ai in enumerate(a):
            i = n - 1 - idx
            coeffs[i] = (pow(-1, n - i, p) * ai) % p
        if coeffs[0] == 0:
            continue
        if n > 1 and not is_irreducible(coeffs, p):
            continue
        if not root_is_primitive(coeffs, p):
            continue
        if n > 1 and not is_norm_compatible(coeffs, p, known):
            continue
        return tuple(coeffs)
    raise RuntimeError(f"no Conway polynomial found for ({p},{n})")
