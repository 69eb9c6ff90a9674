"""Exact arithmetic in GF(p^f) for small odd-characteristic fields.

Elements are plain ints in [0, p^f): the base-p digits of the int are the
coefficients of the element on the polynomial basis 1, x, ..., x^(f-1),
where x is a root of the Conway polynomial for (p, f).  Small integers
0..p-1 therefore *are* the prime-subfield elements.

All arithmetic runs on log/antilog tables with Zech logarithms for
addition, so every operation is O(1) after the one-off table build.  The
tables also pin the reconstruction order of field elements: zero first,
then nonzero elements graded by the smallest subfield containing them
(smaller subfields first) and ordered inside a grade by discrete logarithm.
"""

from __future__ import annotations

from functools import lru_cache

from .conway import CONWAY_POLYNOMIALS, prime_factors
from .errors import ConfigurationError, DomainError

MAX_ORDER = 9**6


def _divisors(f: int) -> list[int]:
    return [d for d in range(1, f + 1) if f % d == 0]


class GF:
    """Arithmetic engine and element ordering for one finite field."""

    def __init__(self, p: int, f: int, modulus: tuple[int, ...]):
        self.p = p
        self.f = f
        self.order = p**f
        self.modulus = tuple(c % p for c in modulus)
        if len(self.modulus) != f + 1 or self.modulus[f] != 1:
            raise ConfigurationError(f"modulus must be monic of degree {f}")
        self._build_tables()
        self._rank = None
        self._rank_inv = None

    # -- construction ---------------------------------------------------

    def _build_tables(self):
        p, f, order = self.p, self.f, self.order
        n = order - 1
        # packed int of the reduction polynomial x^f mod modulus
        red = 0
        for i in range(f - 1, -1, -1):
            red = red * p + (-self.modulus[i]) % p
        pf = order

        def mulx(a):
            v = a * p
            c, low = divmod(v, pf)
            if c:
                # digit-wise low + c*red
                out, mult, r = 0, 1, red
                while r or low:
                    r, dr = divmod(r, p)
                    low, dl = divmod(low, p)
                    out += ((dl + c * dr) % p) * mult
                    mult *= p
                return out
            return low

        exp = [0] * n
        a = 1
        for k in range(n):
            exp[k] = a
            a = mulx(a)
        if a != 1:
            raise ConfigurationError(
                f"modulus for GF({p}^{f}) is not primitive: x has order < {n}"
            )
        log = [0] * order
        seen = 0
        for k, v in enumerate(exp):
            if log[v] == 0 and v != 1:
                seen += 1
            log[v] = k
        if seen != n - 1:
            raise ConfigurationError(f"modulus for GF({p}^{f}) is not irreducible")
        # Zech logarithms: zech[k] = log(x^k + 1), -1 where x^k = -1
        zech = [0] * n
        for k in range(n):
            t = exp[k]
            d0 = t % p
            t1 = t - d0 + (d0 + 1) % p
            zech[k] = -1 if t1 == 0 else log[t1]
        self.exp = exp
        self.log = log
        self.zech = zech
        self.primitive = exp[1] if f > 1 or n > 1 else 1
        self._half = n // 2 if p != 2 else 0

    # -- arithmetic ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        n = self.order - 1
        la = self.log[a]
        k = (self.log[b] - la) % n
        z = self.zech[k]
        if z < 0:
            return 0
        return self.exp[(la + z) % n]

    def neg(self, a: int) -> int:
        if a == 0:
            return 0
        return self.exp[(self.log[a] + self._half) % (self.order - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.exp[-self.log[a] % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self.exp[(self.log[a] * e) % (self.order - 1)]

    def frob(self, a: int, i: int = 1) -> int:
        """a ** (p**i)."""
        return self.pow(a, self.p**i)

    def from_int(self, c: int) -> int:
        return c % self.p

    def elements(self):
        return range(self.order)

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return self.log[a] % 2 == 0

    # -- subfields -------------------------------------------------------

    def subfield_orders(self) -> list[int]:
        return [self.p**d for d in _divisors(self.f)]

    def in_subfield(self, a: int, sub_order: int) -> bool:
        return self.pow(a, sub_order) == a

    def subfield_degree(self, a: int) -> int:
        """Degree over GF(p) of the smallest subfield containing a."""
        if a == 0:
            return 1
        n = self.order - 1
        m = self.log[a]
        for d in _divisors(self.f):
            if m * (self.p**d - 1) % n == 0:
                return d
        raise AssertionError("unreachable")

    def _check_sub(self, sub_order: int) -> int:
        p, d = sub_order, 0
        q = sub_order
        # sub_order must be p^d with d | f
        while p % self.p == 0 and p > 1:
            p //= self.p
            d += 1
        if p != 1 or d == 0 or self.f % d != 0:
            raise DomainError(f"GF({q}) is not a subfield of GF({self.p}^{self.f})")
        return self.f // d

    def trace_to(self, sub_order: int, a: int) -> int:
        e = self._check_sub(sub_order)
        acc, t = 0, a
        for _ in range(e):
            acc = self.add(acc, t)
            t = self.pow(t, sub_order)
        return acc

    def norm_to(self, sub_order: int, a: int) -> int:
        self._check_sub(sub_order)
        if a == 0:
            return 0
        return self.pow(a, (self.order - 1) // (sub_order - 1))

    def absolute_trace(self, a: int) -> int:
        return self.trace_to(self.p, a)

    # -- element ordering --------------------------------------------------

    def _build_rank(self):
        n = self.order - 1
        keyed = sorted(
            range(n), key=lambda m: (self.subfield_degree(self.exp[m]), m)
        )
        rank = [0] * self.order
        inv = [0] * self.order
        for r, m in enumerate(keyed, start=1):
            rank[self.exp[m]] = r
            inv[r] = self.exp[m]
        self._rank = rank
        self._rank_inv = inv

    def gap_rank(self, a: int) -> int:
        if self._rank is None:
            self._build_rank()
        return self._rank[a]

    def from_rank(self, r: int) -> int:
        if self._rank is None:
            self._build_rank()
        return self._rank_inv[r]

    # -- polynomials over this field ---------------------------------------

    def poly_eval(self, coeffs, x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_roots(self, coeffs) -> list[int]:
        """All roots in this field, by exhaustive evaluation."""
        if len(coeffs) < 2 or all(c == 0 for c in coeffs[1:]):
            raise DomainError("polynomial must have degree >= 1")
        return [x for x in range(self.order) if self.poly_eval(coeffs, x) == 0]

    def poly_from_roots(self, roots) -> list[int]:
        coeffs = [1]
        for r in roots:
            nr = self.neg(r)
            nxt = [0] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i] = self.add(nxt[i], self.mul(c, nr))
                nxt[i + 1] = self.add(nxt[i + 1], c)
            coeffs = nxt
        return coeffs

    # -- misc ----------------------------------------------------------------

    def name(self) -> str:
        return f"{self.p}^{self.f}" if self.f > 1 else str(self.p)

    def __repr__(self):
        return f"GF({self.name()})"

    def __reduce__(self):
        return (field_make, (self.p, self.f))


@lru_cache(maxsize=None)
def field_make(p: int, f: int) -> GF:
    """Build (and cache) GF(p^f) on its Conway modulus.

    Only odd p with bundled Conway data and p^f <= 9^6 are supported.
    """
    if p == 2:
        raise ConfigurationError("characteristic 2 is out of scope")
    if (p, f) not in CONWAY_POLYNOMIALS:
        raise ConfigurationError(f"no bundled Conway polynomial for ({p},{f})")
    if p**f > MAX_ORDER:
        raise ConfigurationError(f"GF({p}^{f}) exceeds the supported size {MAX_ORDER}")
    return GF(p, f, CONWAY_POLYNOMIALS[(p, f)])


def field_for_order(q: int) -> GF:
    """GF(q) for a prime power q."""
    for p in prime_factors(q):
        f = 0
        m = q
        while m > 1:
            if m % p:
                raise ConfigurationError(f"{q} is not a prime power")
            m //= p
            f += 1
        return field_make(p, f)
    raise ConfigurationError(f"invalid field order {q}")


def subfield_embedding(Fsub: GF, Fbig: GF):
    """(up, down) maps between a standalone field and its copy in a bigger one.

    Conway compatibility makes x -> x^step the canonical embedding on
    primitive elements, where step = (|Fbig|-1)/(|Fsub|-1).
    """
    if Fsub.p != Fbig.p or Fbig.f % Fsub.f:
        raise DomainError(f"{Fsub!r} is not a subfield of {Fbig!r}")
    step = (Fbig.order - 1) // (Fsub.order - 1)

    def up(a: int) -> int:
        return 0 if a == 0 else Fbig.exp[(Fsub.log[a] * step) % (Fbig.order - 1)]

    def down(a: int) -> int:
        if a == 0:
            return 0
        k = Fbig.log[a]
        if k % step:
            raise DomainError("element is not in the subfield")
        return Fsub.exp[(k // step) % (Fsub.order - 1)]

    return up, down


def element_to_wire(F: GF, a: int):
    """JSON wire form of a field element: {"field": ..., "log": k | "zero"}."""
    return {"field": F.name(), "log": "zero" if a == 0 else F.log[a]}


def element_from_wire(obj) -> tuple[GF, int]:
    name = obj["field"]
    if "^" in name:
        p, f = (int(t) for t in name.split("^"))
    else:
        p, f = int(name), 1
    F = field_make(p, f)
    k = obj["log"]
    return F, 0 if k == "zero" else F.exp[k % (F.order - 1)]
