"""Exact arithmetic over F_q, A = F_q[T] and F = F_q(T).

Field elements are the integers ``0..q-1``.  For ``q = p`` they are the
residues mod ``p``; for ``q = p^e`` with ``e > 1`` an element is the base-p
digit vector of a polynomial in the generator ``a`` reduced modulo a fixed
primitive polynomial of degree ``e``.  Polynomials are immutable tuples of
field elements, lowest degree first, with no trailing zeros.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Iterator, Sequence


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    p = next(d for d in itertools.count(2) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"q must be a prime power, got {q}")
    return p, e


class Fq:
    """The finite field with q elements, as integer-coded tables."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.e = _prime_power(q)
        p, e = self.p, self.e
        if e == 1:
            self.modulus_digits = None
            add = [[(a + b) % p for b in range(q)] for a in range(q)]
            mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            self.modulus_digits = _primitive_poly(p, e)
            add = [[_digits_add(a, b, p, e) for b in range(q)] for a in range(q)]
            mul = [[_digits_mul(a, b, p, e, self.modulus_digits) for b in range(q)] for a in range(q)]
        self.add_t = add
        self.mul_t = mul
        self.neg_t = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
        self.inv_t = [0] + [next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q)]
        # generator of the multiplicative group; for e > 1 it is the class of `a`
        self.gen = p if e > 1 else _primitive_root(p)

    def __repr__(self) -> str:
        return f"Fq({self.q})"

    def __reduce__(self):
        return (field, (self.q,))

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.inv_t[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul_t[r][a]
            a = self.mul_t[a][a]
            n >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_q."""
        return (n % self.p) if self.e == 1 else n % self.p


@functools.cache
def field(q: int) -> Fq:
    return Fq(q)


def _digits(a: int, p: int, e: int) -> list[int]:
    return [(a // p**i) % p for i in range(e)]


def _undigits(ds: Sequence[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(ds))


def _digits_add(a: int, b: int, p: int, e: int) -> int:
    return _undigits([(x + y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p)


def _digits_mul(a: int, b: int, p: int, e: int, mod: Sequence[int]) -> int:
    x, y = _digits(a, p, e), _digits(b, p, e)
    prod = [0] * (2 * e - 1)
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            prod[i + j] = (prod[i + j] + xi * yj) % p
    # mod is monic of degree e, lowest first
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
    return _undigits(prod[:e], p)


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    for g in range(2, p):
        if len({pow(g, k, p) for k in range(1, p)}) == p - 1:
            return g
    raise AssertionError("unreachable")


def _primitive_poly(p: int, e: int) -> list[int]:
    """Lexicographically first monic polynomial of degree e over F_p whose root generates F_{p^e}^*."""
    q = p**e
    for tail in itertools.product(range(p), repeat=e):
        mod = list(tail) + [1]
        if mod[0] == 0:
            continue
        # order of x modulo mod must be q - 1
        x, r, order = p, 1, None
        for k in range(1, q):
            r = _digits_mul(r, x, p, e, mod)
            if r == 1:
                order = k
                break
        if order == q - 1:
            return mod
    raise AssertionError("no primitive polynomial found")


class Poly:
    """Polynomial over F_q, immutable, coefficients lowest degree first."""

    __slots__ = ("F", "c", "_hash")

    def __init__(self, F: Fq, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.F = F
        self.c = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, F: Fq, c: tuple) -> "Poly":
        obj = object.__new__(cls)
        obj.F = F
        obj.c = c
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, F: Fq) -> "Poly":
        return cls._raw(F, ())

    @classmethod
    def one(cls, F: Fq) -> "Poly":
        return cls._raw(F, (1,))

    @classmethod
    def const(cls, F: Fq, a: int) -> "Poly":
        return cls._raw(F, (a,) if a else ())

    @classmethod
    def T(cls, F: Fq) -> "Poly":
        return cls._raw(F, (0, 1))

    @classmethod
    def monomial(cls, F: Fq, n: int, a: int = 1) -> "Poly":
        if a == 0:
            return cls._raw(F, ())
        return cls._raw(F, (0,) * n + (a,))

    @classmethod
    def from_key(cls, F: Fq, key: int) -> "Poly":
        """Inverse of `key`: base-q digits become coefficients."""
        c = []
        while key:
            key, r = divmod(key, F.q)
            c.append(r)
        return cls._raw(F, tuple(c))

    @property
    def key(self) -> int:
        """Base-q integer encoding; gives a total order with 0 < 1 < ... ."""
        k, q = 0, self.F.q
        for a in reversed(self.c):
            k = k * q + a
        return k

    # basic queries
    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def __bool__(self) -> bool:
        return bool(self.c)

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c and self.F.q == other.F.q
        if isinstance(other, int):
            return self.c == ((other,) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.F.q, self.c))
        return self._hash

    def __lt__(self, other: "Poly") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        from .parse import format_poly

        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        from .parse import format_poly

        return format_poly(self)

    def __getitem__(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.c)

    # ring operations
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.const(self.F, self.F.from_int(other))
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        F = self.F
        if F.e == 1:
            p = F.p
            c = [(x + y) % p for x, y in zip(a, b)] + list(a[len(b):])
        else:
            add = F.add_t
            c = [add[x][y] for x, y in zip(a, b)] + list(a[len(b):])
        return Poly(F, c)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        neg = self.F.neg_t
        return Poly._raw(self.F, tuple(neg[x] for x in self.c))

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw(self.F, ())
        F = self.F
        if F.q == 2:
            return _from_bits(F, _clmul(_to_bits(a), _to_bits(b)))
        if F.e == 1:
            p = F.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(F, [v % p for v in out])
        add, mul = F.add_t, F.mul_t
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    out[i + j] = add[out[i + j]][row[y]]
        return Poly(F, out)

    __rmul__ = __mul__

    def scale(self, a: int) -> "Poly":
        if a == 0:
            return Poly._raw(self.F, ())
        row = self.F.mul_t[a]
        return Poly._raw(self.F, tuple(row[x] for x in self.c))

    def shift(self, n: int) -> "Poly":
        """Multiply by T^n (n >= 0)."""
        if not self.c or n == 0:
            return self
        return Poly._raw(self.F, (0,) * n + self.c)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        r, b = Poly.one(self.F), self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        return poly_divrem(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return poly_divrem(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return poly_divrem(self, other)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self.scale(self.F.inv(self.lc))

    def is_monic(self) -> bool:
        return self.lc == 1

    def frobenius(self, times: int = 1) -> "Poly":
        """self^(q^times); coefficients are fixed, so this is T -> T^(q^times)."""
        if times == 0 or len(self.c) <= 1:
            return self
        step = self.F.q**times
        out = [0] * ((len(self.c) - 1) * step + 1)
        for i, x in enumerate(self.c):
            out[i * step] = x
        return Poly._raw(self.F, tuple(out))

    def __call__(self, x: int) -> int:
        """Evaluate at an element of F_q."""
        F, r = self.F, 0
        for a in reversed(self.c):
            r = F.add(F.mul(r, x), a)
        return r

    def trailing_zeros(self) -> int:
        """Exponent of T dividing self (self nonzero)."""
        for i, a in enumerate(self.c):
            if a:
                return i
        raise ValueError("zero polynomial")


def _to_bits(c: tuple) -> int:
    n = 0
    for i, x in enumerate(c):
        if x:
            n |= 1 << i
    return n


def _from_bits(F: Fq, n: int) -> Poly:
    c = []
    while n:
        c.append(n & 1)
        n >>= 1
    return Poly._raw(F, tuple(c))


def _clmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r, i = 0, 0
    while b:
        if b & 1:
            r ^= a << i
        b >>= 1
        i += 1
    return r


def poly_divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division a = quot*b + rem with deg rem < deg b."""
    if not b.c:
        raise ZeroDivisionError("division by the zero polynomial")
    F = a.F
    db = len(b.c) - 1
    if len(a.c) - 1 < db:
        return Poly._raw(F, ()), a
    if F.q == 2:
        x, y = _to_bits(a.c), _to_bits(b.c)
        qb, nb = 0, db
        while x.bit_length() - 1 >= nb:
            s = x.bit_length() - 1 - nb
            qb |= 1 << s
            x ^= y << s
        return _from_bits(F, qb), _from_bits(F, x)
    r = list(a.c)
    inv_lc = F.inv(b.c[-1])
    quot = [0] * (len(r) - db)
    mul, sub = F.mul_t, F.sub
    bc = b.c
    for k in range(len(r) - 1, db - 1, -1):
        coef = r[k]
        if coef:
            t = mul[coef][inv_lc]
            quot[k - db] = t
            row = mul[t]
            for i in range(db + 1):
                r[k - db + i] = sub(r[k - db + i], row[bc[i]])
    return Poly(F, quot), Poly(F, r[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with g = s*a + t*b monic gcd."""
    F = a.F
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while r1:
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if not r0:
        return r0, s0, t0
    u = F.inv(r0.lc)
    return r0.scale(u), s0.scale(u), t0.scale(u)


def polys_of_degree_less(F: Fq, n: int) -> Iterator[Poly]:
    """All polynomials of degree < n, in key order."""
    for key in range(F.q**n):
        yield Poly.from_key(F, key)


def monic_polys(F: Fq, d: int) -> Iterator[Poly]:
    """All monic polynomials of degree exactly d, in key order."""
    for key in range(F.q**d):
        low = Poly.from_key(F, key)
        yield Poly._raw(F, low.c + (0,) * (d - len(low.c)) + (1,))


class RatFn:
    """Reduced rational function num/den with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        F = num.F
        if den is None:
            den = Poly.one(F)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            if not num:
                den = Poly.one(F)
            elif not den.is_one():
                g = poly_gcd(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
            if den.lc != 1:
                u = F.inv(den.lc)
                num, den = num.scale(u), den.scale(u)
        self.num = num
        self.den = den

    @property
    def F(self) -> Fq:
        return self.num.F

    @classmethod
    def of(cls, x, F: Fq | None = None) -> "RatFn":
        if isinstance(x, RatFn):
            return x
        if isinstance(x, Poly):
            return cls(x, Poly.one(x.F), reduced=True)
        if isinstance(x, int) and F is not None:
            return cls(Poly.const(F, F.from_int(x)), reduced=True)
        raise TypeError(f"cannot convert {x!r} to RatFn")

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_poly(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Poly)):
            return self.den.is_one() and self.num == other
        if isinstance(other, RatFn):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        from .parse import format_ratfn

        return f"RatFn({format_ratfn(self)!r})"

    def __str__(self) -> str:
        from .parse import format_ratfn

        return format_ratfn(self)

    def _c(self, other) -> "RatFn":
        if isinstance(other, RatFn):
            return other
        if isinstance(other, Poly):
            return RatFn(other, reduced=True)
        if isinstance(other, int):
            return RatFn.of(other, self.F)
        return NotImplemented

    def __add__(self, other) -> "RatFn":
        o = self._c(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return RatFn(self.num + o.num, self.den)
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den, reduced=True)

    def __sub__(self, other) -> "RatFn":
        o = self._c(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "RatFn":
        return self._c(other) - self

    def __mul__(self, other) -> "RatFn":
        o = self._c(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFn(self.den, self.num)

    def __truediv__(self, other) -> "RatFn":
        o = self._c(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "RatFn":
        return self._c(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFn":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFn(self.num**n, self.den**n, reduced=True)

    def frobenius(self, times: int = 1) -> "RatFn":
        return RatFn(self.num.frobenius(times), self.den.frobenius(times), reduced=True)

    def val_inf(self) -> int:
        """Valuation at infinity: deg den - deg num."""
        if not self.num:
            raise ValueError("valuation of zero")
        return self.den.deg - self.num.deg

    def poly_part(self) -> Poly:
        return self.num // self.den

    def height(self) -> int:
        """max(deg num, deg den), the degree of x as a map P^1 -> P^1."""
        return max(self.num.deg, self.den.deg)
