"""Exact arithmetic in Z[w, w^-1] and its field of fractions.

The quarter parameter ``w`` satisfies ``q = w**4``.  Elements are immutable
and hashable, so they can be used freely as dictionary values and keys.

>>> x = OmegaLaurent({2: 1, 0: 3})
>>> x.to_text()
'3 + w^2'
>>> x.bar().to_text()
'w^-2 + 3'
>>> (x * x.bar()).to_text()
'3*w^-2 + 10 + 3*w^2'
"""

from __future__ import annotations

from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

__all__ = [
    "OmegaLaurent",
    "OmegaRational",
    "bar",
    "is_nonneg_q_laurent",
    "t_binomial",
    "ZERO",
    "ONE",
]

Scalar = Union[int, "OmegaLaurent"]


_KRONECKER_MIN = 24


def poly_product(a: Mapping[int, int], b: Mapping[int, int]) -> Dict[int, int]:
    """Product of two sparse Laurent polynomials given as exponent -> coefficient dicts.

    Large dense inputs are packed into big integers (Kronecker substitution)
    so the multiplication runs in CPython's bignum arithmetic.
    """
    if not a or not b:
        return {}
    if len(a) < _KRONECKER_MIN or len(b) < _KRONECKER_MIN:
        c: Dict[int, int] = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return {e: v for e, v in c.items() if v}
    lo_a, lo_b = min(a), min(b)
    step = 0
    for e in a:
        step = gcd(step, e - lo_a)
    for e in b:
        step = gcd(step, e - lo_b)
    step = step or 1
    bound = min(len(a), len(b)) * max(abs(v) for v in a.values()) * max(abs(v) for v in b.values())
    nbytes = (bound.bit_length() + 9) // 8
    bits = 8 * nbytes
    A = sum(v << (bits * ((e - lo_a) // step)) for e, v in a.items())
    B = sum(v << (bits * ((e - lo_b) // step)) for e, v in b.items())
    length = (max(a) - lo_a) // step + (max(b) - lo_b) // step + 1
    half = 1 << (bits - 1)
    # shift every digit into [0, 2^bits) so no borrows cross digit boundaries
    offset = half * (((1 << (bits * length)) - 1) // ((1 << bits) - 1))
    raw = (A * B + offset).to_bytes(nbytes * length, "little")
    out: Dict[int, int] = {}
    base = lo_a + lo_b
    for k in range(length):
        d = int.from_bytes(raw[k * nbytes:(k + 1) * nbytes], "little") - half
        if d:
            out[base + k * step] = d
    return out


class OmegaLaurent:
    """A Laurent polynomial in one variable with integer coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        c: Dict[int, int] = {}
        if terms:
            for e, v in terms.items():
                if v:
                    c[int(e)] = int(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[int, int]) -> "OmegaLaurent":
        # trusted constructor: c has no zero entries and is not shared
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, n: int) -> "OmegaLaurent":
        return cls._raw({0: n} if n else {})

    @classmethod
    def omega(cls, e: int, coeff: int = 1) -> "OmegaLaurent":
        """The monomial ``coeff * w**e``."""
        return cls._raw({e: coeff} if coeff else {})

    @classmethod
    def q(cls, k: int, coeff: int = 1) -> "OmegaLaurent":
        return cls.omega(4 * k, coeff)

    @staticmethod
    def coerce(x: Scalar) -> "OmegaLaurent":
        if isinstance(x, OmegaLaurent):
            return x
        if isinstance(x, int):
            return OmegaLaurent.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to OmegaLaurent")

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._c)

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(sorted(self._c.items()))

    def coefficient(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: 1}

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_unit(self) -> bool:
        """Units of Z[w^{+-1}] are exactly the monomials +-w^e."""
        return len(self._c) == 1 and abs(next(iter(self._c.values()))) == 1

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def content(self) -> int:
        g = 0
        for v in self._c.values():
            g = gcd(g, v)
        return g

    def eval_at_one(self) -> int:
        return sum(self._c.values())

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: Scalar) -> "OmegaLaurent":
        if isinstance(other, int):
            other = OmegaLaurent.const(other)
        elif not isinstance(other, OmegaLaurent):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return OmegaLaurent._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "OmegaLaurent":
        return OmegaLaurent._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other: Scalar) -> "OmegaLaurent":
        if isinstance(other, int):
            other = OmegaLaurent.const(other)
        elif not isinstance(other, OmegaLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "OmegaLaurent":
        return OmegaLaurent.coerce(other) - self

    def __mul__(self, other: Scalar) -> "OmegaLaurent":
        if isinstance(other, int):
            if not other:
                return ZERO
            return OmegaLaurent._raw({e: v * other for e, v in self._c.items()})
        if not isinstance(other, OmegaLaurent):
            return NotImplemented
        a, b = self._c, other._c
        if len(a) == 1:
            (ea, va), = a.items()
            return OmegaLaurent._raw({ea + e: va * v for e, v in b.items()})
        if len(b) == 1:
            (eb, vb), = b.items()
            return OmegaLaurent._raw({eb + e: vb * v for e, v in a.items()})
        return OmegaLaurent._raw(poly_product(a, b))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "OmegaLaurent":
        if k < 0:
            if not self.is_unit():
                raise ZeroDivisionError("negative power of a non-unit")
            (e, v), = self._c.items()
            return OmegaLaurent._raw({-e * (-k): v ** (-k)})
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "OmegaLaurent":
        """Multiply by ``w**k``."""
        if not k:
            return self
        return OmegaLaurent._raw({e + k: v for e, v in self._c.items()})

    def scale_exponents(self, s: int) -> "OmegaLaurent":
        """Substitute ``w -> w**s`` (used to specialize a t-polynomial)."""
        if s == 0:
            return OmegaLaurent.const(self.eval_at_one())
        return OmegaLaurent._raw({e * s: v for e, v in self._c.items()})

    def bar(self) -> "OmegaLaurent":
        return OmegaLaurent._raw({-e: v for e, v in self._c.items()})

    def divmod_exact(self, other: "OmegaLaurent") -> "OmegaLaurent | None":
        """Return ``self / other`` if it is a Laurent polynomial, else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        if self.is_zero():
            return ZERO
        if other.is_monomial():
            (eb, vb), = other._c.items()
            out = {}
            for e, v in self._c.items():
                qv, r = divmod(v, vb)
                if r:
                    return None
                out[e - eb] = qv
            return OmegaLaurent._raw(out)
        # long division from the top degree down
        rem = dict(self._c)
        db, lb = other.max_exp(), other._c[other.max_exp()]
        low_b = other.min_exp()
        quot: Dict[int, int] = {}
        low_limit = self.min_exp() - low_b
        while rem:
            top = max(rem)
            e = top - db
            if e < low_limit:
                return None
            qv, r = divmod(rem[top], lb)
            if r:
                return None
            quot[e] = qv
            for eb, vb in other._c.items():
                k = eb + e
                s = rem.get(k, 0) - qv * vb
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return OmegaLaurent._raw(quot)

    def exact_div(self, other: "OmegaLaurent") -> "OmegaLaurent":
        out = self.divmod_exact(other)
        if out is None:
            raise ArithmeticError("division is not exact in Z[w^{+-1}]")
        return out

    # -- predicates ---------------------------------------------------
    def is_nonneg_q_laurent(self) -> bool:
        return all(v > 0 and e % 4 == 0 for e, v in self._c.items())

    def is_q_laurent(self) -> bool:
        return all(e % 4 == 0 for e in self._c)

    # -- comparison / hashing -----------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, OmegaLaurent):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- printing -----------------------------------------------------
    def to_text(self, q_mode: bool = False, var: str = "w") -> str:
        """Canonical text, exponents ascending.

        With ``q_mode`` the exponents divisible by 4 are printed as powers
        of ``q``; any other exponent keeps the ``w`` form.
        """
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items()):
            if q_mode and e % 4 == 0:
                sym, k = "q", e // 4
            else:
                sym, k = var, e
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if k == 0:
                body = str(a)
            else:
                mono = sym if k == 1 else f"{sym}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"OmegaLaurent({self.to_text()!r})"

    __str__ = to_text


ZERO = OmegaLaurent._raw({})
ONE = OmegaLaurent._raw({0: 1})


def bar(x: OmegaLaurent) -> OmegaLaurent:
    return x.bar()


def is_nonneg_q_laurent(x: OmegaLaurent) -> bool:
    return x.is_nonneg_q_laurent()


class OmegaRational:
    """A fraction of two OmegaLaurent values.

    Simplification removes monomial factors and integer content from the
    denominator and replaces the fraction by a Laurent polynomial whenever
    the division is exact.  Equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar = 1):
        num = OmegaLaurent.coerce(num)
        den = OmegaLaurent.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _simplify(num, den)

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def to_laurent(self) -> OmegaLaurent:
        if not self.den.is_one():
            raise ArithmeticError("fraction is not a Laurent polynomial")
        return self.num

    def __add__(self, other: "OmegaRational | Scalar") -> "OmegaRational":
        o = _as_rational(other)
        if self.den == o.den:
            return OmegaRational(self.num + o.num, self.den)
        return OmegaRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "OmegaRational":
        return OmegaRational(-self.num, self.den)

    def __sub__(self, other: "OmegaRational | Scalar") -> "OmegaRational":
        return self + (-_as_rational(other))

    def __rsub__(self, other: Scalar) -> "OmegaRational":
        return _as_rational(other) - self

    def __mul__(self, other: "OmegaRational | Scalar") -> "OmegaRational":
        o = _as_rational(other)
        return OmegaRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "OmegaRational | Scalar") -> "OmegaRational":
        o = _as_rational(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return OmegaRational(self.num * o.den, self.den * o.num)

    def bar(self) -> "OmegaRational":
        return OmegaRational(self.num.bar(), self.den.bar())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, OmegaLaurent, OmegaRational)):
            o = _as_rational(other)
            return self.num * o.den == o.num * self.den
        return NotImplemented

    def __hash__(self) -> int:
        # fractions are only hashable when they reduce to Laurent form
        if self.den.is_one():
            return hash(self.num)
        raise TypeError("non-Laurent OmegaRational is unhashable")

    def to_text(self, q_mode: bool = False, var: str = "w") -> str:
        if self.den.is_one():
            return self.num.to_text(q_mode, var)
        return f"({self.num.to_text(q_mode, var)})/({self.den.to_text(q_mode, var)})"

    def __repr__(self) -> str:
        return f"OmegaRational({self.to_text()!r})"


def _as_rational(x: "OmegaRational | Scalar") -> OmegaRational:
    if isinstance(x, OmegaRational):
        return x
    return OmegaRational(x)


def _simplify(num: OmegaLaurent, den: OmegaLaurent) -> Tuple[OmegaLaurent, OmegaLaurent]:
    if num.is_zero():
        return ZERO, ONE
    # strip the lowest power of w from the denominator
    shift = den.min_exp()
    if shift:
        den = den.shift(-shift)
        num = num.shift(-shift)
    g = gcd(num.content(), den.content())
    if den.coefficient(den.max_exp()) < 0:
        g = -g
    if g != 1:
        num = OmegaLaurent._raw({e: v // g for e, v in num._c.items()})
        den = OmegaLaurent._raw({e: v // g for e, v in den._c.items()})
    if den.is_one():
        return num, den
    q = num.divmod_exact(den)
    if q is not None:
        return q, ONE
    return num, den


def t_binomial(r: int, p: int) -> OmegaRational:
    """The symmetric t-binomial coefficient.

    Its value is ``prod_{s<p} (t^{r-s} - t^{s-r}) / (t^{p-s} - t^{s-p})``,
    returned in the variable ``t`` (stored on the same exponent axis as w).

    >>> t_binomial(2, 1).to_text(var="t")
    't^-1 + t'
    """
    if p < 0:
        raise ValueError("t_binomial needs p >= 0")
    num, den = ONE, ONE
    for s in range(p):
        num = num * OmegaLaurent({r - s: 1, s - r: -1})
        den = den * OmegaLaurent({p - s: 1, s - p: -1})
    if num.is_zero():
        return OmegaRational(ZERO)
    return OmegaRational(num, den)


def laurent_sum(values: Iterable[OmegaLaurent]) -> OmegaLaurent:
    c: Dict[int, int] = {}
    for x in values:
        for e, v in x._c.items():
            c[e] = c.get(e, 0) + v
    return OmegaLaurent._raw({e: v for e, v in c.items() if v})
