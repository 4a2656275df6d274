"""Quantum tori over an integer skew form.

A ``TorusElement`` is a finite sum of ``c * A^v`` with ``c`` in Z[w^{+-1}]
and ``v`` an integer vector.  The product is twisted:
``A^u A^v = w^{-L(u, v)} A^{u+v}``.

Coefficients are kept internally as plain ``{exponent: int}`` dicts so that
the inner multiplication loop stays cheap; the public API hands out
``OmegaLaurent`` values.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .coeff import OmegaLaurent, poly_product

Vec = Tuple[int, ...]
Raw = Dict[int, int]
CoeffLike = Union[int, OmegaLaurent]


class SkewForm:
    """A skew-symmetric integer matrix, used as a bilinear form."""

    __slots__ = ("matrix", "rank", "_rows")

    def __init__(self, matrix: Sequence[Sequence[int]]):
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        for i, row in enumerate(m):
            if len(row) != len(m):
                raise ValueError("form matrix must be square")
            for j in range(len(m)):
                if row[j] != -m[j][i]:
                    raise ValueError("form matrix must be skew-symmetric")
        self.matrix = m
        self.rank = len(m)
        self._rows = m

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        total = 0
        for i, ui in enumerate(u):
            if ui:
                row = self._rows[i]
                total += ui * sum(r * x for r, x in zip(row, v) if x)
        return total

    def apply(self, v: Sequence[int]) -> Vec:
        """The vector ``M v`` so that ``pairing(u, v) = u . (M v)``."""
        return tuple(sum(r * x for r, x in zip(row, v)) for row in self._rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SkewForm) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"SkewForm(rank={self.rank})"


def _raw_of(c: CoeffLike) -> Raw:
    if isinstance(c, int):
        return {0: c} if c else {}
    return dict(c._c)


def _lau(raw: Raw) -> OmegaLaurent:
    return OmegaLaurent._raw(dict(raw))


def _add_into(acc: Dict[Vec, Raw], v: Vec, raw: Raw, shift: int = 0, scale: int = 1) -> None:
    slot = acc.get(v)
    if slot is None:
        slot = acc[v] = {}
    for e, x in raw.items():
        k = e + shift
        s = slot.get(k, 0) + scale * x
        if s:
            slot[k] = s
        else:
            slot.pop(k, None)
    if not slot:
        del acc[v]


def _mul_raw(a: Raw, b: Raw, shift: int) -> Raw:
    if len(a) == 1 and len(b) == 1:
        (ea, xa), = a.items()
        (eb, xb), = b.items()
        return {ea + eb + shift: xa * xb}
    prod = poly_product(a, b)
    return {k + shift: x for k, x in prod.items()} if shift else prod


class TorusElement:
    __slots__ = ("form", "_t")

    def __init__(self, form: SkewForm, terms: Mapping[Sequence[int], CoeffLike] | None = None):
        self.form = form
        t: Dict[Vec, Raw] = {}
        for v, c in (terms or {}).items():
            v = tuple(int(x) for x in v)
            if len(v) != form.rank:
                raise ValueError("exponent vector has the wrong length")
            raw = _raw_of(c)
            if raw:
                _add_into(t, v, raw)
        self._t = t

    @classmethod
    def _from_raw(cls, form: SkewForm, t: Dict[Vec, Raw]) -> "TorusElement":
        obj = cls.__new__(cls)
        obj.form = form
        obj._t = t
        return obj

    @classmethod
    def monomial(cls, form: SkewForm, v: Sequence[int], coeff: CoeffLike = 1) -> "TorusElement":
        return cls(form, {tuple(v): coeff})

    @classmethod
    def one(cls, form: SkewForm) -> "TorusElement":
        return cls.monomial(form, (0,) * form.rank)

    @classmethod
    def zero(cls, form: SkewForm) -> "TorusElement":
        return cls._from_raw(form, {})

    @classmethod
    def generator(cls, form: SkewForm, i: int, power: int = 1) -> "TorusElement":
        v = [0] * form.rank
        v[i] = power
        return cls.monomial(form, v)

    # -- inspection ---------------------------------------------------
    def terms(self) -> Dict[Vec, OmegaLaurent]:
        return {v: _lau(c) for v, c in self._t.items()}

    def items(self) -> List[Tuple[Vec, OmegaLaurent]]:
        return [(v, _lau(self._t[v])) for v in sorted(self._t)]

    def coefficient(self, v: Sequence[int]) -> OmegaLaurent:
        return _lau(self._t.get(tuple(v), {}))

    def support(self) -> List[Vec]:
        return sorted(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_unit_monomial(self) -> bool:
        if len(self._t) != 1:
            return False
        (c,) = self._t.values()
        return len(c) == 1 and abs(next(iter(c.values()))) == 1

    def leading_term(self) -> Tuple[Vec, OmegaLaurent]:
        """The lexicographically largest exponent and its coefficient."""
        if not self._t:
            raise ValueError("zero element has no leading term")
        v = max(self._t)
        return v, _lau(self._t[v])

    def lowest_term(self) -> Tuple[Vec, OmegaLaurent]:
        if not self._t:
            raise ValueError("zero element has no lowest term")
        v = min(self._t)
        return v, _lau(self._t[v])

    def eval_at_one(self) -> Dict[Vec, int]:
        out = {}
        for v, c in self._t.items():
            s = sum(c.values())
            if s:
                out[v] = s
        return out

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "TorusElement") -> None:
        if self.form is not other.form and self.form != other.form:
            raise ValueError("elements live on different quantum tori")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        t = {v: dict(c) for v, c in self._t.items()}
        for v, c in other._t.items():
            _add_into(t, v, c)
        return TorusElement._from_raw(self.form, t)

    def __neg__(self) -> "TorusElement":
        return TorusElement._from_raw(self.form, {v: {e: -x for e, x in c.items()} for v, c in self._t.items()})

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        t = {v: dict(c) for v, c in self._t.items()}
        for v, c in other._t.items():
            _add_into(t, v, c, scale=-1)
        return TorusElement._from_raw(self.form, t)

    def scale(self, c: CoeffLike) -> "TorusElement":
        raw = _raw_of(c)
        if not raw:
            return TorusElement.zero(self.form)
        return TorusElement._from_raw(
            self.form, {v: _mul_raw(x, raw, 0) for v, x in self._t.items()}
        )

    def shift(self, k: int) -> "TorusElement":
        """Multiply every coefficient by ``w**k``."""
        if not k:
            return self
        return TorusElement._from_raw(
            self.form, {v: {e + k: x for e, x in c.items()} for v, c in self._t.items()}
        )

    def __mul__(self, other: Union["TorusElement", CoeffLike]) -> "TorusElement":
        if isinstance(other, (int, OmegaLaurent)):
            return self.scale(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        return mul_truncated(self, other)

    def __rmul__(self, other: CoeffLike) -> "TorusElement":
        if isinstance(other, (int, OmegaLaurent)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "TorusElement":
        if k < 0:
            return self.monomial_inverse() ** (-k)
        out = TorusElement.one(self.form)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def monomial_inverse(self) -> "TorusElement":
        if not self.is_unit_monomial():
            raise ArithmeticError("non-invertible factor")
        (v, c), = self._t.items()
        (e, x), = c.items()
        # (x w^e A^v)^{-1} = x w^{-e} A^{-v}, since L(v, -v) = 0
        return TorusElement._from_raw(self.form, {tuple(-a for a in v): {-e: x}})

    def star(self) -> "TorusElement":
        """Bar every coefficient and keep each A^v; an antiautomorphism."""
        return TorusElement._from_raw(
            self.form, {v: {-e: x for e, x in c.items()} for v, c in self._t.items()}
        )

    def map_coefficients(self, f: Callable[[OmegaLaurent], OmegaLaurent]) -> "TorusElement":
        return TorusElement(self.form, {v: f(_lau(c)) for v, c in self._t.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.form == other.form and self._t == other._t

    def __hash__(self):  # pragma: no cover - mutable-looking; not hashable
        raise TypeError("TorusElement is not hashable")

    # -- division -----------------------------------------------------
    def right_divide(self, d: "TorusElement") -> Optional["TorusElement"]:
        """Q with ``Q * d == self``, or None when no Laurent quotient exists."""
        return _divide(self, d, left=False)

    def left_divide(self, d: "TorusElement") -> Optional["TorusElement"]:
        """Q with ``d * Q == self``, or None when no Laurent quotient exists."""
        return _divide(self, d, left=True)

    # -- printing -----------------------------------------------------
    def to_text(self, labels: Sequence[str] | None = None, q_mode: bool = False) -> str:
        if not self._t:
            return "0"
        if labels is None:
            labels = [f"A{i}" for i in range(self.form.rank)]
        parts = []
        for v in sorted(self._t):
            c = _lau(self._t[v])
            mono = " ".join(
                labels[i] if x == 1 else f"{labels[i]}^{x}" for i, x in enumerate(v) if x
            )
            ctext = c.to_text(q_mode)
            if not mono:
                body = ctext if len(self._t) == 1 or c.is_monomial() else f"({ctext})"
            elif c.is_one():
                body = mono
            elif c == -1:
                body = f"-{mono}"
            elif c.is_monomial():
                body = f"{ctext}*{mono}"
            else:
                body = f"({ctext})*{mono}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"TorusElement({self.to_text()!r})"


def mul_truncated(
    a: TorusElement,
    b: TorusElement,
    coord: Optional[int] = None,
    bound: Optional[int] = None,
) -> TorusElement:
    """Twisted product, optionally dropping terms with ``v[coord] > bound``."""
    form = a.form
    bt = [(v, form.apply(v), c) for v, c in b._t.items()]
    acc: Dict[Vec, Raw] = {}
    for v1, c1 in a._t.items():
        for v2, mv2, c2 in bt:
            if coord is not None and v1[coord] + v2[coord] > bound:
                continue
            p = 0
            for x, y in zip(v1, mv2):
                if x and y:
                    p += x * y
            v = tuple(x + y for x, y in zip(v1, v2))
            _add_into(acc, v, _mul_raw(c1, c2, -p))
    return TorusElement._from_raw(form, acc)


def _divide(a: TorusElement, d: TorusElement, left: bool) -> Optional[TorusElement]:
    if d.is_zero():
        raise ZeroDivisionError("division by zero in the quantum torus")
    form = a.form
    if a.is_zero():
        return TorusElement.zero(form)
    if d.is_unit_monomial():
        inv = d.monomial_inverse()
        return inv * a if left else a * inv
    u, du = d.leading_term()
    # Newton polytopes add under products, so the quotient lives in a box
    m = form.rank
    lo = [min(v[i] for v in a._t) - min(v[i] for v in d._t) for i in range(m)]
    hi = [max(v[i] for v in a._t) - max(v[i] for v in d._t) for i in range(m)]
    rem = a
    quot: Dict[Vec, Raw] = {}
    while not rem.is_zero():
        top, ctop = rem.leading_term()
        v = tuple(x - y for x, y in zip(top, u))
        if any(not (lo[i] <= v[i] <= hi[i]) for i in range(m)):
            return None
        p = form.pairing(u, v) if left else form.pairing(v, u)
        c = ctop.divmod_exact(du.shift(-p))
        if c is None:
            return None
        term = TorusElement._from_raw(form, {v: dict(c._c)})
        _add_into(quot, v, c._c)
        rem = rem - (d * term if left else term * d)
    return TorusElement._from_raw(form, quot)


def ordered_monomial(
    values: Sequence[TorusElement], lam: Sequence[Sequence[int]], v: Sequence[int]
) -> TorusElement:
    """``w^{sum_{i<j} lam_ij v_i v_j} * prod_i values[i]^{v_i}`` in index order.

    Negative exponents are allowed only on monomial values.
    """
    if not values:
        raise ValueError("empty frame")
    form = values[0].form
    phase = 0
    nz = [i for i, x in enumerate(v) if x]
    for p, i in enumerate(nz):
        for j in nz[p + 1:]:
            phase += lam[i][j] * v[i] * v[j]
    out = TorusElement.one(form)
    for i in nz:
        x = values[i]
        if v[i] < 0 and not x.is_unit_monomial():
            raise ArithmeticError("non-invertible factor")
        out = out * (x ** v[i])
    return out.shift(phase)


def change_lattice(x: TorusElement, form: SkewForm, f: Callable[[Vec], Vec]) -> TorusElement:
    """Relabel exponents through ``f`` onto a new form, keeping coefficients.

    Intended for maps that send normal monomials to normal monomials.
    """
    acc: Dict[Vec, Raw] = {}
    for v, c in x._t.items():
        _add_into(acc, tuple(f(v)), c)
    return TorusElement._from_raw(form, acc)


def block_form(*blocks: Sequence[Sequence[int]]) -> SkewForm:
    """Block-diagonal form from square blocks."""
    size = sum(len(b) for b in blocks)
    m = [[0] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                m[off + i][off + j] = x
        off += len(b)
    return SkewForm(m)


def tensor(x: TorusElement, y: TorusElement, form: SkewForm) -> TorusElement:
    """``x (x) y`` in the torus with block-diagonal form diag(L_x, L_y)."""
    acc: Dict[Vec, Raw] = {}
    for v1, c1 in x._t.items():
        for v2, c2 in y._t.items():
            _add_into(acc, v1 + v2, _mul_raw(c1, c2, 0))
    return TorusElement._from_raw(form, acc)


def sum_elements(form: SkewForm, xs: Iterable[TorusElement]) -> TorusElement:
    acc: Dict[Vec, Raw] = {}
    for x in xs:
        for v, c in x._t.items():
            _add_into(acc, v, c)
    return TorusElement._from_raw(form, acc)
