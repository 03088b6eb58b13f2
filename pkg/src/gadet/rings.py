"""Exact arithmetic in Z[zeta_p] and in Z[y_0..y_{k-1}] / <y_i^p - 1>.

``CycInt`` stores the power-basis coefficients c_0..c_{p-2} of
c_0 + c_1 zeta + ... + c_{p-2} zeta^{p-2}.  ``AbRingElement`` stores a dense
coefficient vector of length p**k indexed by exponent tuples with the first
variable as the least significant base-p digit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

from .errors import NotIntegral, PrimeMismatch, ShapeMismatch
from .field import index_tuple, tuple_index

VARIABLE_NAMES = "yzw"


# ---------------------------------------------------------------------------
# cyclotomic integers


def _reduce_exponent_form(p: int, v: Sequence[int]) -> tuple[int, ...]:
    """Reduce sum v[e] zeta^e (len p) modulo Phi_p into the power basis."""
    top = v[p - 1]
    return tuple(v[i] - top for i in range(p - 1))


@dataclass(frozen=True)
class CycInt:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ShapeMismatch(f"CycInt for p={self.p} needs {self.p - 1} coefficients")

    @classmethod
    def rational(cls, p: int, n: int) -> "CycInt":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def from_exponent_form(cls, p: int, v: Sequence[int]) -> "CycInt":
        return cls(p, _reduce_exponent_form(p, v))

    def exponent_form(self) -> list[int]:
        return list(self.coeffs) + [0]

    def _check(self, other: "CycInt") -> None:
        if self.p != other.p:
            raise PrimeMismatch(f"p={self.p} vs p={other.p}")

    def __add__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycInt") -> "CycInt":
        self._check(other)
        return CycInt(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "CycInt") -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.p, tuple(a * other for a in self.coeffs))
        self._check(other)
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        acc[(i + j) % p] += a * b
        return CycInt.from_exponent_form(p, acc)

    __rmul__ = __mul__

    def times_zeta_power(self, e: int) -> "CycInt":
        p = self.p
        v = [0] * p
        for i, a in enumerate(self.coeffs):
            v[(i + e) % p] = a
        return CycInt.from_exponent_form(p, v)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self) -> Optional[int]:
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def l1(self) -> int:
        """Upper bound on |sigma(x)| for every complex embedding sigma."""
        return sum(abs(c) for c in self.coeffs)

    def residue(self, root: int, mod: int) -> int:
        """Image under zeta -> root in Z/mod."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * root + c) % mod
        return acc

    def __repr__(self) -> str:
        return f"CycInt(p={self.p}, {list(self.coeffs)})"


def cyc_add(x: CycInt, y: CycInt) -> CycInt:
    return x + y


def cyc_mul(x: CycInt, y: CycInt) -> CycInt:
    return x * y


def cyc_monomial(p: int, e: int) -> CycInt:
    v = [0] * p
    v[e % p] = 1
    return CycInt.from_exponent_form(p, v)


def cyc_is_rational(x: CycInt) -> Optional[int]:
    return x.rational_value()


# ---------------------------------------------------------------------------
# abelian group ring


@lru_cache(maxsize=None)
def _digits(p: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(index_tuple(i, p, k) for i in range(p**k))


@lru_cache(maxsize=32)
def _add_table(p: int, k: int) -> tuple[tuple[int, ...], ...]:
    digs = _digits(p, k)
    return tuple(
        tuple(tuple_index([a + b for a, b in zip(du, dv)], p) for dv in digs) for du in digs
    )


@lru_cache(maxsize=None)
def _neg_table(p: int, k: int) -> tuple[int, ...]:
    return tuple(tuple_index([-d for d in du], p) for du in _digits(p, k))


@lru_cache(maxsize=None)
def _dot_table(p: int, k: int) -> tuple[tuple[int, ...], ...]:
    """dot[s][u] = <s, u> mod p."""
    digs = _digits(p, k)
    return tuple(tuple(sum(a * b for a, b in zip(ds, du)) % p for du in digs) for ds in digs)


@dataclass(frozen=True)
class AbRingElement:
    p: int
    k: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p**self.k:
            raise ShapeMismatch(f"need {self.p ** self.k} coefficients, got {len(self.coeffs)}")

    @property
    def size(self) -> int:
        return self.p**self.k

    @classmethod
    def zero(cls, p: int, k: int) -> "AbRingElement":
        return cls(p, k, (0,) * p**k)

    @classmethod
    def constant(cls, p: int, k: int, c: int) -> "AbRingElement":
        return cls(p, k, (c,) + (0,) * (p**k - 1))

    @classmethod
    def monomial(cls, p: int, k: int, exps: Sequence[int], c: int = 1) -> "AbRingElement":
        v = [0] * p**k
        v[tuple_index(exps, p)] = c
        return cls(p, k, tuple(v))

    @classmethod
    def from_terms(cls, p: int, k: int, terms: Mapping[tuple[int, ...], int]) -> "AbRingElement":
        v = [0] * p**k
        for exps, c in terms.items():
            v[tuple_index(exps, p)] += c
        return cls(p, k, tuple(v))

    def terms(self) -> dict[tuple[int, ...], int]:
        digs = _digits(self.p, self.k)
        return {digs[i]: c for i, c in enumerate(self.coeffs) if c}

    def _check(self, other: "AbRingElement") -> None:
        if (self.p, self.k) != (other.p, other.k):
            raise ShapeMismatch(f"(p,k)=({self.p},{self.k}) vs ({other.p},{other.k})")

    def __add__(self, other: "AbRingElement") -> "AbRingElement":
        self._check(other)
        return AbRingElement(self.p, self.k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AbRingElement") -> "AbRingElement":
        self._check(other)
        return AbRingElement(self.p, self.k, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "AbRingElement":
        return AbRingElement(self.p, self.k, tuple(-a for a in self.coeffs))

    def scale(self, c: int) -> "AbRingElement":
        return AbRingElement(self.p, self.k, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: Union["AbRingElement", int]) -> "AbRingElement":
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        n = self.size
        out = [0] * n
        nz_other = [(j, b) for j, b in enumerate(other.coeffs) if b]
        if n <= 1024:
            table = _add_table(self.p, self.k)
            for i, a in enumerate(self.coeffs):
                if a:
                    row = table[i]
                    for j, b in nz_other:
                        out[row[j]] += a * b
        else:
            digs = _digits(self.p, self.k)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in nz_other:
                        s = [(x + y) for x, y in zip(digs[i], digs[j])]
                        out[tuple_index(s, self.p)] += a * b
        return AbRingElement(self.p, self.k, tuple(out))

    __rmul__ = __mul__

    def inverse_exponents(self) -> "AbRingElement":
        """The image under y_i -> y_i^{-1}."""
        neg = _neg_table(self.p, self.k)
        out = [0] * self.size
        for i, c in enumerate(self.coeffs):
            out[neg[i]] = c
        return AbRingElement(self.p, self.k, tuple(out))

    def constant_term(self) -> int:
        return self.coeffs[0]

    def value_at_ones(self) -> int:
        return sum(self.coeffs)

    def l1(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def content(self) -> int:
        from math import gcd

        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "AbRingElement":
        return cls(int(obj["p"]), int(obj["k"]), tuple(int(c) for c in obj["coeffs"]))

    def __str__(self) -> str:
        return format_poly(self)


def ab_add(x: AbRingElement, y: AbRingElement) -> AbRingElement:
    return x + y


def ab_mul(x: AbRingElement, y: AbRingElement) -> AbRingElement:
    return x * y


def ab_evaluate(x: AbRingElement, s: Sequence[int]) -> CycInt:
    """Substitute y_i = zeta^{s_i}."""
    p = x.p
    if len(s) != x.k:
        raise ShapeMismatch(f"evaluation tuple needs {x.k} entries")
    dots = _dot_table(p, x.k)[tuple_index(s, p)]
    acc = [0] * p
    for u, c in enumerate(x.coeffs):
        if c:
            acc[dots[u]] += c
    return CycInt.from_exponent_form(p, acc)


def _separable_transform(p: int, k: int, vecs: list[list[int]], sign: int) -> list[list[int]]:
    """Multidimensional character transform over (Z/p)^k, one axis at a time.

    ``vecs[i]`` is an element of Z[zeta] in length-p exponent form; the result at
    index t is sum_i vecs[i] * zeta^{sign * <i, t>}.
    """
    n = p**k
    cur = [list(v) for v in vecs]
    stride = 1
    for _ in range(k):
        nxt = [None] * n
        for base in range(n):
            if (base // stride) % p:
                continue
            group = [cur[base + d * stride] for d in range(p)]
            for t in range(p):
                acc = [0] * p
                for d, v in enumerate(group):
                    shift = (sign * d * t) % p
                    for e, c in enumerate(v):
                        if c:
                            acc[(e + shift) % p] += c
                nxt[base + t * stride] = acc
        cur = nxt
        stride *= p
    return cur


def ab_evaluate_all(x: AbRingElement) -> list[CycInt]:
    """Evaluations at every character, indexed like the coefficients."""
    p = x.p
    vecs = [[c] + [0] * (p - 1) for c in x.coeffs]
    return [CycInt.from_exponent_form(p, v) for v in _separable_transform(p, x.k, vecs, 1)]


def ab_from_character_values(
    p: int, k: int, values: Union[Sequence[CycInt], Mapping[tuple[int, ...], CycInt]]
) -> AbRingElement:
    """Invert ``ab_evaluate_all``.

    Each coefficient is p**-k * sum_s value(s) zeta^{-<s,u>}; that sum must be a
    rational integer divisible by p**k, otherwise the values did not come from
    an integer element and ``NotIntegral`` is raised.
    """
    n = p**k
    if isinstance(values, Mapping):
        seq = [None] * n
        for s, v in values.items():
            seq[tuple_index(s, p)] = v
        values = seq
    if len(values) != n or any(v is None for v in values):
        raise ShapeMismatch(f"need character values for all {n} tuples")
    vecs = [v.exponent_form() for v in values]
    out = []
    for u, vec in enumerate(_separable_transform(p, k, vecs, -1)):
        val = CycInt.from_exponent_form(p, vec).rational_value()
        if val is None:
            raise NotIntegral(f"coefficient at index {u} is not rational")
        q, r = divmod(val, n)
        if r:
            raise NotIntegral(f"coefficient at index {u}: {val} not divisible by {n}")
        out.append(q)
    return AbRingElement(p, k, tuple(out))


def ab_sum_over_nontrivial(x: AbRingElement) -> tuple[int, int]:
    """Return (sum over nonzero characters of x, constant coefficient)."""
    a0 = x.constant_term()
    return x.size * a0 - x.value_at_ones(), a0


# ---------------------------------------------------------------------------
# text notation, e.g. "3 - y^2 + y^2z^2 + 2yz" (variables y, z, w)


def variable_names(k: int) -> list[str]:
    if k <= len(VARIABLE_NAMES):
        return list(VARIABLE_NAMES[:k])
    return [f"y{i}" for i in range(k)]


def format_monomial(exps: Sequence[int]) -> str:
    names = variable_names(len(exps))
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
    return "".join(parts) if len(exps) <= len(VARIABLE_NAMES) else "*".join(parts) or "1"


def format_poly(x: AbRingElement) -> str:
    out = []
    for exps, c in sorted(x.terms().items(), key=lambda t: (sum(t[0]), t[0][::-1])):
        mon = format_monomial(exps)
        if not mon or mon == "1":
            body = str(abs(c))
        else:
            body = mon if abs(c) == 1 else f"{abs(c)}{mon}"
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_TERM = re.compile(r"([+-]?)(\d*)\*?((?:[a-z]\d*(?:\^\d+)?\*?)*)")
_FACTOR = re.compile(r"([a-z]\d*)(?:\^(\d+))?")


def parse_poly(text: str, p: int, k: int) -> AbRingElement:
    """Parse a sum of terms like ``-176 y z`` or ``3y^2zw^2``; exponents reduce mod p."""
    names = variable_names(k)
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty polynomial")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    terms: dict[tuple[int, ...], int] = {}
    for piece in pieces:
        m = _TERM.fullmatch(piece)
        if not m:
            raise ValueError(f"cannot parse term {piece!r}")
        sign, digits, mono = m.groups()
        if not digits and not mono:
            raise ValueError(f"cannot parse term {piece!r}")
        coef = int(digits) if digits else 1
        if sign == "-":
            coef = -coef
        exps = [0] * k
        for name, e in _FACTOR.findall(mono.replace("*", "")):
            if name not in names:
                raise ValueError(f"unknown variable {name!r} for k={k}")
            exps[names.index(name)] += int(e) if e else 1
        key = tuple(e % p for e in exps)
        terms[key] = terms.get(key, 0) + coef
    return AbRingElement.from_terms(p, k, terms)


def parse_product(factors: Sequence[str], p: int, k: int) -> AbRingElement:
    """Product of parsed factors, e.g. ``["-1", "y-1", "yw", "145yw+7"]``."""
    out = AbRingElement.constant(p, k, 1)
    for f in factors:
        out = out * parse_poly(f, p, k)
    return out
