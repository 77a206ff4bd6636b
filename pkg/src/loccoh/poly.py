"""Multivariate polynomials with exact integer coefficients.

Monomials are exponent tuples aligned with a ring's variable list.
Coefficients stay as plain integers (or Fractions); reduction mod p
happens only when a matrix entry is realized.  The string grammar is
minimal: integer coefficients, ``*``, ``^`` and variable names, with
``+``/``-`` separating terms, e.g. ``2*u^3*v - v^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


Monomial = tuple  # exponent vector, one slot per ring variable


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_degree(mono: Monomial, var_degrees) -> int:
    return sum(e * d for e, d in zip(mono, var_degrees))


@dataclass(frozen=True)
class Polynomial:
    terms: tuple  # sorted tuple of (monomial, coefficient), coefficient != 0

    @classmethod
    def from_dict(cls, d: dict) -> "Polynomial":
        items = tuple(sorted(((m, c) for m, c in d.items() if c), reverse=True))
        return cls(items)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        if not c:
            return cls.zero()
        return cls((((0,) * nvars, c),))

    @classmethod
    def variable(cls, index: int, nvars: int, power: int = 1) -> "Polynomial":
        mono = tuple(power if i == index else 0 for i in range(nvars))
        return cls(((mono, 1),))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Polynomial") -> "Polynomial":
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Polynomial.from_dict(d)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return Polynomial.from_dict(d)

    def scale(self, c) -> "Polynomial":
        if not c:
            return Polynomial.zero()
        return Polynomial(tuple((m, c * coeff) for m, coeff in self.terms))

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        if not self.terms:
            return Polynomial.zero() if n else Polynomial.constant(1, 0)
        nvars = len(self.terms[0][0])
        result = Polynomial.constant(1, nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_mono(self, mono: Monomial, coeff=1) -> "Polynomial":
        return Polynomial.from_dict({mono_mul(m, mono): c * coeff for m, c in self.terms})

    def degree_or_none(self, var_degrees):
        """Common degree of all terms, None for 0, error if inhomogeneous."""
        if not self.terms:
            return None
        degs = {mono_degree(m, var_degrees) for m, _ in self.terms}
        if len(degs) > 1:
            raise InhomogeneousElement(f"terms of degrees {sorted(degs)} in one element")
        return degs.pop()

    def render(self, var_names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            factors = []
            for name, e in zip(var_names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(abs(c) if isinstance(c, int) else abs(c))
            else:
                lead = "" if abs(c) == 1 else f"{abs(c)}*"
                body = lead + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


class InhomogeneousElement(ValueError):
    """An element whose terms do not share a single internal degree."""


class PolyParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9']*|\^|\*|\+|-)")


def parse_polynomial(text: str, var_names) -> Polynomial:
    """Parse the minimal grammar into a Polynomial.

    >>> p = parse_polynomial("2*u^3*v - v^2", ["u", "v"])
    >>> p.render(["u", "v"])
    '2*u^3*v - v^2'
    """
    names = {name: i for i, name in enumerate(var_names)}
    nvars = len(var_names)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolyParseError(f"unexpected character at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()

    result = Polynomial.zero()
    i = 0

    def parse_factor(i):
        if i >= len(tokens):
            raise PolyParseError("dangling operator")
        tok = tokens[i]
        if tok.isdigit():
            return Polynomial.constant(int(tok), nvars), i + 1
        if tok in names:
            power = 1
            j = i + 1
            if j < len(tokens) and tokens[j] == "^":
                if j + 1 >= len(tokens) or not tokens[j + 1].isdigit():
                    raise PolyParseError("'^' must be followed by an integer")
                power = int(tokens[j + 1])
                j += 2
            return Polynomial.variable(names[tok], nvars, power), j
        raise PolyParseError(f"unknown token {tok!r}")

    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise PolyParseError("trailing sign")
        term, i = parse_factor(i)
        while i < len(tokens) and tokens[i] == "*":
            factor, i = parse_factor(i + 1)
            term = term * factor
        result = result + term.scale(sign)
    return result
