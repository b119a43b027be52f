"""Ordinals below omega^omega in Cantor normal form."""
from __future__ import annotations

from functools import total_ordering


@total_ordering
class Ordinal:
    """Sum of terms omega^e * c with strictly decreasing exponents e."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        terms = tuple((int(e), int(c)) for e, c in terms if c)
        for e, c in terms:
            if e < 0 or c < 0:
                raise ValueError("exponents and coefficients must be natural numbers")
        if any(terms[i][0] <= terms[i + 1][0] for i in range(len(terms) - 1)):
            raise ValueError(f"exponents must strictly decrease: {terms}")
        self.terms = terms

    @classmethod
    def of(cls, value: "int | Ordinal") -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if value < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((0, value),)) if value else cls()

    @classmethod
    def omega(cls, exponent: int = 1, coefficient: int = 1) -> "Ordinal":
        return cls(((exponent, coefficient),))

    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __lt__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        # lexicographic on terms, a missing term counts as smaller
        return self.terms < other.terms

    def __add__(self, other):
        other = Ordinal.of(other)
        if not other.terms:
            return self
        lead = other.terms[0][0]
        # terms of self below the leading exponent of other are absorbed
        kept = [(e, c) for e, c in self.terms if e > lead]
        same = [c for e, c in self.terms if e == lead]
        first = (lead, other.terms[0][1] + (same[0] if same else 0))
        return Ordinal(kept + [first] + list(other.terms[1:]))

    def __radd__(self, other):
        return Ordinal.of(other) + self

    def __mul__(self, n: int):
        """Right multiplication by a natural number."""
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Ordinal()
        for _ in range(n):
            out = out + self
        return out

    def times_omega(self) -> "Ordinal":
        """self * omega: omega^(e+1) for leading exponent e; 1 for finite nonzero."""
        if not self.terms:
            return Ordinal()
        return Ordinal.omega(self.terms[0][0] + 1)

    def successor(self) -> "Ordinal":
        return self + 1

    @property
    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    @property
    def leading_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def __int__(self):
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
        return "+".join(parts)

    def __repr__(self):
        return f"Ordinal({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        """Inverse of ``str``: accepts forms such as ``w^2*3+w+4``."""
        out = Ordinal()
        for part in text.replace(" ", "").split("+"):
            if not part:
                raise ValueError(f"bad ordinal {text!r}")
            coef = 1
            if "*" in part:
                part, c = part.split("*")
                coef = int(c)
            if part.startswith("w"):
                exp = int(part[2:]) if part.startswith("w^") else 1
                out = out + Ordinal.omega(exp, coef)
            else:
                out = out + int(part) * coef
        return out
