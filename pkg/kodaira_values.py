#!/usr/bin/env python3
"""
kodaira_values.py - Value types shared across the kodim modules

- KodairaDim: totally ordered value, -inf or a non-negative integer
- SymbolicNorm: exact Gromov norm as a sum of rational multiples of
  monomials in the named constants 1/v3, 1/v4 and 3/(2 pi^2)
- NonzeroUnquantified: a norm known to be positive without a closed form
- NormInterval: lower/upper symbolic bounds (products of manifolds)

All coefficients are fractions.Fraction; nothing here touches floating point
except SymbolicNorm.approx(), which exists for display only.
"""

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Any, Dict, Iterable, Optional, Tuple, Union


def as_fraction(value: Any) -> Fraction:
    """Convert int / str / Fraction (or a JSON float) to an exact Fraction.

    Floats go through their shortest repr so that 0.05 becomes 1/20 rather
    than the binary expansion.
    """
    if isinstance(value, bool):
        raise ValueError(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite rational: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot interpret {value!r} as a rational")


def as_integer(value: Any) -> int:
    """Exact integer value; integral floats and fractions are accepted, anything else is rejected"""
    if isinstance(value, bool):
        raise ValueError(f"boolean is not an integer: {value!r}")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Rational) and value.denominator == 1:
        return int(value.numerator)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ValueError(f"not an integer: {value!r}")


def render_fraction(value: Fraction) -> str:
    """Render p/q, or p when the denominator is 1"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# Kodaira dimension
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class KodairaDim:
    """-inf (value None) or a non-negative integer"""
    value: Optional[int]

    def __post_init__(self):
        if self.value is not None and (not isinstance(self.value, int) or self.value < 0):
            raise ValueError(f"Kodaira dimension must be -inf or an integer >= 0, got {self.value!r}")

    @classmethod
    def finite(cls, k: int) -> 'KodairaDim':
        return cls(k)

    @property
    def is_neg_inf(self) -> bool:
        return self.value is None

    def _rank(self) -> int:
        return -1 if self.value is None else self.value

    def __lt__(self, other: 'KodairaDim') -> bool:
        if not isinstance(other, KodairaDim):
            return NotImplemented
        return self._rank() < other._rank()

    def __add__(self, other: 'KodairaDim') -> 'KodairaDim':
        # -inf absorbs
        if not isinstance(other, KodairaDim):
            return NotImplemented
        if self.value is None or other.value is None:
            return NEG_INF
        return KodairaDim(self.value + other.value)

    def __str__(self) -> str:
        return "-inf" if self.value is None else str(self.value)

    def to_json(self) -> Union[str, int]:
        return "-inf" if self.value is None else self.value

    @classmethod
    def parse(cls, value: Any) -> 'KodairaDim':
        if isinstance(value, KodairaDim):
            return value
        if isinstance(value, str):
            token = value.strip().lower()
            if token in ("-inf", "-infinity", "neginf", "-oo"):
                return NEG_INF
            return cls(int(token))
        if isinstance(value, int) and not isinstance(value, bool):
            return cls(value)
        raise ValueError(f"cannot interpret {value!r} as a Kodaira dimension")


NEG_INF = KodairaDim(None)
KAPPA_ZERO = KodairaDim(0)
KAPPA_ONE = KodairaDim(1)
KAPPA_TWO = KodairaDim(2)
KAPPA_THREE = KodairaDim(3)


# ---------------------------------------------------------------------------
# Symbolic Gromov norm
# ---------------------------------------------------------------------------

class NormConstant(Enum):
    """Named constants a Gromov norm is expressed in"""
    ONE = "1"
    INV_V3 = "1/v3"
    INV_V4 = "1/v4"
    THREE_OVER_2PI2 = "3/(2pi^2)"


_CONSTANT_ORDER = {c: i for i, c in enumerate(NormConstant)}

# Non-normative decimals used only by approx(). v3 is the volume of the regular
# ideal hyperbolic tetrahedron; no decimal is carried for v4.
_APPROX = {
    NormConstant.INV_V3: 1 / 1.0149416064096536,
    NormConstant.THREE_OVER_2PI2: 3 / (2 * math.pi ** 2),
}

Monomial = Tuple[NormConstant, ...]


def _monomial(symbols: Iterable[NormConstant]) -> Monomial:
    return tuple(sorted((s for s in symbols if s is not NormConstant.ONE),
                        key=_CONSTANT_ORDER.__getitem__))


def _render_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    parts = []
    for symbol in _monomial(set(mono)):
        power = mono.count(symbol)
        parts.append(f"({symbol.value})" if power == 1 else f"({symbol.value})^{power}")
    return "*".join(parts)


@dataclass(frozen=True)
class SymbolicNorm:
    """Exact norm: sum of coefficient * monomial, coefficients >= 0.

    A single-constant norm (the common case) has one term whose monomial is
    one symbol; products of norms produce monomials of higher degree.
    """
    terms: Tuple[Tuple[Monomial, Fraction], ...] = ()

    def __post_init__(self):
        for _, coefficient in self.terms:
            if coefficient < 0:
                raise ValueError(f"norm coefficients must be non-negative, got {coefficient}")

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls) -> 'SymbolicNorm':
        return cls(())

    @classmethod
    def of(cls, coefficient: Any, symbol: NormConstant = NormConstant.ONE) -> 'SymbolicNorm':
        return cls.from_mapping({_monomial([symbol]): as_fraction(coefficient)})

    @classmethod
    def from_mapping(cls, mapping: Dict[Monomial, Fraction]) -> 'SymbolicNorm':
        cleaned = {_monomial(m): as_fraction(c) for m, c in mapping.items() if c != 0}
        ordered = sorted(cleaned.items(),
                         key=lambda item: (len(item[0]), [_CONSTANT_ORDER[s] for s in item[0]]))
        return cls(tuple(ordered))

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[Monomial, Fraction]:
        return dict(self.terms)

    def monomials(self) -> Tuple[Monomial, ...]:
        return tuple(m for m, _ in self.terms)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def coefficient(self, symbol: NormConstant = NormConstant.ONE) -> Fraction:
        return self.as_dict().get(_monomial([symbol]), Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: 'SymbolicNorm') -> 'SymbolicNorm':
        if not isinstance(other, SymbolicNorm):
            return NotImplemented
        merged = self.as_dict()
        for mono, coefficient in other.terms:
            merged[mono] = merged.get(mono, Fraction(0)) + coefficient
        return SymbolicNorm.from_mapping(merged)

    def scale(self, factor: Any) -> 'SymbolicNorm':
        factor = as_fraction(factor)
        if factor < 0:
            raise ValueError("norms scale by non-negative factors only")
        return SymbolicNorm.from_mapping({m: c * factor for m, c in self.terms})

    def __mul__(self, other: 'SymbolicNorm') -> 'SymbolicNorm':
        if not isinstance(other, SymbolicNorm):
            return NotImplemented
        product: Dict[Monomial, Fraction] = {}
        for mono_a, coeff_a in self.terms:
            for mono_b, coeff_b in other.terms:
                mono = _monomial(mono_a + mono_b)
                product[mono] = product.get(mono, Fraction(0)) + coeff_a * coeff_b
        return SymbolicNorm.from_mapping(product)

    def dominates(self, other: 'SymbolicNorm', factor: Any = 1) -> Optional[bool]:
        """Decide self >= factor * other when the two are comparable.

        Returns None when the answer would depend on the numeric values of
        distinct constants.
        """
        rhs = other.scale(abs(as_fraction(factor)))
        if rhs.is_zero:
            return True
        if self.is_zero:
            return False
        lhs_terms, rhs_terms = self.as_dict(), rhs.as_dict()
        if set(lhs_terms) != set(rhs_terms):
            return None
        diffs = [lhs_terms[m] - rhs_terms[m] for m in lhs_terms]
        if all(d >= 0 for d in diffs):
            return True
        if all(d <= 0 for d in diffs):
            return False
        return None

    # -- presentation ------------------------------------------------------

    def approx(self) -> Optional[float]:
        """Decimal value for display; None if a constant has no decimal on file"""
        total = 0.0
        for mono, coefficient in self.terms:
            value = float(coefficient)
            for symbol in mono:
                if symbol not in _APPROX:
                    return None
                value *= _APPROX[symbol]
            total += value
        return total

    def render(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for mono, coefficient in self.terms:
            if not mono:
                pieces.append(render_fraction(coefficient))
            elif coefficient == 1:
                pieces.append(_render_monomial(mono))
            else:
                pieces.append(f"{render_fraction(coefficient)}*{_render_monomial(mono)}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> Dict[str, Any]:
        return {
            'zero': self.is_zero,
            'display': self.render(),
            'terms': [
                {'symbols': [s.name for s in mono], 'coefficient': render_fraction(c)}
                for mono, c in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: Any) -> 'SymbolicNorm':
        """Accept the to_json() shape, {'symbol': .., 'coefficient': ..}, or 0"""
        if isinstance(data, (int, str)) and not isinstance(data, bool) and as_fraction(data) == 0:
            return cls.zero()
        if not isinstance(data, dict):
            raise ValueError(f"cannot interpret {data!r} as a symbolic norm")
        if 'terms' in data:
            mapping: Dict[Monomial, Fraction] = {}
            for term in data['terms']:
                mono = _monomial(_symbol(s) for s in term.get('symbols', []))
                mapping[mono] = mapping.get(mono, Fraction(0)) + as_fraction(term['coefficient'])
            return cls.from_mapping(mapping)
        return cls.of(data.get('coefficient', 1), _symbol(data.get('symbol', 'ONE')))


def _symbol(token: str) -> NormConstant:
    for constant in NormConstant:
        if token in (constant.name, constant.value):
            return constant
    raise ValueError(f"unknown norm constant {token!r}")


@dataclass(frozen=True)
class NonzeroUnquantified:
    """Norm known to be strictly positive, with no closed-form constant"""
    reason: str = ""

    def render(self) -> str:
        return "nonzero (unquantified)"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> Dict[str, Any]:
        return {'zero': False, 'display': self.render(), 'unquantified': True, 'reason': self.reason}


NormValue = Union[SymbolicNorm, NonzeroUnquantified]


def norm_from_json(data: Any) -> NormValue:
    if isinstance(data, dict) and data.get('unquantified'):
        return NonzeroUnquantified(data.get('reason', ''))
    return SymbolicNorm.from_json(data)


@dataclass(frozen=True)
class NormInterval:
    """Closed interval [lower, upper] of symbolic norms"""
    lower: SymbolicNorm
    upper: SymbolicNorm

    def to_json(self) -> Dict[str, Any]:
        return {'lower': self.lower.to_json(), 'upper': self.upper.to_json()}

    def render(self) -> str:
        return f"[{self.lower.render()}, {self.upper.render()}]"


def max_kappa(values: Iterable[KodairaDim]) -> KodairaDim:
    """Maximum of Kodaira dimensions; -inf for an empty iterable"""
    result = NEG_INF
    for value in values:
        if value > result:
            result = value
    return result
