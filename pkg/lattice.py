#!/usr/bin/env python3
"""
lattice.py - Intersection-form arithmetic on H^2 of 4-manifolds

Two lattice families are supported:
- CP^2 # k(-CP^2): basis H, E1..Ek, form diag(1, -1, ..., -1)
- S^2 x S^2: basis S1, S2, form [[0, 1], [1, 0]]

Canonical classes follow K = -3H + sum E_i and K = -2S1 - 2S2, the sign
under which K.w < 0 for every symplectic form of positive shape
w = aH - sum b_i E_i (resp. aS1 + bS2).

Also here: the light-cone lemma and its brute-force search, Thom and
Sullivan constraints on real loci, the triple products of K and [w] on
M^4 x Sigma_g and the dimension-6 symplectic Kodaira dimension.

Arithmetic is exact (fractions.Fraction) throughout.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Sequence, Tuple, Union

from kodaira_values import NEG_INF, KodairaDim, as_fraction, render_fraction
from fourfold import SymplecticRecord4, kappa_s_4
from kodim_errors import PreconditionError
from threefold import Violation, surface_kappa

logger = logging.getLogger(__name__)


class LatticeFamily(Enum):
    CP2_BLOWUP = "cp2#k"
    S2XS2 = "s2xs2"


@dataclass(frozen=True)
class Lattice2:
    family: LatticeFamily
    blowups: int = 0

    def __post_init__(self):
        if self.blowups < 0:
            raise PreconditionError("number of blow-ups must be non-negative")
        if self.family is LatticeFamily.S2XS2 and self.blowups:
            raise PreconditionError("blow-ups of S^2 x S^2 are not a supported lattice family")

    @classmethod
    def cp2_blowup(cls, k: int = 0) -> 'Lattice2':
        return cls(LatticeFamily.CP2_BLOWUP, k)

    @classmethod
    def s2xs2(cls) -> 'Lattice2':
        return cls(LatticeFamily.S2XS2)

    @classmethod
    def from_token(cls, token: str) -> 'Lattice2':
        """'cp2', 'cp2#k' or 's2xs2' (case-insensitive)"""
        key = token.strip().lower().replace(" ", "")
        if key == "s2xs2":
            return cls.s2xs2()
        if key == "cp2":
            return cls.cp2_blowup(0)
        if key.startswith("cp2#") and key[4:].isdigit():
            return cls.cp2_blowup(int(key[4:]))
        raise PreconditionError(f"unsupported lattice family {token!r}")

    @property
    def rank(self) -> int:
        return 2 if self.family is LatticeFamily.S2XS2 else 1 + self.blowups

    @property
    def basis(self) -> Tuple[str, ...]:
        if self.family is LatticeFamily.S2XS2:
            return ("S1", "S2")
        return ("H",) + tuple(f"E{i}" for i in range(1, self.blowups + 1))

    def form(self, i: int, j: int) -> int:
        if self.family is LatticeFamily.S2XS2:
            return 1 if i != j else 0
        if i != j:
            return 0
        return 1 if i == 0 else -1

    @property
    def signature(self) -> Tuple[int, int]:
        return (1, self.rank - 1)

    def token(self) -> str:
        if self.family is LatticeFamily.S2XS2:
            return "s2xs2"
        return f"cp2#{self.blowups}"

    def to_json(self) -> Dict[str, Any]:
        return {'family': self.token(), 'rank': self.rank, 'basis': list(self.basis)}


@dataclass(frozen=True)
class Class2:
    """Class in H^2, as coefficients over the lattice basis"""
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', tuple(as_fraction(c) for c in self.coefficients))

    @classmethod
    def of(cls, *coefficients: Any) -> 'Class2':
        return cls(tuple(coefficients))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __add__(self, other: 'Class2') -> 'Class2':
        if len(self) != len(other):
            raise PreconditionError("rank mismatch")
        return Class2(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, factor: Any) -> 'Class2':
        factor = as_fraction(factor)
        return Class2(tuple(c * factor for c in self.coefficients))

    def render(self) -> str:
        return "(" + ", ".join(render_fraction(c) for c in self.coefficients) + ")"

    def to_json(self) -> List[str]:
        return [render_fraction(c) for c in self.coefficients]


def _check_rank(l: Lattice2, *classes: Class2):
    for c in classes:
        if len(c) != l.rank:
            raise PreconditionError(f"rank mismatch: class has {len(c)} coefficients, lattice {l.token()} has rank {l.rank}")


def pair(l: Lattice2, a: Class2, b: Class2) -> Fraction:
    """Intersection pairing a.b"""
    _check_rank(l, a, b)
    if l.family is LatticeFamily.S2XS2:
        return a.coefficients[0] * b.coefficients[1] + a.coefficients[1] * b.coefficients[0]
    x, y = a.coefficients, b.coefficients
    return x[0] * y[0] - sum((p * q for p, q in zip(x[1:], y[1:])), Fraction(0))


def square(l: Lattice2, a: Class2) -> Fraction:
    return pair(l, a, a)


def canonical_class(l: Lattice2) -> Class2:
    if l.family is LatticeFamily.S2XS2:
        return Class2.of(-2, -2)
    if l.family is LatticeFamily.CP2_BLOWUP:
        return Class2((Fraction(-3),) + (Fraction(1),) * l.blowups)
    raise PreconditionError(f"unsupported lattice family {l.family}")


def omega_from_shape(l: Lattice2, coefficients: Sequence[Any]) -> Class2:
    """aH - sum b_i E_i from (a, b_1, ..., b_k), or aS1 + bS2 from (a, b).

    Every coefficient must be positive.
    """
    values = tuple(as_fraction(c) for c in coefficients)
    if len(values) != l.rank:
        raise PreconditionError(f"{l.token()} needs {l.rank} coefficients, got {len(values)}")
    if any(v <= 0 for v in values):
        raise PreconditionError("symplectic class coefficients must all be positive")
    if l.family is LatticeFamily.S2XS2:
        return Class2(values)
    return Class2((values[0],) + tuple(-b for b in values[1:]))


# ---------------------------------------------------------------------------
# Light cone
# ---------------------------------------------------------------------------

class LightConeVerdict(Enum):
    TorusNullHomologous = "TorusNullHomologous"
    NotLagrangianData = "NotLagrangianData"
    SpherePossible = "SpherePossible"


def light_cone_check(l: Lattice2, omega: Class2, x: Class2) -> LightConeVerdict:
    """What the class x of an embedded surface allows, given [w].

    A Lagrangian surface has x.w = 0. A class with x.x >= 0 orthogonal to
    a positive class vanishes, so a Lagrangian torus is null-homologous;
    negative self-intersection leaves only the sphere.
    """
    _check_rank(l, omega, x)
    if square(l, omega) <= 0:
        raise PreconditionError("light cone lemma needs w.w > 0")
    x2 = square(l, x)
    if x2 < 0:
        return LightConeVerdict.SpherePossible
    if pair(l, x, omega) != 0:
        return LightConeVerdict.NotLagrangianData
    if not x.is_zero:
        # cannot happen on a lattice of signature (1, n)
        raise PreconditionError(f"light cone lemma fails for x = {x.render()} on {l.token()}")
    return LightConeVerdict.TorusNullHomologous


DEFAULT_SEARCH_BOUND = 5


def _integer_weights(values: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale rationals by the lcm of their denominators"""
    scale = 1
    for v in values:
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    return tuple(int(v * scale) for v in values)


def _orthogonal_candidates(weights: Sequence[int], tail_norms: Sequence[int], target: int,
                           radius_sq: int, bound: int) -> Iterator[Tuple[int, ...]]:
    """Integer vectors y with |y_i| <= bound, sum y_i^2 <= radius_sq and
    sum weights_i * y_i == target.

    tail_norms[i] is sum of weights_j^2 for j >= i. Branches are cut when
    target^2 > radius_sq * tail_norms[0], which Cauchy-Schwarz rules out.
    """
    if not weights:
        if target == 0:
            yield ()
        return
    if target * target > radius_sq * tail_norms[0]:
        return
    head = weights[0]
    reach = min(bound, math.isqrt(radius_sq))
    for value in range(-reach, reach + 1):
        for rest in _orthogonal_candidates(weights[1:], tail_norms[1:], target - head * value,
                                           radius_sq - value * value, bound):
            yield (value,) + rest


def light_cone_search(l: Lattice2, omega: Class2, bound: int = DEFAULT_SEARCH_BOUND) -> List[Class2]:
    """Every nonzero integer class in the coefficient box [-bound, bound]
    with x.w = 0 and x.x >= 0. Empty on every supported lattice."""
    _check_rank(l, omega)
    if square(l, omega) <= 0:
        raise PreconditionError("light cone search needs w.w > 0")
    if bound < 0:
        raise PreconditionError("search bound must be non-negative")
    found: List[Class2] = []
    if l.family is LatticeFamily.S2XS2:
        for x1, x2 in itertools.product(range(-bound, bound + 1), repeat=2):
            x = Class2.of(x1, x2)
            if not x.is_zero and square(l, x) >= 0 and pair(l, x, omega) == 0:
                found.append(x)
        return found

    # x.x >= 0 means sum x_i^2 <= x_0^2; x.w = 0 means sum x_i w_i = x_0 w_0
    scaled = _integer_weights(omega.coefficients)
    w0, weights = scaled[0], scaled[1:]
    tail_norms = [sum(w * w for w in weights[i:]) for i in range(len(weights) + 1)]
    for x0 in range(-bound, bound + 1):
        for rest in _orthogonal_candidates(weights, tail_norms, x0 * w0, x0 * x0, bound):
            if x0 or any(rest):
                found.append(Class2((Fraction(x0),) + tuple(Fraction(r) for r in rest)))
    if found:
        logger.warning(f"light cone search on {l.token()} found {len(found)} class(es)")
    return found


# ---------------------------------------------------------------------------
# Real loci
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThomSullivanReport:
    violations: Tuple[Violation, ...]
    notes: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> Dict[str, Any]:
        return {'ok': self.ok, 'violations': [v.to_json() for v in self.violations], 'notes': list(self.notes)}


def _alternating_sum(betti: Sequence[int]) -> int:
    return sum(b if i % 2 == 0 else -b for i, b in enumerate(betti))


def thom_sullivan_check(real_betti_z2: Sequence[int], complex_betti_z2: Sequence[int],
                        chi_real: int, chi_complex: int) -> ThomSullivanReport:
    """Thom's inequality on Z/2 Betti sums and Sullivan's parity of Euler
    characteristics for the real locus X(R) of a complex variety X(C)."""
    if any(b < 0 for b in list(real_betti_z2) + list(complex_betti_z2)):
        raise PreconditionError("Betti numbers must be non-negative")
    violations = []
    real_total, complex_total = sum(real_betti_z2), sum(complex_betti_z2)
    if real_total > complex_total:
        violations.append(Violation(
            'thom_inequality', f"sum of real Betti numbers {real_total} exceeds complex {complex_total}"))
    if (chi_real - chi_complex) % 2:
        violations.append(Violation(
            'sullivan_parity', f"chi(X(R)) = {chi_real} and chi(X(C)) = {chi_complex} differ mod 2"))
    notes = []
    if real_betti_z2 and _alternating_sum(real_betti_z2) != chi_real:
        notes.append(f"chi_real {chi_real} differs from alternating Betti sum {_alternating_sum(real_betti_z2)}")
    if complex_betti_z2 and _alternating_sum(complex_betti_z2) != chi_complex:
        notes.append(f"chi_complex {chi_complex} differs from alternating Betti sum {_alternating_sum(complex_betti_z2)}")
    return ThomSullivanReport(tuple(violations), tuple(notes))


# ---------------------------------------------------------------------------
# Products M^4 x Sigma_g
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceFactor:
    genus: int
    area: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, 'area', as_fraction(self.area))
        if self.genus < 0:
            raise PreconditionError("genus must be non-negative")
        if self.area <= 0:
            raise PreconditionError("surface area must be positive")

    @property
    def k_sigma(self) -> int:
        return 2 * self.genus - 2

    @property
    def kappa(self) -> KodairaDim:
        return surface_kappa(self.genus)

    def to_json(self) -> Dict[str, Any]:
        return {'genus': self.genus, 'area': render_fraction(self.area), 'k_sigma': self.k_sigma}


@dataclass(frozen=True)
class Product6:
    """K^3, K^2.[w] and K.[w]^2 of the product form"""
    K3: Fraction
    K2w: Fraction
    Kw2: Fraction

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.K3, self.K2w, self.Kw2)

    def to_json(self) -> Dict[str, str]:
        return {'K3': render_fraction(self.K3), 'K2w': render_fraction(self.K2w), 'Kw2': render_fraction(self.Kw2)}


def product6_intersections(k2_M: Any, kw_M: Any, w2_M: Any, sigma: SurfaceFactor) -> Product6:
    k2, kw, w2 = as_fraction(k2_M), as_fraction(kw_M), as_fraction(w2_M)
    if w2 <= 0:
        raise PreconditionError("[w_M]^2 must be positive for a symplectic form")
    ks, area = sigma.k_sigma, sigma.area
    return Product6(
        K3=k2 * ks,
        K2w=k2 * area + 2 * kw * ks,
        Kw2=w2 * ks + 2 * kw * area,
    )


@dataclass(frozen=True)
class IllFormed:
    """Sign pattern of the triple products matching no Kodaira dimension"""
    signs: Tuple[int, int, int]

    def __str__(self) -> str:
        return "ill-formed"

    def to_json(self) -> Dict[str, Any]:
        return {'ill_formed': True, 'signs': list(self.signs)}


Kappa6 = Union[KodairaDim, IllFormed]


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def li_ruan_kappa6(K3: Any, K2w: Any, Kw2: Any) -> Kappa6:
    """Symplectic Kodaira dimension of a minimal symplectic 6-manifold.

    With p_i = K^i.[w]^(3-i) and p_0 = [w]^3 > 0: -inf if some p_i < 0,
    otherwise the k with p_i > 0 for i <= k and p_i = 0 for i > k.
    """
    products = (as_fraction(Kw2), as_fraction(K2w), as_fraction(K3))
    signs = tuple(_sign(p) for p in products)
    if any(s < 0 for s in signs):
        return NEG_INF
    k = 0
    while k < 3 and signs[k] > 0:
        k += 1
    if any(s != 0 for s in signs[k:]):
        return IllFormed((signs[2], signs[1], signs[0]))
    return KodairaDim(k)


@dataclass(frozen=True)
class AdditivityVerdict:
    passed: bool
    products: Product6
    computed: Kappa6
    expected: KodairaDim

    def to_json(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'products': self.products.to_json(),
            'computed': self.computed.to_json(),
            'expected': self.expected.to_json(),
        }


def additivity_check(k2_M: Any, kw_M: Any, w2_M: Any, kappa_s_M: KodairaDim,
                     sigma: SurfaceFactor) -> AdditivityVerdict:
    """kappa_s(M x Sigma_g) against kappa_s(M) + kappa(Sigma_g)"""
    k2, kw, w2 = as_fraction(k2_M), as_fraction(kw_M), as_fraction(w2_M)
    if w2 <= 0:
        raise PreconditionError("[w_M]^2 must be positive for a symplectic form")
    clause = kappa_s_4(SymplecticRecord4(kw, k2, True))
    if clause != kappa_s_M:
        raise PreconditionError(
            f"(K^2, K.w) = ({render_fraction(k2)}, {render_fraction(kw)}) gives kappa_s {clause}, not {kappa_s_M}")
    if kappa_s_M.is_neg_inf and k2 > 0 and kw * kw < k2 * w2:
        raise PreconditionError(
            "no rational or ruled surface has K^2 > 0 with (K.w)^2 < K^2 w^2 (b+ = 1 light cone)")
    products = product6_intersections(k2, kw, w2, sigma)
    computed = li_ruan_kappa6(*products.as_tuple())
    expected = kappa_s_M + sigma.kappa
    passed = computed == expected
    if not passed:
        logger.warning(f"additivity fails: {products.to_json()} gives {computed}, expected {expected}")
    return AdditivityVerdict(passed, products, computed, expected)


@dataclass(frozen=True)
class NegativityVerdict:
    passed: bool
    k_squared: Fraction
    k_dot_omega: Fraction
    omega_squared: Fraction
    products: Product6
    inequality_holds: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'k_squared': render_fraction(self.k_squared),
            'k_dot_omega': render_fraction(self.k_dot_omega),
            'omega_squared': render_fraction(self.omega_squared),
            'products': self.products.to_json(),
            'inequality_holds': self.inequality_holds,
        }


def rational_ruled_negativity_check(l: Lattice2, omega_coefficients: Sequence[Any],
                                    genus: int, area: Any = 1) -> NegativityVerdict:
    """On M x Sigma_g with M rational (CP^2 # k, k < 9, or S^2 x S^2) and
    g >= 2, one of K^2.[w] and K.[w]^2 is negative: K^2 w^2 >= 4 (K.w)^2
    fails."""
    if l.family is LatticeFamily.CP2_BLOWUP and l.blowups >= 9:
        raise PreconditionError("negativity holds for CP^2 # k with k < 9 only")
    if genus < 2:
        raise PreconditionError("negativity check needs a surface factor of genus >= 2")
    omega = omega_from_shape(l, omega_coefficients)
    w2 = square(l, omega)
    if w2 <= 0:
        raise PreconditionError(f"w.w = {render_fraction(w2)} is not positive")
    K = canonical_class(l)
    k2, kw = square(l, K), pair(l, K, omega)
    products = product6_intersections(k2, kw, w2, SurfaceFactor(genus, as_fraction(area)))
    inequality_holds = k2 * w2 >= 4 * kw * kw
    negative = products.K2w < 0 or products.Kw2 < 0
    return NegativityVerdict(negative and not inequality_holds, k2, kw, w2, products, inequality_holds)
