#!/usr/bin/env python3
"""
maps.py - Necessary conditions for maps of nonzero degree

A MapClaim asserts a map source -> target of some nonzero degree. Each
obstruction is checked only when both profiles carry the invariant it
needs; absent fields never produce a violation. Nothing here decides
whether a map exists.

Also:
- shub_entropy: log of the largest spectral radius of the induced maps on
  homology (characteristic polynomial factored exactly with sympy, roots
  isolated numerically per irreducible factor)
- degree_one_equivalence_check: entropy of g.f.h against that of f for
  homology isomorphisms g, h
- product_norm_bounds: Gromov norm bounds of a product
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from kodaira_values import (
    KodairaDim, NonzeroUnquantified, NormInterval, NormValue, SymbolicNorm,
    as_integer, norm_from_json,
)
from kodim_errors import PreconditionError
from taxonomy import Pi1Class
from threefold import Manifold3, gromov_norm_3, kappa_t, pi1_class_of

logger = logging.getLogger(__name__)

DEFAULT_ENTROPY_TOLERANCE = 1e-9


class MapCategory(Enum):
    Continuous = "Continuous"
    Holomorphic = "Holomorphic"
    JJprimeHolomorphic = "JJprimeHolomorphic"


class Obstruction(Enum):
    KAPPA_T = "kappa_t"
    GROMOV_NORM = "gromov_norm"
    KAPPA_H = "kappa_h"
    BETTI = "betti"
    B2_PLUS = "b2_plus"
    B2_MINUS = "b2_minus"
    HJ_PLUS = "hJ_plus"
    HJ_MINUS = "hJ_minus"
    SURFACE_GENUS = "surface_genus"
    ALGEBRAIC_DIMENSION = "algebraic_dimension"
    PI1_LADDER = "pi1_ladder"


_COUNT_FIELDS = ('b2_plus', 'b2_minus', 'hJ_plus', 'hJ_minus', 'genus', 'algebraic_dimension')


@dataclass(frozen=True)
class InvariantProfile:
    """Whatever invariants are known for one closed oriented manifold"""
    dimension: int
    kappa_t: Optional[KodairaDim] = None
    kappa_h: Optional[KodairaDim] = None
    gromov_norm: Optional[NormValue] = None
    betti: Optional[Tuple[int, ...]] = None
    b2_plus: Optional[int] = None
    b2_minus: Optional[int] = None
    hJ_plus: Optional[int] = None
    hJ_minus: Optional[int] = None
    genus: Optional[int] = None
    algebraic_dimension: Optional[int] = None
    pi1_classes: Optional[Tuple[Pi1Class, ...]] = None
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.dimension not in (2, 3, 4):
            raise PreconditionError(f"profiles have dimension 2, 3 or 4, not {self.dimension}")
        if self.betti is not None:
            betti = tuple(int(b) for b in self.betti)
            if any(b < 0 for b in betti):
                raise PreconditionError("Betti numbers must be non-negative")
            if len(betti) == self.dimension + 1 and betti != betti[::-1]:
                raise PreconditionError(f"Betti numbers {list(betti)} violate Poincare duality")
            object.__setattr__(self, 'betti', betti)
        for key in _COUNT_FIELDS:
            value = getattr(self, key)
            if value is not None and value < 0:
                raise PreconditionError(f"{key} must be non-negative, got {value}")
        if self.genus is not None and self.dimension != 2:
            raise PreconditionError("genus is recorded for surfaces only")

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'InvariantProfile':
        kwargs: Dict[str, Any] = {'dimension': int(data['dimension']), 'label': data.get('label')}
        for key in ('kappa_t', 'kappa_h'):
            if data.get(key) is not None:
                kwargs[key] = KodairaDim.parse(data[key])
        if data.get('gromov_norm') is not None:
            kwargs['gromov_norm'] = norm_from_json(data['gromov_norm'])
        if data.get('betti') is not None:
            kwargs['betti'] = tuple(data['betti'])
        for key in _COUNT_FIELDS:
            if data.get(key) is not None:
                kwargs[key] = int(data[key])
        if data.get('pi1_classes') is not None:
            kwargs['pi1_classes'] = tuple(sorted(Pi1Class[name] for name in data['pi1_classes']))
        return cls(**kwargs)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'dimension': self.dimension}
        for key in ('kappa_t', 'kappa_h', 'gromov_norm'):
            value = getattr(self, key)
            if value is not None:
                data[key] = value.to_json()
        if self.betti is not None:
            data['betti'] = list(self.betti)
        for key in _COUNT_FIELDS:
            if getattr(self, key) is not None:
                data[key] = getattr(self, key)
        if self.pi1_classes is not None:
            data['pi1_classes'] = [c.name for c in self.pi1_classes]
        if self.label:
            data['label'] = self.label
        return data


def profile_from_manifold3(m: Manifold3) -> InvariantProfile:
    """kappa_t, Gromov norm and (for closed geometric summands) pi_1 classes"""
    classes = None
    if all(len(block.pieces) == 1 for block in m.blocks):
        classes = pi1_class_of(m)
    return InvariantProfile(3, kappa_t=kappa_t(m), gromov_norm=gromov_norm_3(m),
                            pi1_classes=classes, label=m.label or m.render())


@dataclass(frozen=True)
class MapClaim:
    source: InvariantProfile
    target: InvariantProfile
    degree: int
    category: MapCategory = MapCategory.Continuous

    def __post_init__(self):
        if self.degree == 0:
            raise PreconditionError("a map claim needs nonzero degree")
        if self.source.dimension != self.target.dimension:
            raise PreconditionError(
                f"dimension mismatch: source {self.source.dimension}, target {self.target.dimension}")

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'MapClaim':
        return cls(
            InvariantProfile.from_json(data['source']),
            InvariantProfile.from_json(data['target']),
            int(data.get('degree', 1)),
            MapCategory(data.get('category', MapCategory.Continuous.value)),
        )

    def to_json(self) -> Dict[str, Any]:
        return {'source': self.source.to_json(), 'target': self.target.to_json(),
                'degree': self.degree, 'category': self.category.value}


@dataclass(frozen=True)
class ObstructionViolation:
    obstruction: Obstruction
    message: str

    def to_json(self) -> Dict[str, Any]:
        return {'obstruction': self.obstruction.value, 'message': self.message}


def _norm_violation(source: NormValue, target: NormValue, degree: int) -> Optional[str]:
    source_zero = isinstance(source, SymbolicNorm) and source.is_zero
    if isinstance(target, NonzeroUnquantified):
        return "source has zero Gromov norm, target nonzero" if source_zero else None
    if target.is_zero:
        return None
    if isinstance(source, NonzeroUnquantified):
        return None
    if source.dominates(target, degree) is False:
        return f"||source|| = {source.render()} < |{degree}| * ||target|| = {target.scale(abs(degree)).render()}"
    return None


def domination_obstructions(c: MapClaim) -> List[ObstructionViolation]:
    """Obstructions violated by the claimed map; empty means consistent"""
    s, t = c.source, c.target
    found: List[ObstructionViolation] = []

    def check(obstruction: Obstruction, ok: bool, message: str):
        if not ok:
            found.append(ObstructionViolation(obstruction, message))

    if c.source.dimension == 3 and s.kappa_t is not None and t.kappa_t is not None:
        check(Obstruction.KAPPA_T, s.kappa_t >= t.kappa_t,
              f"kappa_t(source) = {s.kappa_t} < kappa_t(target) = {t.kappa_t}")
    if s.gromov_norm is not None and t.gromov_norm is not None:
        message = _norm_violation(s.gromov_norm, t.gromov_norm, c.degree)
        check(Obstruction.GROMOV_NORM, message is None, message or "")
    holomorphic = c.category in (MapCategory.Holomorphic, MapCategory.JJprimeHolomorphic)
    if holomorphic and s.kappa_h is not None and t.kappa_h is not None:
        check(Obstruction.KAPPA_H, s.kappa_h >= t.kappa_h,
              f"kappa_h(source) = {s.kappa_h} < kappa_h(target) = {t.kappa_h}")
    if s.betti is not None and t.betti is not None:
        for degree, (bs, bt) in enumerate(zip(s.betti, t.betti)):
            check(Obstruction.BETTI, bs >= bt, f"b_{degree}(source) = {bs} < b_{degree}(target) = {bt}")
    for key, obstruction in (('b2_plus', Obstruction.B2_PLUS), ('b2_minus', Obstruction.B2_MINUS)):
        vs, vt = getattr(s, key), getattr(t, key)
        if vs is not None and vt is not None:
            check(obstruction, vs >= vt, f"{key}(source) = {vs} < {key}(target) = {vt}")
    if c.category is MapCategory.JJprimeHolomorphic:
        for key, obstruction in (('hJ_plus', Obstruction.HJ_PLUS), ('hJ_minus', Obstruction.HJ_MINUS)):
            vs, vt = getattr(s, key), getattr(t, key)
            if vs is not None and vt is not None:
                check(obstruction, vs >= vt, f"{key}(source) = {vs} < {key}(target) = {vt}")
    if s.genus is not None and t.genus is not None:
        check(Obstruction.SURFACE_GENUS, s.genus >= t.genus,
              f"genus(source) = {s.genus} < genus(target) = {t.genus}")
    if (c.category is MapCategory.Holomorphic
            and s.algebraic_dimension is not None and t.algebraic_dimension is not None):
        check(Obstruction.ALGEBRAIC_DIMENSION, s.algebraic_dimension == t.algebraic_dimension,
              f"algebraic dimension {s.algebraic_dimension} of source differs from {t.algebraic_dimension} of target")
    if (c.source.dimension == 3 and s.pi1_classes and t.pi1_classes
            and s.kappa_t is not None and t.kappa_t is not None
            and s.kappa_t <= KodairaDim(0) and t.kappa_t <= KodairaDim(0)):
        top_s, top_t = max(s.pi1_classes), max(t.pi1_classes)
        check(Obstruction.PI1_LADDER, top_s >= top_t,
              f"pi_1 class {top_t.name} of target exceeds {top_s.name} of source")
    if found:
        logger.info(f"{len(found)} obstruction(s) violated: {', '.join(v.obstruction.value for v in found)}")
    return found


@dataclass(frozen=True)
class MutualReport:
    forward: Tuple[ObstructionViolation, ...]
    backward: Tuple[ObstructionViolation, ...]

    @property
    def consistent(self) -> bool:
        return not self.forward and not self.backward

    def to_json(self) -> Dict[str, Any]:
        return {'consistent': self.consistent,
                'forward': [v.to_json() for v in self.forward],
                'backward': [v.to_json() for v in self.backward]}


def mutual_domination_obstructions(a: InvariantProfile, b: InvariantProfile,
                                   category: MapCategory = MapCategory.Continuous) -> MutualReport:
    """Degree-one maps both ways; comparable norms must then coincide"""
    return MutualReport(
        tuple(domination_obstructions(MapClaim(a, b, 1, category))),
        tuple(domination_obstructions(MapClaim(b, a, 1, category))),
    )


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------

IntMatrix = Tuple[Tuple[int, ...], ...]


def _as_matrix(rows: Sequence[Sequence[Any]], what: str) -> IntMatrix:
    try:
        matrix = tuple(tuple(as_integer(v) for v in row) for row in rows)
    except ValueError as exn:
        raise PreconditionError(f"{what} must have integer entries: {exn}") from None
    if any(len(row) != len(matrix) for row in matrix):
        raise PreconditionError(f"{what} is not square")
    return matrix


@dataclass(frozen=True)
class HomologyEndo:
    """Induced maps on H_0, H_1, ... as integer matrices"""
    matrices: Tuple[IntMatrix, ...]

    def __post_init__(self):
        if not self.matrices:
            raise PreconditionError("empty matrix list")
        object.__setattr__(self, 'matrices', tuple(
            _as_matrix(m, f"matrix in degree {degree}") for degree, m in enumerate(self.matrices)))

    @classmethod
    def from_json(cls, data: Any) -> 'HomologyEndo':
        if isinstance(data, dict):
            data = data['matrices']
        return cls(tuple(data))

    def to_json(self) -> List[List[List[int]]]:
        return [[list(row) for row in m] for m in self.matrices]


def _digits(tolerance: float) -> int:
    return max(15, int(math.ceil(-math.log10(tolerance))) + 5)


def spectral_radius(matrix: IntMatrix, tolerance: float = DEFAULT_ENTROPY_TOLERANCE) -> float:
    """Largest modulus of an eigenvalue; 0 for the zero-dimensional matrix"""
    if not matrix:
        return 0.0
    x = sympy.Symbol('x')
    charpoly = sympy.Matrix(matrix).charpoly(x)
    radius = 0.0
    # irreducible factors have simple roots, which nroots isolates reliably
    _, factors = sympy.factor_list(charpoly.as_expr(), x)
    for factor, _ in factors:
        poly = sympy.Poly(factor, x)
        if poly.degree() < 1:
            continue
        for root in poly.nroots(n=_digits(tolerance), maxsteps=200):
            radius = max(radius, abs(complex(root)))
    return radius


def spectral_radii(e: HomologyEndo, tolerance: float = DEFAULT_ENTROPY_TOLERANCE,
                   workers: int = 1) -> List[float]:
    """Spectral radius per homology degree"""
    if workers <= 1 or len(e.matrices) == 1:
        return [spectral_radius(m, tolerance) for m in e.matrices]
    radii: List[float] = [0.0] * len(e.matrices)
    with ThreadPoolExecutor(max_workers=min(workers, len(e.matrices))) as executor:
        future_to_degree = {
            executor.submit(spectral_radius, m, tolerance): degree
            for degree, m in enumerate(e.matrices)
        }
        for future in as_completed(future_to_degree):
            radii[future_to_degree[future]] = future.result()
    return radii


def entropy_from_radii(radii: Sequence[float]) -> float:
    radius = max(radii)
    logger.debug(f"maximal spectral radius {radius!r}")
    return math.log(radius) if radius > 1 else 0.0


def shub_entropy(e: HomologyEndo, tolerance: Any = DEFAULT_ENTROPY_TOLERANCE, workers: int = 1) -> float:
    """log of the maximal spectral radius over all degrees, 0 when it is <= 1"""
    tolerance = float(tolerance)
    if tolerance <= 0:
        raise PreconditionError("tolerance must be positive")
    return entropy_from_radii(spectral_radii(e, tolerance, workers))


@dataclass(frozen=True)
class EquivalenceVerdict:
    passed: bool
    entropy_f1: float
    entropy_f2: float
    f2: HomologyEndo

    def to_json(self) -> Dict[str, Any]:
        return {'passed': self.passed, 'entropy_f1': self.entropy_f1,
                'entropy_f2': self.entropy_f2, 'f2': self.f2.to_json()}


def degree_one_equivalence_check(f1: HomologyEndo, g_star: Sequence[Sequence[Sequence[int]]],
                                 h_star: Sequence[Sequence[Sequence[int]]],
                                 tolerance: Any = DEFAULT_ENTROPY_TOLERANCE,
                                 workers: int = 1) -> EquivalenceVerdict:
    """Compare the entropy of f2 = g.f1.h with that of f1.

    g and h are the homology maps of degree-one maps, isomorphisms over Q
    in every degree.
    """
    if len(g_star) != len(f1.matrices) or len(h_star) != len(f1.matrices):
        raise PreconditionError("g_star and h_star need one matrix per homology degree")
    composed = []
    for degree, (f, g, h) in enumerate(zip(f1.matrices, g_star, h_star)):
        g, h = _as_matrix(g, f"g_star[{degree}]"), _as_matrix(h, f"h_star[{degree}]")
        if not (len(g) == len(h) == len(f)):
            raise PreconditionError(f"shapes do not compose in degree {degree}")
        if not f:
            composed.append(f)
            continue
        G, H = sympy.Matrix(g), sympy.Matrix(h)
        if G.det() == 0 or H.det() == 0:
            raise PreconditionError("degree-one maps induce homology isomorphisms; "
                                    f"singular matrix in degree {degree}")
        product = G * sympy.Matrix(f) * H
        composed.append(tuple(tuple(int(v) for v in product.row(i)) for i in range(product.rows)))
    f2 = HomologyEndo(tuple(composed))
    s1 = shub_entropy(f1, tolerance, workers)
    s2 = shub_entropy(f2, tolerance, workers)
    passed = abs(s1 - s2) <= float(tolerance)
    if not passed:
        logger.info(f"entropies differ: S(f1) = {s1!r}, S(f2) = {s2!r}")
    return EquivalenceVerdict(passed, s1, s2, f2)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def product_norm_bounds(norm_M: NormValue, norm_N: NormValue, dim_M: int, dim_N: int) -> NormInterval:
    """||M|| ||N|| <= ||M x N|| <= C(dim M + dim N, dim M) ||M|| ||N||"""
    if dim_M < 1 or dim_N < 1:
        raise PreconditionError("dimensions must be positive")
    for norm in (norm_M, norm_N):
        if isinstance(norm, SymbolicNorm) and norm.is_zero:
            return NormInterval(SymbolicNorm.zero(), SymbolicNorm.zero())
    for norm in (norm_M, norm_N):
        if not isinstance(norm, SymbolicNorm) or not norm.is_monomial:
            raise PreconditionError("symbolic product not supported")
    lower = norm_M * norm_N
    return NormInterval(lower, lower.scale(math.comb(dim_M + dim_N, dim_M)))
