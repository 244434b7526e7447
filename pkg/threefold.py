#!/usr/bin/env python3
"""
threefold.py - Closed oriented 3-manifolds as T-decompositions

A Manifold3 is a connected sum of prime blocks; each block is the list of
finite-volume geometric pieces left after cutting along incompressible tori.
The decomposition is the input: nothing here decomposes a raw manifold.

Computed here:
- kappa_t: Kodaira dimension from the categories of the pieces
- gromov_norm_3: total hyperbolic volume times 1/v3
- classify_shape: which family of the kappa_t = -inf / 0 classification
  each summand belongs to
- pi1_class_of: fundamental-group classes of the free-product factors
- geometries of circle bundles and of surface bundles over the circle
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

from kodaira_values import (
    KAPPA_ONE, KAPPA_ZERO, NEG_INF, KodairaDim, NormConstant, SymbolicNorm,
    as_fraction, max_kappa, render_fraction,
)
from kodim_errors import PreconditionError, ValidationError
from taxonomy import Geometry3Name, Pi1Class, geometry3_record

logger = logging.getLogger(__name__)

# kappa_t of the point and of the circle
POINT_KAPPA = KAPPA_ZERO
CIRCLE_KAPPA = KAPPA_ZERO


@dataclass(frozen=True)
class Piece3:
    """One finite-volume geometric piece.

    volume is given in units of hyperbolic volume and must be present
    exactly when the geometry is H3.
    """
    geometry: Geometry3Name
    volume: Optional[Fraction] = None

    def __post_init__(self):
        if self.volume is not None:
            object.__setattr__(self, 'volume', as_fraction(self.volume))
        if self.geometry is Geometry3Name.H3:
            if self.volume is None:
                raise ValidationError("H3 piece needs a volume")
            if self.volume <= 0:
                raise ValidationError(f"hyperbolic volume must be positive, got {self.volume}")
        elif self.volume is not None:
            raise ValidationError(f"volume given for non-hyperbolic piece {self.geometry.value}")

    @classmethod
    def hyperbolic(cls, volume: Any) -> 'Piece3':
        return cls(Geometry3Name.H3, as_fraction(volume))

    @property
    def category(self) -> KodairaDim:
        return geometry3_record(self.geometry).category

    def render(self) -> str:
        if self.volume is None:
            return self.geometry.value
        return f"H3(vol={render_fraction(self.volume)})"

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'geometry': self.geometry.value}
        if self.volume is not None:
            data['volume'] = render_fraction(self.volume)
        return data


@dataclass(frozen=True)
class IrreducibleBlock3:
    """Pieces of one prime summand, glued along tori"""
    pieces: Tuple[Piece3, ...]

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(self.pieces))

    def render(self) -> str:
        if len(self.pieces) == 1:
            return self.pieces[0].render()
        return "JSJ[" + ", ".join(p.render() for p in self.pieces) + "]"

    def to_json(self) -> List[Dict[str, Any]]:
        return [p.to_json() for p in self.pieces]


@dataclass(frozen=True)
class Manifold3:
    """Connected sum of prime blocks"""
    blocks: Tuple[IrreducibleBlock3, ...]
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'blocks', tuple(self.blocks))

    @classmethod
    def of(cls, *blocks: List[Piece3], label: Optional[str] = None) -> 'Manifold3':
        """Build from lists of pieces, one list per prime summand"""
        return cls(tuple(IrreducibleBlock3(tuple(b)) for b in blocks), label)

    def pieces(self) -> Iterator[Tuple[int, Piece3]]:
        for index, block in enumerate(self.blocks):
            for piece in block.pieces:
                yield index, piece

    def render(self) -> str:
        return " # ".join(b.render() for b in self.blocks)

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'blocks': [b.to_json() for b in self.blocks],
                                'display': self.render()}
        if self.label:
            data['label'] = self.label
        return data


@dataclass(frozen=True)
class Violation:
    """A broken invariant; block_index is None for manifold-level problems"""
    rule: str
    message: str
    block_index: Optional[int] = None

    def to_json(self) -> Dict[str, Any]:
        return {'rule': self.rule, 'message': self.message, 'block_index': self.block_index}


def validate(m: Manifold3) -> List[Violation]:
    """Every invariant violation of the description; empty means valid"""
    violations: List[Violation] = []
    if not m.blocks:
        violations.append(Violation('empty_manifold', "a manifold needs at least one prime summand"))
    for index, block in enumerate(m.blocks):
        if not block.pieces:
            violations.append(Violation('empty_block', "a prime summand needs at least one piece", index))
            continue
        if len(block.pieces) < 2:
            continue
        for piece in block.pieces:
            record = geometry3_record(piece.geometry)
            if not record.admits_noncompact_finite_volume:
                violations.append(Violation(
                    'closed_only_geometry_in_jsj_block',
                    f"{piece.geometry.value} has no non-closed finite-volume model and cannot "
                    f"be a piece of a torus decomposition",
                    index,
                ))
    if violations:
        logger.debug(f"{m.render() if m.blocks else '<empty>'}: {len(violations)} violation(s)")
    return violations


def require_valid(m: Manifold3) -> Manifold3:
    violations = validate(m)
    if violations:
        summary = "; ".join(
            v.message if v.block_index is None else f"block {v.block_index}: {v.message}"
            for v in violations
        )
        raise ValidationError(f"invalid 3-manifold description: {summary}", violations)
    return m


def kappa_t(m: Manifold3) -> KodairaDim:
    """Kodaira dimension: the largest category among all pieces"""
    require_valid(m)
    return max_kappa(piece.category for _, piece in m.pieces())


def gromov_norm_3(m: Manifold3) -> SymbolicNorm:
    """Total volume of the hyperbolic pieces, times 1/v3.

    Zero exactly for graph manifolds.
    """
    require_valid(m)
    total = sum((piece.volume for _, piece in m.pieces() if piece.volume is not None), Fraction(0))
    return SymbolicNorm.of(total, NormConstant.INV_V3)


def connected_sum(m: Manifold3, n: Manifold3) -> Manifold3:
    return Manifold3(m.blocks + n.blocks)


def surface_kappa(genus: int) -> KodairaDim:
    """kappa_t of a closed orientable surface: sphere, torus, hyperbolic"""
    if genus < 0:
        raise PreconditionError(f"genus must be non-negative, got {genus}")
    if genus == 0:
        return NEG_INF
    if genus == 1:
        return KAPPA_ZERO
    return KAPPA_ONE


# ---------------------------------------------------------------------------
# Shape of the classification
# ---------------------------------------------------------------------------

# (family key, description) per geometry, for summands of kappa_t <= 0
_SHAPES = {
    Geometry3Name.S3: ('spherical_space_form',
                       "spherical manifold S^3/Gamma with Gamma finite acting freely"),
    Geometry3Name.S2xE: ('s2_times_s1_type',
                         "S^2 bundle over S^1 (trivial or not) or RP^3 # RP^3"),
    Geometry3Name.E3: ('flat_seifert',
                       "Seifert fibration with zero orbifold Euler characteristic and zero Euler number (flat)"),
    Geometry3Name.Nil: ('nil_seifert',
                        "Seifert fibration with zero orbifold Euler characteristic and nonzero Euler number"),
    Geometry3Name.Sol: ('sol_mapping_torus',
                        "mapping torus of an Anosov map of the 2-torus, or a quotient of one"),
}


@dataclass(frozen=True)
class SummandShape:
    block_index: int
    family: str
    description: str

    def to_json(self) -> Dict[str, Any]:
        return {'block_index': self.block_index, 'family': self.family, 'description': self.description}


@dataclass(frozen=True)
class ShapeReport:
    kappa: KodairaDim
    finite_classification: bool
    summands: Tuple[SummandShape, ...] = ()
    # (block index, geometry) of every category-1 piece, when kappa_t = 1
    category_one_pieces: Tuple[Tuple[int, Geometry3Name], ...] = ()

    def to_json(self) -> Dict[str, Any]:
        return {
            'kappa_t': self.kappa.to_json(),
            'finite_classification': self.finite_classification,
            'summands': [s.to_json() for s in self.summands],
            'category_one_pieces': [
                {'block_index': i, 'geometry': g.value} for i, g in self.category_one_pieces
            ],
        }

    def render(self) -> str:
        lines = [f"kappa_t = {self.kappa}"]
        if not self.finite_classification:
            lines.append("no finite classification; category-1 pieces:")
            lines.extend(f"  block {i}: {g.value}" for i, g in self.category_one_pieces)
            return "\n".join(lines)
        for s in self.summands:
            lines.append(f"  block {s.block_index}: {s.family} ({s.description})")
        return "\n".join(lines)


def classify_shape(m: Manifold3) -> ShapeReport:
    kappa = kappa_t(m)
    if kappa == KAPPA_ONE:
        pieces = tuple((i, p.geometry) for i, p in m.pieces() if p.category == KAPPA_ONE)
        return ShapeReport(kappa, False, category_one_pieces=pieces)
    summands = []
    for index, block in enumerate(m.blocks):
        # kappa_t <= 0 forces single-piece blocks
        family, description = _SHAPES[block.pieces[0].geometry]
        summands.append(SummandShape(index, family, description))
    return ShapeReport(kappa, True, tuple(summands))


def pi1_class_of(m: Manifold3) -> Tuple[Pi1Class, ...]:
    """Sorted multiset of the fundamental-group classes of the summands"""
    require_valid(m)
    for index, block in enumerate(m.blocks):
        if len(block.pieces) != 1:
            raise PreconditionError(
                f"pi_1 ladder defined only for closed geometric summands (block {index} has "
                f"{len(block.pieces)} pieces)")
    return tuple(sorted(geometry3_record(b.pieces[0].geometry).pi1_class for b in m.blocks))


# ---------------------------------------------------------------------------
# Fibrations
# ---------------------------------------------------------------------------

def circle_bundle_geometry(base_genus: int, euler_zero: bool) -> Manifold3:
    """Geometry of a circle bundle over a closed orientable surface"""
    if base_genus < 0:
        raise PreconditionError(f"genus must be non-negative, got {base_genus}")
    if base_genus == 0:
        name = Geometry3Name.S2xE if euler_zero else Geometry3Name.S3
    elif base_genus == 1:
        name = Geometry3Name.E3 if euler_zero else Geometry3Name.Nil
    else:
        name = Geometry3Name.H2xE if euler_zero else Geometry3Name.SL2R
    return Manifold3.of([Piece3(name)], label=f"S^1 bundle over genus {base_genus}, e{'=' if euler_zero else '!='}0")


class Monodromy(Enum):
    periodic = "periodic"
    reducible = "reducible"
    anosov = "anosov"
    pseudo_anosov = "pseudo_anosov"


def surface_bundle_geometry(fiber_genus: int, monodromy: Monodromy,
                            volume: Optional[Any] = None) -> Manifold3:
    """Geometry of a closed surface bundle over the circle.

    On the torus, Anosov and pseudo-Anosov coincide. A pseudo-Anosov
    mapping torus of a hyperbolic surface is hyperbolic and needs a volume.
    """
    if fiber_genus < 0:
        raise PreconditionError(f"genus must be non-negative, got {fiber_genus}")
    if volume is not None and not (fiber_genus >= 2 and monodromy is Monodromy.pseudo_anosov):
        raise PreconditionError("volume only applies to pseudo-Anosov monodromy of a hyperbolic fiber")
    label = f"genus {fiber_genus} bundle over S^1, {monodromy.value} monodromy"
    if fiber_genus == 0:
        return Manifold3.of([Piece3(Geometry3Name.S2xE)], label=label)
    if fiber_genus == 1:
        name = {
            Monodromy.periodic: Geometry3Name.E3,
            Monodromy.reducible: Geometry3Name.Nil,
            Monodromy.anosov: Geometry3Name.Sol,
            Monodromy.pseudo_anosov: Geometry3Name.Sol,
        }[monodromy]
        return Manifold3.of([Piece3(name)], label=label)
    if monodromy is Monodromy.periodic:
        return Manifold3.of([Piece3(Geometry3Name.H2xE)], label=label)
    if monodromy is Monodromy.pseudo_anosov:
        if volume is None:
            raise PreconditionError("pseudo-Anosov mapping torus of a hyperbolic surface needs a volume")
        return Manifold3.of([Piece3.hyperbolic(volume)], label=label)
    if monodromy is Monodromy.anosov:
        raise PreconditionError("Anosov monodromy exists only on the torus")
    raise PreconditionError("reducible monodromy on a hyperbolic fiber has no single geometry; "
                            "describe the torus decomposition instead")


@dataclass(frozen=True)
class FibrationVerdict:
    holds: bool
    total: KodairaDim
    expected: KodairaDim

    def to_json(self) -> Dict[str, Any]:
        return {'holds': self.holds, 'total': self.total.to_json(), 'expected': self.expected.to_json()}


def fibration_additivity(total: Manifold3, fiber_kappa: KodairaDim,
                         base_kappa: KodairaDim) -> FibrationVerdict:
    """Compare kappa_t of a fibred manifold with fiber + base (-inf absorbing)"""
    actual = kappa_t(total)
    expected = fiber_kappa + base_kappa
    if actual != expected:
        logger.info(f"{total.render()}: kappa_t {actual} differs from fiber + base {expected}")
    return FibrationVerdict(actual == expected, actual, expected)
