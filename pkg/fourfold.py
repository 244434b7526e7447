#!/usr/bin/env python3
"""
fourfold.py - Kodaira dimensions of 4-manifold data

- kappa_s_4: symplectic Kodaira dimension from K.[w] and K.K of a minimal model
- kappa_l: Lefschetz Kodaira dimension from (fiber genus, base genus, singular fibers)
- kappa_h_classify: growth rate of plurigenera from a finite sample
- gromov_norm_4_geometric: Gromov norm of a closed geometric 4-manifold
- geometry4_query: capability report for one of the 19 geometries

Plus symplectic records of products of surfaces and of the representative
model of each Kaehler-compatible geometry, and the comparison between kappa_t
of a surface bundle over the circle and kappa_l of its product with S^1.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from kodaira_values import (
    KAPPA_ONE, KAPPA_TWO, KAPPA_ZERO, NEG_INF, KodairaDim, NonzeroUnquantified,
    NormConstant, NormValue, SymbolicNorm, as_fraction, as_integer, render_fraction,
)
from kodim_errors import PreconditionError
from taxonomy import Geometry4, Geometry4Name, geometry4_record
from threefold import Monodromy, kappa_t, surface_bundle_geometry

logger = logging.getLogger(__name__)

DEFAULT_KAPPA_H_TOLERANCE = Fraction(1, 20)


# ---------------------------------------------------------------------------
# Symplectic Kodaira dimension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticRecord4:
    """Canonical class data of a symplectic 4-manifold"""
    k_dot_omega: Fraction
    k_squared: Fraction
    minimal: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'k_dot_omega', as_fraction(self.k_dot_omega))
        object.__setattr__(self, 'k_squared', as_fraction(self.k_squared))

    def to_json(self) -> Dict[str, Any]:
        return {
            'k_dot_omega': render_fraction(self.k_dot_omega),
            'k_squared': render_fraction(self.k_squared),
            'minimal': self.minimal,
        }


def kappa_s_4(r: SymplecticRecord4) -> KodairaDim:
    if not r.minimal:
        raise PreconditionError("reduce to minimal model first")
    kw, k2 = r.k_dot_omega, r.k_squared
    if kw < 0 or k2 < 0:
        return NEG_INF
    if kw == 0 and k2 == 0:
        return KAPPA_ZERO
    if kw > 0 and k2 == 0:
        return KAPPA_ONE
    if kw > 0 and k2 > 0:
        return KAPPA_TWO
    raise PreconditionError(f"inconsistent minimal symplectic data: K.w = 0 with K^2 = {render_fraction(k2)} > 0")


# ---------------------------------------------------------------------------
# Lefschetz Kodaira dimension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LefschetzRecord:
    g: int
    h: int
    n: int = 0
    relatively_minimal: bool = True

    def __post_init__(self):
        for key in ('g', 'h', 'n'):
            value = getattr(self, key)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise PreconditionError(f"Lefschetz data {key} must be a non-negative integer, got {value!r}")

    def to_json(self) -> Dict[str, Any]:
        return {'g': self.g, 'h': self.h, 'n': self.n, 'relatively_minimal': self.relatively_minimal}


def kappa_l(r: LefschetzRecord) -> KodairaDim:
    if r.h == 0:
        raise PreconditionError("Lefschetz Kodaira dimension requires base genus h >= 1")
    if not r.relatively_minimal:
        raise PreconditionError("reduce to relatively minimal model")
    g, h, n = r.g, r.h, r.n
    if g == 0:
        return NEG_INF
    if g == 1:
        if h == 1 and n == 0:
            return KAPPA_ZERO
        return KAPPA_ONE
    # g >= 2
    if h == 1 and n == 0:
        return KAPPA_ONE
    return KAPPA_TWO


# ---------------------------------------------------------------------------
# Plurigenera growth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlurigeneraSample:
    """(l, P_l) pairs, strictly increasing in l"""
    samples: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        try:
            samples = tuple((as_integer(l), as_integer(p)) for l, p in self.samples)
        except ValueError as exn:
            raise PreconditionError(f"plurigenera must be integer pairs: {exn}") from None
        if len(samples) < 4:
            raise PreconditionError(f"need at least 4 plurigenera, got {len(samples)}")
        previous = 0
        for l, p in samples:
            if l <= previous:
                raise PreconditionError("plurigenera indices must be >= 1 and strictly increasing")
            if p < 0:
                raise PreconditionError(f"P_{l} = {p} is negative")
            previous = l
        object.__setattr__(self, 'samples', samples)

    def to_json(self) -> List[List[int]]:
        return [[l, p] for l, p in self.samples]


@dataclass(frozen=True)
class Unclassified:
    """Plurigenera whose growth does not fit c*l^k within tolerance"""
    slope: Optional[float]
    residual: Optional[float]
    reason: str = ""

    def __str__(self) -> str:
        return "unclassified"

    def to_json(self) -> Dict[str, Any]:
        return {'unclassified': True, 'slope': self.slope, 'residual': self.residual, 'reason': self.reason}


KappaH = Union[KodairaDim, Unclassified]


def kappa_h_classify(p: PlurigeneraSample, fit_tolerance: Any = DEFAULT_KAPPA_H_TOLERANCE) -> KappaH:
    """Growth order of P_l.

    The exponent comes from a least-squares line through (log l, log P_l)
    over the upper half of the samples, rounded to an integer >= 1. The
    constant c is then refitted for that exponent and the fit is accepted
    when max |P_l - c l^k| / P_l over those samples stays within tolerance.
    """
    tolerance = as_fraction(fit_tolerance)
    if tolerance <= 0:
        raise PreconditionError("fit tolerance must be positive")
    values = [v for _, v in p.samples]
    if all(v == 0 for v in values):
        return NEG_INF
    if all(v in (0, 1) for v in values):
        return KAPPA_ZERO

    upper = p.samples[len(p.samples) // 2:]
    if any(v == 0 for _, v in upper):
        return Unclassified(None, None, "vanishing plurigenera among the largest indices")
    ls = np.array([l for l, _ in upper], dtype=float)
    ps = np.array([v for _, v in upper], dtype=float)
    log_l, log_p = np.log(ls), np.log(ps)
    slope = float(np.polyfit(log_l, log_p, 1)[0])
    k = max(1, int(round(slope)))
    c = math.exp(float(np.mean(log_p - k * log_l)))
    residual = float(np.max(np.abs(ps - c * ls ** k) / ps))
    logger.debug(f"plurigenera fit: slope={slope:.4f} k={k} c={c:.4f} residual={residual:.4f}")
    if residual <= float(tolerance):
        return KodairaDim(k)
    return Unclassified(slope, residual, f"relative residual {residual:.4g} exceeds {float(tolerance):.4g}")


# ---------------------------------------------------------------------------
# Geometric 4-manifolds
# ---------------------------------------------------------------------------

def gromov_norm_4_geometric(name: Geometry4Name, volume: Optional[Any] = None) -> NormValue:
    """Gromov norm of a closed manifold with the given geometry.

    Only H4, H2xH2 and H2C give nonzero norms. The first two are
    proportional to the Riemannian volume; without a volume they are
    reported as nonzero but unquantified.
    """
    record = geometry4_record(name)
    if not record.gromov_nonzero:
        if volume is not None:
            raise PreconditionError(f"volume irrelevant: {name.value} manifolds have zero Gromov norm")
        return SymbolicNorm.zero()
    if volume is not None:
        volume = as_fraction(volume)
        if volume <= 0:
            raise PreconditionError("volume must be positive")
    if name is Geometry4Name.H2C:
        if volume is not None:
            logger.warning("volume ignored: no closed form relates H2C volume to the Gromov norm")
        return NonzeroUnquantified("locally symmetric of non-compact type")
    if volume is None:
        return NonzeroUnquantified(f"{name.value}: supply a volume for the exact value")
    constant = NormConstant.INV_V4 if name is Geometry4Name.H4 else NormConstant.THREE_OVER_2PI2
    return SymbolicNorm.of(volume, constant)


_CATEGORY_NOTES = {
    None: "category -inf: spherical factors; Kaehler models are rational or ruled",
    0: "category 0: solvable fundamental group, compact models are T^2 bundles over T^2 or infrasolvmanifolds",
    1: "category 1: a Euclidean direction times H2, SL2R or H3 type geometry",
    2: "category 2: locally symmetric of non-compact type, nonzero Gromov norm",
}


@dataclass(frozen=True)
class Geometry4Report:
    record: Geometry4
    notes: Tuple[str, ...]

    def to_json(self) -> Dict[str, Any]:
        return {'record': self.record.to_json(), 'notes': list(self.notes)}

    def render(self) -> str:
        r = self.record
        lines = [
            f"{r.name.value} ({r.display})",
            f"  category: {r.category}",
            f"  compact model: {'yes' if r.admits_compact_model else 'no'}",
            f"  compatible complex: {'yes' if r.admits_compatible_complex else 'no'}",
            f"  compatible Kaehler: {'yes' if r.admits_compatible_kahler else 'no'}",
            f"  symplectic models: {r.admits_symplectic_model.value}",
            f"  Gromov norm: {'nonzero' if r.gromov_nonzero else 'zero'}",
        ]
        lines.extend(f"  note: {note}" for note in self.notes)
        return "\n".join(lines)


def geometry4_query(name: Geometry4Name) -> Geometry4Report:
    record = geometry4_record(name)
    notes = [_CATEGORY_NOTES[record.category.value]]
    if record.symplectic_models:
        notes.append(f"symplectic models realized by {record.symplectic_models}")
    if record.symplectic_condition:
        notes.append(f"symplectic only for {record.symplectic_condition}; other members admit no symplectic model")
    if record.kodaira_class:
        notes.append(f"complex surfaces of Kodaira class {record.kodaira_class}")
    if record.admits_compatible_kahler:
        notes.append("Kodaira dimension of compatible Kaehler structures equals the category")
    if record.notes:
        notes.append(record.notes)
    return Geometry4Report(record, tuple(notes))


def surface_product_record(g: int, h: int, area_g: Any = 1, area_h: Any = 1) -> SymplecticRecord4:
    """Sigma_g x Sigma_h with the product form"""
    if g < 0 or h < 0:
        raise PreconditionError("genera must be non-negative")
    area_g, area_h = as_fraction(area_g), as_fraction(area_h)
    if area_g <= 0 or area_h <= 0:
        raise PreconditionError("areas must be positive")
    kg, kh = 2 * g - 2, 2 * h - 2
    return SymplecticRecord4(kg * area_h + kh * area_g, Fraction(2 * kg * kh), True)


@dataclass(frozen=True)
class RepresentativeModel:
    geometry: Geometry4Name
    model: str
    record: SymplecticRecord4

    def to_json(self) -> Dict[str, Any]:
        return {'geometry': self.geometry.value, 'model': self.model, 'record': self.record.to_json()}


def representative_records() -> List[RepresentativeModel]:
    """Named minimal symplectic models of the geometries that have one"""
    return [
        RepresentativeModel(Geometry4Name.CP2, "CP^2 with the Fubini-Study form",
                            SymplecticRecord4(-3, 9, True)),
        RepresentativeModel(Geometry4Name.S2xS2, "S^2 x S^2", surface_product_record(0, 0)),
        RepresentativeModel(Geometry4Name.S2xE2, "S^2 x T^2", surface_product_record(0, 1)),
        RepresentativeModel(Geometry4Name.S2xH2, "S^2 x Sigma_2", surface_product_record(0, 2)),
        RepresentativeModel(Geometry4Name.E4, "T^4", surface_product_record(1, 1)),
        RepresentativeModel(Geometry4Name.Nil3xE, "Kodaira-Thurston manifold", SymplecticRecord4(0, 0, True)),
        RepresentativeModel(Geometry4Name.H2xE2, "T^2 x Sigma_2", surface_product_record(1, 2)),
        RepresentativeModel(Geometry4Name.H2xH2, "Sigma_2 x Sigma_2", surface_product_record(2, 2)),
        # K^2 = 3 c_2 = 9 with the Kaehler form in the class of K
        RepresentativeModel(Geometry4Name.H2C, "ball quotient with K^2 = 9, [w] = K",
                            SymplecticRecord4(9, 9, True)),
    ]


@dataclass(frozen=True)
class CircleProductComparison:
    fiber_genus: int
    kappa_t: KodairaDim
    kappa_l: KodairaDim

    @property
    def agree(self) -> bool:
        return self.kappa_t == self.kappa_l

    def to_json(self) -> Dict[str, Any]:
        return {'fiber_genus': self.fiber_genus, 'kappa_t': self.kappa_t.to_json(),
                'kappa_l': self.kappa_l.to_json(), 'agree': self.agree}


def circle_product_comparison(fiber_genus: int, monodromy: Monodromy = Monodromy.periodic,
                              volume: Optional[Any] = None) -> CircleProductComparison:
    """kappa_t of a Sigma_g bundle over S^1 against kappa_l of (that bundle) x S^1.

    The product is a Sigma_g bundle over T^2, Lefschetz data (g, 1, 0).
    """
    bundle = surface_bundle_geometry(fiber_genus, monodromy, volume)
    return CircleProductComparison(fiber_genus, kappa_t(bundle), kappa_l(LefschetzRecord(fiber_genus, 1, 0)))


def kappa_s_table(records: Sequence[RepresentativeModel]) -> List[Tuple[RepresentativeModel, KodairaDim, bool]]:
    """(model, kappa_s, matches category) for each representative"""
    rows = []
    for model in records:
        kappa = kappa_s_4(model.record)
        matches = kappa == geometry4_record(model.geometry).category
        if not matches:
            logger.warning(f"{model.geometry.value}: kappa_s {kappa} differs from category")
        rows.append((model, kappa, matches))
    return rows
