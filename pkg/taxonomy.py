#!/usr/bin/env python3
"""
taxonomy.py - Tables of the 8 three-dimensional and 19 four-dimensional geometries

Each geometry is one immutable record. Dimension 3 records carry the Kodaira
category used by kappa_t, the fundamental-group class of closed models, and
whether non-closed finite-volume models exist. Dimension 4 records carry the
category, compact-model existence, compatibility with complex and Kaehler
structures, existence of symplectic models and whether closed models have
nonzero Gromov norm.

Listing order follows the conventional enumeration (S3 first in dimension 3,
CP2 first in dimension 4).

Records are frozen dataclasses held in module-level tuples; concurrent reads
need no locking.
"""

import logging
from dataclasses import asdict, dataclass
from enum import Enum, IntEnum
from typing import Any, Dict, List, Optional, Tuple, Union

from kodaira_values import KAPPA_ONE, KAPPA_TWO, KAPPA_ZERO, NEG_INF, KodairaDim
from kodim_errors import PreconditionError

logger = logging.getLogger(__name__)


class Geometry3Name(Enum):
    S3 = "S3"
    S2xE = "S2xE"
    E3 = "E3"
    Nil = "Nil"
    Sol = "Sol"
    H2xE = "H2xE"
    SL2R = "SL2R"
    H3 = "H3"


class Geometry4Name(Enum):
    CP2 = "CP2"
    S4 = "S4"
    S3xE = "S3xE"
    S2xS2 = "S2xS2"
    S2xE2 = "S2xE2"
    S2xH2 = "S2xH2"
    Sol0_4 = "Sol0_4"
    Sol1_4 = "Sol1_4"
    E4 = "E4"
    Nil4 = "Nil4"
    Nil3xE = "Nil3xE"
    Sol_mn = "Sol_mn"
    H2xE2 = "H2xE2"
    SL2RxE = "SL2RxE"
    H3xE = "H3xE"
    F4 = "F4"
    H2C = "H2C"
    H2xH2 = "H2xH2"
    H4 = "H4"


class Pi1Class(IntEnum):
    """Fundamental-group classes of closed geometric 3-manifolds.

    Ordered by containment: each class contains the groups of the ones
    before it.
    """
    Finite = 0
    VirtuallyCyclic = 1
    VirtuallyAbelian = 2
    VirtuallyNilpotent = 3
    VirtuallySolvable = 4
    InfIndexNormalCyclicNotSolvable = 5
    Hyperbolic = 6


class TriState(Enum):
    yes = "yes"
    no = "no"
    conjecturally_no = "conjecturally_no"


@dataclass(frozen=True)
class Geometry3:
    """One of Thurston's eight geometries"""
    name: Geometry3Name
    category: KodairaDim
    pi1_class: Pi1Class
    admits_noncompact_finite_volume: bool
    display: str
    notes: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {
            'name': self.name.value,
            'category': self.category.to_json(),
            'pi1_class': self.pi1_class.name,
            'admits_noncompact_finite_volume': self.admits_noncompact_finite_volume,
            'display': self.display,
            'notes': self.notes,
        }


@dataclass(frozen=True)
class Geometry4:
    """One of the nineteen 4-dimensional geometries"""
    name: Geometry4Name
    category: KodairaDim
    admits_compact_model: bool
    admits_compatible_complex: bool
    admits_compatible_kahler: bool
    admits_symplectic_model: TriState
    gromov_nonzero: bool
    display: str
    # the m = n member of Sol_mn is Sol^3 x E
    includes_product_case: bool = False
    kodaira_class: Optional[str] = None
    symplectic_models: str = ""
    # members of the family outside this condition carry no symplectic form
    symplectic_condition: str = ""
    notes: str = ""

    def to_json(self) -> Dict[str, Any]:
        data = asdict(self)
        data['name'] = self.name.value
        data['category'] = self.category.to_json()
        data['admits_symplectic_model'] = self.admits_symplectic_model.value
        return data


_GEOMETRIES_3: Tuple[Geometry3, ...] = (
    Geometry3(Geometry3Name.S3, NEG_INF, Pi1Class.Finite, False, "S^3",
              "closed models are spherical space forms"),
    Geometry3(Geometry3Name.S2xE, NEG_INF, Pi1Class.VirtuallyCyclic, False, "S^2 x E",
              "closed oriented models: S^2 x S^1 and RP^3 # RP^3"),
    Geometry3(Geometry3Name.E3, KAPPA_ZERO, Pi1Class.VirtuallyAbelian, False, "E^3"),
    Geometry3(Geometry3Name.Nil, KAPPA_ZERO, Pi1Class.VirtuallyNilpotent, False, "Nil"),
    Geometry3(Geometry3Name.Sol, KAPPA_ZERO, Pi1Class.VirtuallySolvable, False, "Sol",
              "closed models are T^2 bundles over S^1 with Anosov monodromy, or quotients"),
    Geometry3(Geometry3Name.H2xE, KAPPA_ONE, Pi1Class.InfIndexNormalCyclicNotSolvable, True, "H^2 x E"),
    Geometry3(Geometry3Name.SL2R, KAPPA_ONE, Pi1Class.InfIndexNormalCyclicNotSolvable, True, "~SL_2(R)",
              "universal cover of PSL_2(R), the unit tangent bundle of H^2"),
    Geometry3(Geometry3Name.H3, KAPPA_ONE, Pi1Class.Hyperbolic, True, "H^3"),
)

_RATIONAL_RULED = "rational or ruled surfaces"
_T2_OVER_T2 = "T^2 bundles over T^2"
_OVER_TORUS = "surface bundles over T^2"

_GEOMETRIES_4: Tuple[Geometry4, ...] = (
    Geometry4(Geometry4Name.CP2, NEG_INF, True, True, True, TriState.yes, False, "CP^2",
              symplectic_models=_RATIONAL_RULED),
    Geometry4(Geometry4Name.S4, NEG_INF, True, False, False, TriState.no, False, "S^4"),
    Geometry4(Geometry4Name.S3xE, NEG_INF, True, True, False, TriState.no, False, "S^3 x E",
              kodaira_class="VII"),
    Geometry4(Geometry4Name.S2xS2, NEG_INF, True, True, True, TriState.yes, False, "S^2 x S^2",
              symplectic_models=_RATIONAL_RULED),
    Geometry4(Geometry4Name.S2xE2, NEG_INF, True, True, True, TriState.yes, False, "S^2 x E^2",
              symplectic_models=_RATIONAL_RULED),
    Geometry4(Geometry4Name.S2xH2, NEG_INF, True, True, True, TriState.yes, False, "S^2 x H^2",
              symplectic_models=_RATIONAL_RULED),
    Geometry4(Geometry4Name.Sol0_4, NEG_INF, True, True, False, TriState.no, False, "Sol^4_0",
              kodaira_class="VII"),
    Geometry4(Geometry4Name.Sol1_4, NEG_INF, True, True, False, TriState.no, False, "Sol^4_1",
              kodaira_class="VII",
              notes="carries two complex structures, Sol^4_1 and Sol'^4_1; neither is Kaehler"),
    Geometry4(Geometry4Name.E4, KAPPA_ZERO, True, True, True, TriState.yes, False, "E^4",
              symplectic_models=_T2_OVER_T2),
    Geometry4(Geometry4Name.Nil4, KAPPA_ZERO, True, False, False, TriState.yes, False, "Nil^4",
              symplectic_models=_T2_OVER_T2),
    Geometry4(Geometry4Name.Nil3xE, KAPPA_ZERO, True, True, False, TriState.yes, False, "Nil^3 x E",
              kodaira_class="VI", symplectic_models=_T2_OVER_T2,
              notes="compact model: the Kodaira-Thurston manifold"),
    Geometry4(Geometry4Name.Sol_mn, KAPPA_ZERO, True, False, False, TriState.yes, False, "Sol^4_{m,n}",
              includes_product_case=True, symplectic_models=_T2_OVER_T2 + " (the m = n case Sol^3 x E)",
              symplectic_condition="m = n, where the geometry is Sol^3 x E",
              notes="m = n gives Sol^3 x E"),
    Geometry4(Geometry4Name.H2xE2, KAPPA_ONE, True, True, True, TriState.yes, False, "H^2 x E^2",
              symplectic_models=_OVER_TORUS),
    Geometry4(Geometry4Name.SL2RxE, KAPPA_ONE, True, True, False, TriState.yes, False, "~SL_2 x E",
              kodaira_class="VI", symplectic_models=_OVER_TORUS),
    Geometry4(Geometry4Name.H3xE, KAPPA_ONE, True, False, False, TriState.yes, False, "H^3 x E",
              symplectic_models=_OVER_TORUS),
    Geometry4(Geometry4Name.F4, KAPPA_ONE, False, True, True, TriState.no, False, "F^4",
              notes="only geometry with no compact model; finite-volume models exist"),
    Geometry4(Geometry4Name.H2C, KAPPA_TWO, True, True, True, TriState.yes, True, "H^2(C)",
              symplectic_models="ball quotients"),
    Geometry4(Geometry4Name.H2xH2, KAPPA_TWO, True, True, True, TriState.yes, True, "H^2 x H^2",
              symplectic_models="products of surfaces Sigma_g x Sigma_h"),
    Geometry4(Geometry4Name.H4, KAPPA_TWO, True, False, False, TriState.conjecturally_no, True, "H^4",
              notes="closed hyperbolic 4-manifolds are conjectured to have vanishing Seiberg-Witten invariants"),
)

_BY_NAME_3 = {g.name: g for g in _GEOMETRIES_3}
_BY_NAME_4 = {g.name: g for g in _GEOMETRIES_4}

# Alternate ASCII spellings accepted by the description language. Keys are
# lower-case; lookups are case-insensitive.
_SYNONYMS_3 = {
    "s^3": Geometry3Name.S3, "spherical": Geometry3Name.S3,
    "s2xr": Geometry3Name.S2xE, "s^2xe": Geometry3Name.S2xE, "s^2xr": Geometry3Name.S2xE,
    "e^3": Geometry3Name.E3, "r3": Geometry3Name.E3, "euclidean": Geometry3Name.E3,
    "nil3": Geometry3Name.Nil,
    "sol3": Geometry3Name.Sol,
    "h2xr": Geometry3Name.H2xE, "h^2xe": Geometry3Name.H2xE, "h^2xr": Geometry3Name.H2xE,
    "sl2": Geometry3Name.SL2R, "psl2r": Geometry3Name.SL2R, "sl2r~": Geometry3Name.SL2R,
    "~sl2r": Geometry3Name.SL2R,
    "h^3": Geometry3Name.H3, "hyperbolic": Geometry3Name.H3,
}

_SYNONYMS_4 = {
    "p2c": Geometry4Name.CP2, "cp^2": Geometry4Name.CP2,
    "s^4": Geometry4Name.S4,
    "s3xr": Geometry4Name.S3xE,
    "s2xr2": Geometry4Name.S2xE2,
    "sol04": Geometry4Name.Sol0_4, "sol_0^4": Geometry4Name.Sol0_4,
    "sol14": Geometry4Name.Sol1_4, "sol_1^4": Geometry4Name.Sol1_4, "sol'1_4": Geometry4Name.Sol1_4,
    "r4": Geometry4Name.E4, "e^4": Geometry4Name.E4,
    "nil^4": Geometry4Name.Nil4,
    "nilxe": Geometry4Name.Nil3xE, "nil3xr": Geometry4Name.Nil3xE,
    "solmn": Geometry4Name.Sol_mn, "sol4_mn": Geometry4Name.Sol_mn, "sol3xe": Geometry4Name.Sol_mn,
    "h2xr2": Geometry4Name.H2xE2,
    "sl2xe": Geometry4Name.SL2RxE, "sl2rxr": Geometry4Name.SL2RxE,
    "h3xr": Geometry4Name.H3xE,
    "ch2": Geometry4Name.H2C, "complexhyperbolic": Geometry4Name.H2C,
    "h^4": Geometry4Name.H4,
}


def geometry3_record(name: Geometry3Name) -> Geometry3:
    """Record for a 3-dimensional geometry"""
    return _BY_NAME_3[name]


def geometry4_record(name: Geometry4Name) -> Geometry4:
    """Record for a 4-dimensional geometry"""
    return _BY_NAME_4[name]


def list_geometries(dimension: int) -> List[Union[Geometry3, Geometry4]]:
    """All records of the given dimension in listing order"""
    if dimension == 3:
        return list(_GEOMETRIES_3)
    if dimension == 4:
        return list(_GEOMETRIES_4)
    raise PreconditionError(f"geometries are tabulated for dimension 3 or 4, not {dimension}")


def lookup_geometry(token: str, dimension: int) -> Union[Geometry3Name, Geometry4Name]:
    """Resolve an ASCII spelling (or synonym) to a geometry name.

    Raises KeyError for unknown tokens.
    """
    if dimension not in (3, 4):
        raise PreconditionError(f"geometries are tabulated for dimension 3 or 4, not {dimension}")
    enum = Geometry3Name if dimension == 3 else Geometry4Name
    synonyms = _SYNONYMS_3 if dimension == 3 else _SYNONYMS_4
    key = token.strip().lower()
    for member in enum:
        if member.value.lower() == key:
            return member
    if key in synonyms:
        logger.debug(f"resolved synonym {token!r} -> {synonyms[key].value}")
        return synonyms[key]
    raise KeyError(token)


def geometry_tokens(dimension: int) -> List[str]:
    """Canonical spellings, for error messages"""
    enum = Geometry3Name if dimension == 3 else Geometry4Name
    return [member.value for member in enum]


@dataclass(frozen=True)
class Sol4Classification:
    geometry: Geometry4Name
    is_product: bool
    discriminant: int


def classify_sol4_parameters(m: int, n: int) -> Sol4Classification:
    """Which solvable geometry the cubic x^3 - m x^2 + n x - 1 defines.

    Three distinct (necessarily positive) real roots give Sol^4_{m,n}, and
    m = n gives the product Sol^3 x E. A double root gives Sol^4_0.
    """
    if m <= 0 or n <= 0:
        raise PreconditionError("Sol^4_{m,n} needs positive integers m, n")
    discriminant = m * m * n * n - 4 * n ** 3 - 4 * m ** 3 + 18 * m * n - 27
    if discriminant > 0:
        return Sol4Classification(Geometry4Name.Sol_mn, m == n, discriminant)
    if discriminant == 0:
        if m == 3 and n == 3:
            raise PreconditionError("triple root 1: unipotent monodromy, not a Sol geometry")
        return Sol4Classification(Geometry4Name.Sol0_4, False, discriminant)
    raise PreconditionError(f"x^3 - {m}x^2 + {n}x - 1 has complex roots; no Sol geometry")
