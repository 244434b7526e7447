#!/usr/bin/env python3
"""
random_models.py - Seeded generators of valid inputs and the randomized suites

The generators only produce data the computing functions accept: valid
3-manifold descriptions, clause-consistent symplectic data realizable by a
minimal symplectic 4-manifold, positive-shape symplectic classes, unimodular
matrices with bounded entries. The test files and the `selfcheck` command
share them.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import sympy
from tqdm import tqdm

from kodaira_values import (
    KAPPA_ONE, KAPPA_TWO, KAPPA_ZERO, NEG_INF, KodairaDim, NormConstant, SymbolicNorm,
)
from kodim_errors import ParseError
from lattice import (
    DEFAULT_SEARCH_BOUND, Lattice2, LatticeFamily, SurfaceFactor, additivity_check, light_cone_search,
    omega_from_shape, rational_ruled_negativity_check, square,
)
from manifold_parser import (
    parse_geom4, parse_kappa4_record, parse_kappa6_record, parse_lattice_record, parse_manifold3,
    parse_product6_record,
)
from maps import (
    HomologyEndo, InvariantProfile, MapClaim, Obstruction, degree_one_equivalence_check, domination_obstructions,
    shub_entropy,
)
from taxonomy import Geometry3Name, geometry3_record
from threefold import Manifold3, Piece3, kappa_t

logger = logging.getLogger(__name__)

_CATEGORY_ONE = [Geometry3Name.H2xE, Geometry3Name.SL2R, Geometry3Name.H3]


def random_piece(rng: random.Random, category_one_only: bool = False) -> Piece3:
    name = rng.choice(_CATEGORY_ONE if category_one_only else list(Geometry3Name))
    if name is Geometry3Name.H3:
        return Piece3.hyperbolic(Fraction(rng.randint(1, 400), rng.randint(1, 100)))
    return Piece3(name)


def random_manifold3(rng: random.Random, max_blocks: int = 4, max_pieces: int = 3) -> Manifold3:
    blocks = []
    for _ in range(rng.randint(1, max_blocks)):
        if rng.random() < 0.3:
            blocks.append([random_piece(rng, True) for _ in range(rng.randint(2, max_pieces))])
        else:
            blocks.append([random_piece(rng)])
    return Manifold3.of(*blocks)


def kappa_t_by_cases(m: Manifold3) -> KodairaDim:
    """kappa_t as the three-case definition reads, not as a maximum"""
    categories = [geometry3_record(p.geometry).category for _, p in m.pieces()]
    if all(c == NEG_INF for c in categories):
        return NEG_INF
    if any(c == KAPPA_ONE for c in categories):
        return KAPPA_ONE
    return KAPPA_ZERO


def _positive(rng: random.Random, top: int = 50) -> Fraction:
    return Fraction(rng.randint(1, top), rng.randint(1, 6))


def random_symplectic_data(rng: random.Random) -> Tuple[Fraction, Fraction, Fraction, KodairaDim]:
    """(K^2, K.w, w^2, kappa_s) consistent with the minimal-model clauses.

    kappa_s = -inf data with K^2 > 0 also satisfies (K.w)^2 >= K^2 w^2,
    as every rational or ruled surface does.
    """
    w2 = _positive(rng)
    kappa = rng.choice([NEG_INF, KAPPA_ZERO, KAPPA_ONE, KAPPA_TWO])
    if kappa == KAPPA_TWO:
        return _positive(rng), _positive(rng), w2, kappa
    if kappa == KAPPA_ONE:
        return Fraction(0), _positive(rng), w2, kappa
    if kappa == KAPPA_ZERO:
        return Fraction(0), Fraction(0), w2, kappa
    shape = rng.randrange(3)
    if shape == 0:
        # K^2 < 0, any sign of K.w
        return -_positive(rng), Fraction(rng.randint(-20, 20), rng.randint(1, 6)), w2, kappa
    kw = -_positive(rng)
    if shape == 1:
        return Fraction(0), kw, w2, kappa
    k2 = kw * kw / w2 * Fraction(rng.randint(1, 10), 10)
    return k2, kw, w2, kappa


def random_omega_shape(rng: random.Random, l: Lattice2) -> Tuple[Fraction, ...]:
    """Positive coefficients (a, b_1, ...) with w.w > 0"""
    if l.family is LatticeFamily.S2XS2:
        return (_positive(rng, 20), _positive(rng, 20))
    bs = [Fraction(rng.randint(1, 9), rng.randint(1, 3)) for _ in range(l.rank - 1)]
    norm_sq = sum((b * b for b in bs), Fraction(0))
    a = Fraction(int(float(norm_sq) ** 0.5) + 1) + Fraction(rng.randint(0, 6), rng.randint(1, 3))
    while a * a <= norm_sq:
        a += 1
    return (a,) + tuple(bs)


def random_unimodular(rng: random.Random, n: int, entry_bound: int = 3) -> Tuple[List[List[int]], List[List[int]]]:
    """A random matrix of determinant +-1 with entries in [-bound, bound], and its inverse"""
    while True:
        matrix = sympy.eye(n)
        for _ in range(rng.randint(1, 3 * n)):
            i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
            if n > 1 and rng.random() < 0.8:
                matrix = matrix.elementary_row_op("n->n+km", row=i, k=rng.choice([-1, 1]), row2=j)
            elif rng.random() < 0.5:
                matrix = matrix.elementary_row_op("n->kn", row=i, k=-1)
            elif n > 1:
                matrix = matrix.elementary_row_op("n<->m", row1=i, row2=j)
        if max(abs(v) for v in matrix) <= entry_bound:
            inverse = matrix.inv()
            return ([[int(v) for v in matrix.row(r)] for r in range(n)],
                    [[int(v) for v in inverse.row(r)] for r in range(n)])


def random_integer_matrix(rng: random.Random, n: int, bound: int = 3) -> List[List[int]]:
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]


def random_homology_endo(rng: random.Random, max_size: int = 3) -> HomologyEndo:
    return HomologyEndo(tuple(random_integer_matrix(rng, rng.randint(1, max_size))
                              for _ in range(rng.randint(1, 3))))


def random_consistent_profiles(rng: random.Random) -> Tuple[InvariantProfile, InvariantProfile, int]:
    """Source and target profiles of dimension 3 for which kappa_t and the
    norm inequality hold for the chosen degree"""
    degree = rng.choice([-3, -2, -1, 1, 2, 3])
    source_kappa = rng.choice([NEG_INF, KAPPA_ZERO, KAPPA_ONE])
    target_kappa = rng.choice([k for k in (NEG_INF, KAPPA_ZERO, KAPPA_ONE) if k <= source_kappa])
    source_volume = Fraction(rng.randint(0, 300), rng.randint(1, 20)) if source_kappa == KAPPA_ONE else Fraction(0)
    target_volume = Fraction(0)
    if target_kappa == KAPPA_ONE and source_volume and rng.random() < 0.7:
        target_volume = source_volume / abs(degree) * Fraction(rng.randint(1, 10), 10)
    source = InvariantProfile(3, kappa_t=source_kappa, gromov_norm=SymbolicNorm.of(source_volume, NormConstant.INV_V3))
    target = InvariantProfile(3, kappa_t=target_kappa, gromov_norm=SymbolicNorm.of(target_volume, NormConstant.INV_V3))
    return source, target, degree


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    first_failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self):
        return {'name': self.name, 'cases': self.cases, 'failures': self.failures,
                'first_failure': self.first_failure, 'passed': self.passed}


def _kappa_definition_case(rng: random.Random, index: int) -> Optional[str]:
    m = random_manifold3(rng)
    if kappa_t(m) != kappa_t_by_cases(m):
        return f"{m.render()}: max {kappa_t(m)} vs cases {kappa_t_by_cases(m)}"
    return None


def _monotonicity_case(rng: random.Random, index: int) -> Optional[str]:
    source, target, degree = random_consistent_profiles(rng)
    found = domination_obstructions(MapClaim(source, target, degree))
    if found:
        return f"consistent pair reported {[v.obstruction.value for v in found]}"
    if target.kappa_t < source.kappa_t:
        swapped = domination_obstructions(MapClaim(target, source, 1))
        if Obstruction.KAPPA_T not in {v.obstruction for v in swapped}:
            return "kappa_t violation missed"
    return None


def _additivity_case(rng: random.Random, index: int) -> Optional[str]:
    k2, kw, w2, kappa = random_symplectic_data(rng)
    sigma = SurfaceFactor(index % 4, _positive(rng, 10))
    verdict = additivity_check(k2, kw, w2, kappa, sigma)
    if not verdict.passed:
        return f"(k2={k2}, kw={kw}, w2={w2}, kappa={kappa}, g={sigma.genus}): {verdict.computed} != {verdict.expected}"
    return None


NEGATIVITY_LATTICES = [Lattice2.cp2_blowup(k) for k in range(9)] + [Lattice2.s2xs2()]
LIGHT_CONE_LATTICES = [Lattice2.cp2_blowup(k) for k in range(10)] + [Lattice2.s2xs2()]


def _negativity_case(rng: random.Random, index: int) -> Optional[str]:
    l = NEGATIVITY_LATTICES[index % len(NEGATIVITY_LATTICES)]
    omega = random_omega_shape(rng, l)
    verdict = rational_ruled_negativity_check(l, omega, rng.randint(2, 5), _positive(rng, 10))
    if not verdict.passed:
        return f"{l.token()} omega={[str(c) for c in omega]}"
    return None


def _light_cone_case(rng: random.Random, index: int) -> Optional[str]:
    l = LIGHT_CONE_LATTICES[index % len(LIGHT_CONE_LATTICES)]
    omega = omega_from_shape(l, random_omega_shape(rng, l))
    if square(l, omega) <= 0:
        return f"{l.token()}: generated w with w.w <= 0"
    found = light_cone_search(l, omega, bound=DEFAULT_SEARCH_BOUND)
    if found:
        return f"{l.token()}: {found[0].render()}"
    return None


def _entropy_case(rng: random.Random, index: int) -> Optional[str]:
    n = rng.randint(1, 3)
    f = random_integer_matrix(rng, n)
    u, u_inv = random_unimodular(rng, n)
    conjugated = sympy.Matrix(u_inv) * sympy.Matrix(f) * sympy.Matrix(u)
    s1 = shub_entropy(HomologyEndo((f,)))
    s2 = shub_entropy(HomologyEndo(([[int(v) for v in conjugated.row(r)] for r in range(n)],)))
    if abs(s1 - s2) > 1e-9:
        return f"{f}: {s1} vs {s2} after conjugation"
    return None


def random_equivalence_triple(rng: random.Random, max_size: int = 3) -> Tuple[HomologyEndo, List, List]:
    """(f1, g_star, h_star) with g unimodular and h = g^-1 in every degree"""
    f1 = random_homology_endo(rng, max_size)
    g_star, h_star = [], []
    for matrix in f1.matrices:
        g, g_inv = random_unimodular(rng, len(matrix))
        g_star.append(g)
        h_star.append(g_inv)
    return f1, g_star, h_star


def _degree_one_case(rng: random.Random, index: int) -> Optional[str]:
    f1, g_star, h_star = random_equivalence_triple(rng)
    verdict = degree_one_equivalence_check(f1, g_star, h_star)
    if not verdict.passed:
        return f"{f1.to_json()}: S(f1) = {verdict.entropy_f1} vs S(f2) = {verdict.entropy_f2}"
    return None


def _round_trip_case(rng: random.Random, index: int) -> Optional[str]:
    m = random_manifold3(rng)
    text = m.render()
    if parse_manifold3(text) != m:
        return f"{text!r} does not parse back to itself"
    return None


_NOISE = "S3HNilE2xSolJ[](),#=vol/.0123456789 -~^"


def random_noise(rng: random.Random, max_length: int = 40) -> str:
    """Mutated descriptions and records, or plain random strings"""
    choice = rng.randrange(3)
    if choice == 0:
        return "".join(rng.choice(_NOISE) for _ in range(rng.randint(0, max_length)))
    base = random_manifold3(rng).render() if choice == 1 else rng.choice(_RECORD_SAMPLES)
    chars = list(base)
    for _ in range(rng.randint(1, 4)):
        op = rng.randrange(3)
        position = rng.randint(0, len(chars))
        if op == 0 and chars and position < len(chars):
            del chars[position]
        elif op == 1:
            chars.insert(position, rng.choice(_NOISE))
        else:
            depth = rng.randint(1, 600)
            chars[position:position] = list("(" * depth + "1" + ")" * depth)
    return "".join(chars)


_RECORD_SAMPLES = [
    "sympl4(kw=-3, k2=9, minimal=true)",
    "lef(g=2, h=1, n=1)",
    "plurigenera[(1,0), (2,1), (3,1), (4,2)]",
    "geom4(H2xH2, vol=12)",
    "product6(k2=9, kw=-3, w2=1, g=2, area=1/2, kappa=-inf)",
    "kappa6(k3=1, k2w=1, kw2=1)",
    "negativity(lattice=cp2#8, omega=(3,1,1,1,1,1,1,1,1), g=2)",
    "lightcone(lattice=cp2#1, omega=(2,1), x=(1,2))",
    "thom(real=(1,2,1), complex=(1,0,22,0,1), chi_real=0, chi_complex=24)",
]

_PARSERS = [parse_manifold3, parse_kappa4_record, parse_geom4, parse_kappa6_record,
            parse_product6_record, parse_lattice_record]


def _fuzz_case(rng: random.Random, index: int) -> Optional[str]:
    text = random_noise(rng)
    parser = _PARSERS[index % len(_PARSERS)]
    try:
        parser(text)
    except ParseError as exn:
        if not 0 <= exn.offset <= len(text.encode()):
            return f"{parser.__name__}({text!r}): offset {exn.offset} out of range"
    except Exception as exn:
        return f"{parser.__name__}({text!r}): {type(exn).__name__}: {exn}"
    return None


SUITES: List[Tuple[str, Callable[[random.Random, int], Optional[str]], int]] = [
    ("kappa_t definition", _kappa_definition_case, 10000),
    ("kappa_t monotonicity", _monotonicity_case, 1000),
    ("product additivity", _additivity_case, 10000),
    ("rational/ruled negativity", _negativity_case, 1000 * len(NEGATIVITY_LATTICES)),
    ("light cone", _light_cone_case, 100 * len(LIGHT_CONE_LATTICES)),
    ("entropy conjugation", _entropy_case, 500),
    ("degree-one equivalence", _degree_one_case, 500),
    ("parse round-trip", _round_trip_case, 10000),
    ("parser fuzz", _fuzz_case, 20000),
]


def run_suites(seed: int = 0, scale: float = 1.0, progress: bool = True) -> List[SuiteResult]:
    """Run every suite; scale multiplies the case counts"""
    results = []
    for name, case, count in SUITES:
        rng = random.Random(f"{seed}:{name}")
        cases = max(1, int(count * scale))
        result = SuiteResult(name, cases, 0)
        for index in tqdm(range(cases), desc=name, disable=not progress):
            failure = case(rng, index)
            if failure:
                result.failures += 1
                if result.first_failure is None:
                    result.first_failure = failure
                    logger.warning(f"{name}: {failure}")
        results.append(result)
    return results
