#!/usr/bin/env python3
"""
manifold_parser.py - Parser for the kodim description language

Two shapes of input:

    manifold3 := block ('#' block)*
    block     := piece | 'JSJ[' piece (',' piece)* ']'
    piece     := <geometry> | 'H3(vol=' rational ')'

and keyword records such as

    sympl4(kw=-3, k2=9, minimal=true)
    lef(g=2, h=1, n=0)
    plurigenera[(1,0), (2,1), (3,1), (4,2)]
    geom4(H2xH2, vol=12)
    product6(k2=9, kw=-3, w2=1, g=2, area=1)
    negativity(lattice=cp2#8, omega=(3,1,1,1,1,1,1,1,1), g=2)
    lattice(cp2#3)   lightcone(lattice=cp2#1, omega=(2,1), x=(1,2))
    thom(real=(1,2,1), complex=(1,0,22,0,1), chi_real=0, chi_complex=24)

Whitespace is insignificant. Rationals are p, p/q or decimal literals,
converted exactly. Tuples nest at most MAX_NESTING deep. Every failure is a
ParseError carrying a 0-based byte offset into the UTF-8 encoded input and
the set of acceptable tokens at that point.
"""

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import lark

from fourfold import LefschetzRecord, PlurigeneraSample, SymplecticRecord4
from kodaira_values import NEG_INF, KodairaDim
from kodim_errors import KodimError, ParseError, byte_offset
from lattice import Lattice2, Product6, SurfaceFactor
from taxonomy import Geometry3Name, Geometry4Name, geometry_tokens, lookup_geometry
from threefold import IrreducibleBlock3, Manifold3, Piece3

logger = logging.getLogger(__name__)

T = TypeVar('T')

MAX_NESTING = 64

grammar = r"""
manifold3: block ("#" block)*

block: piece                                -> single_block
     | _JSJ_OPEN piece ("," piece)* "]"     -> jsj_block

piece: NAME                                 -> plain_piece
     | NAME "(" _VOL "=" RATIONAL ")"       -> volume_piece

record: NAME "(" [args] ")"                 -> paren_record
      | NAME "[" [items] "]"                -> bracket_record

args: arg ("," arg)*
?arg: NAME "=" value                        -> kwarg
    | value                                 -> positional

items: value (","? value)*

?value: RATIONAL                            -> number
      | NEGINF                              -> neginf
      | LATTICE                             -> lattice_token
      | NAME                                -> word
      | "(" ")"                             -> empty_tuple
      | "(" value ("," value)* ")"          -> tuple

_JSJ_OPEN.3: /JSJ\s*\[/i
_VOL.2: /vol(ume)?/i
LATTICE.3: /cp2#\d+/i
NEGINF.3: /-inf(inity)?/i
RATIONAL: /[+-]?(\d+\/\d+|\d*\.\d+|\d+\.?)/
NAME: /[A-Za-z~][A-Za-z0-9_^'~]*/

%import common.WS
%ignore WS
"""

# readable names for lark's terminal names in error messages
_TERMINAL_NAMES = {
    'NAME': 'name', 'RATIONAL': 'rational', 'LATTICE': 'lattice', 'NEGINF': '-inf',
    '_JSJ_OPEN': 'JSJ[', '_VOL': 'vol', 'HASH': '#', 'COMMA': ',', 'LPAR': '(',
    'RPAR': ')', 'LSQB': '[', 'RSQB': ']', 'EQUAL': '=', '$END': 'end of input',
}

larks_by_start: Dict[str, lark.Lark] = {}  # memoize Lark parsers constructed for various start symbols


def parse(txt: str, start: str) -> lark.Tree:
    if start not in larks_by_start:
        larks_by_start[start] = lark.Lark(grammar, start=start, parser="lalr", propagate_positions=True)
    return larks_by_start[start].parse(txt)


def _readable(expected) -> List[str]:
    return sorted({_TERMINAL_NAMES.get(name, name) for name in expected})


def _check_nesting(txt: str):
    depth = 0
    for pos, ch in enumerate(txt):
        if ch in '([':
            depth += 1
            if depth > MAX_NESTING:
                raise ParseError(f"nesting deeper than {MAX_NESTING} levels", pos, [')'])
        elif ch in ')]':
            depth = max(0, depth - 1)


def _parse_tree(txt: str, start: str) -> lark.Tree:
    if not txt.strip():
        raise ParseError("empty input", 0, ['name'])
    _check_nesting(txt)
    try:
        return parse(txt, start)
    except lark.exceptions.UnexpectedCharacters as exn:
        raise ParseError(f"unexpected character {txt[exn.pos_in_stream]!r}", exn.pos_in_stream,
                         _readable(exn.allowed or ())) from exn
    except lark.exceptions.UnexpectedToken as exn:
        offset = len(txt) if exn.token.type == '$END' or exn.token.start_pos is None else exn.token.start_pos
        found = "end of input" if exn.token.type == '$END' else repr(str(exn.token))
        raise ParseError(f"unexpected {found}", offset, _readable(exn.expected)) from exn
    except lark.exceptions.UnexpectedEOF as exn:
        raise ParseError("unexpected end of input", len(txt), _readable(exn.expected)) from exn
    except lark.exceptions.LarkError as exn:
        raise ParseError(str(exn), 0) from exn
    except RecursionError:
        raise ParseError("input nested too deeply", 0, []) from None


def _transform(transformer: lark.Transformer, tree: lark.Tree) -> Any:
    try:
        return transformer.transform(tree)
    except lark.exceptions.VisitError as exn:
        if isinstance(exn.orig_exc, ParseError):
            raise exn.orig_exc from None
        meta = getattr(exn.obj, 'meta', None)
        raise ParseError(str(exn.orig_exc), getattr(meta, 'start_pos', 0) or 0) from exn
    except RecursionError:
        raise ParseError("input nested too deeply", getattr(tree.meta, 'start_pos', 0) or 0, []) from None


def _in_bytes(fn: Callable[..., T]) -> Callable[..., T]:
    """Offsets are tracked in characters while parsing and reported in UTF-8 bytes"""
    @functools.wraps(fn)
    def wrapper(txt: str, *args):
        try:
            return fn(txt, *args)
        except ParseError as exn:
            raise ParseError(exn.args[0], byte_offset(txt, exn.offset), exn.expected) from exn.__cause__
    return wrapper


def _rational(token: lark.Token) -> Fraction:
    try:
        return Fraction(str(token))
    except (ValueError, ZeroDivisionError) as exn:
        raise ParseError(f"malformed rational {str(token)!r}", token.start_pos or 0, ['rational']) from exn


# ---------------------------------------------------------------------------
# 3-manifolds
# ---------------------------------------------------------------------------

def _geometry3(token: lark.Token) -> Geometry3Name:
    try:
        return lookup_geometry(str(token), 3)
    except KeyError:
        raise ParseError(f"unknown geometry {str(token)!r}", token.start_pos or 0, geometry_tokens(3)) from None


@lark.v_args(meta=True)
class _ManifoldTransformer(lark.Transformer):
    def manifold3(self, meta, items) -> Manifold3:
        return Manifold3(tuple(items))

    def single_block(self, meta, items) -> IrreducibleBlock3:
        return IrreducibleBlock3((items[0],))

    def jsj_block(self, meta, items) -> IrreducibleBlock3:
        return IrreducibleBlock3(tuple(items))

    def plain_piece(self, meta, items) -> Piece3:
        token = items[0]
        name = _geometry3(token)
        if name is Geometry3Name.H3:
            raise ParseError("H3 piece needs a volume, e.g. H3(vol=2)", token.end_pos or 0, ['('])
        return Piece3(name)

    def volume_piece(self, meta, items) -> Piece3:
        token, volume_token = items
        name = _geometry3(token)
        if name is not Geometry3Name.H3:
            raise ParseError(f"volume on non-H3 piece {name.value}", token.start_pos or 0, geometry_tokens(3))
        volume = _rational(volume_token)
        if volume <= 0:
            raise ParseError(f"hyperbolic volume must be positive, got {volume_token}",
                             volume_token.start_pos or 0, ['rational'])
        return Piece3(name, volume)


@_in_bytes
def parse_manifold3(txt: str) -> Manifold3:
    """Parse a connected sum of blocks; validation is left to the caller"""
    m = _transform(_ManifoldTransformer(), _parse_tree(txt, "manifold3"))
    logger.debug(f"parsed {m.render()} ({len(m.blocks)} block(s))")
    return m


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Located:
    value: Any
    offset: int


@dataclass
class Record:
    """name(args) or name[items] with positions kept for error reporting"""
    name: str
    offset: int
    positional: List[Located] = field(default_factory=list)
    keywords: Dict[str, Located] = field(default_factory=dict)
    end: int = 0

    def _missing(self, key: str) -> ParseError:
        return ParseError(f"{self.name}: missing argument {key!r}", self.end, [key])

    def has(self, key: str) -> bool:
        return key in self.keywords

    def get(self, key: str) -> Located:
        if key not in self.keywords:
            raise self._missing(key)
        return self.keywords[key]

    def rational(self, key: str, default: Optional[Fraction] = None) -> Fraction:
        if key not in self.keywords and default is not None:
            return default
        item = self.get(key)
        if not isinstance(item.value, Fraction):
            raise ParseError(f"{self.name}: {key} must be a rational", item.offset, ['rational'])
        return item.value

    def integer(self, key: str, default: Optional[int] = None) -> int:
        if key not in self.keywords and default is not None:
            return default
        item = self.get(key)
        if not isinstance(item.value, Fraction) or item.value.denominator != 1:
            raise ParseError(f"{self.name}: {key} must be an integer", item.offset, ['integer'])
        return int(item.value)

    def boolean(self, key: str, default: bool) -> bool:
        if key not in self.keywords:
            return default
        item = self.keywords[key]
        word = str(item.value).lower() if isinstance(item.value, str) else None
        if word in ('true', 'yes'):
            return True
        if word in ('false', 'no'):
            return False
        raise ParseError(f"{self.name}: {key} must be true or false", item.offset, ['true', 'false'])

    def rationals(self, key: str) -> Tuple[Fraction, ...]:
        item = self.get(key)
        values = item.value if isinstance(item.value, tuple) else (item.value,)
        if not all(isinstance(v, Fraction) for v in values):
            raise ParseError(f"{self.name}: {key} must be a tuple of rationals", item.offset, ['('])
        return values

    def integers(self, key: str) -> Tuple[int, ...]:
        values = self.rationals(key)
        if any(v.denominator != 1 for v in values):
            raise ParseError(f"{self.name}: {key} must be a tuple of integers", self.get(key).offset, ['('])
        return tuple(int(v) for v in values)

    def kappa(self, key: str) -> KodairaDim:
        item = self.get(key)
        if item.value is NEG_INF:
            return NEG_INF
        if isinstance(item.value, Fraction) and item.value.denominator == 1 and item.value >= 0:
            return KodairaDim(int(item.value))
        raise ParseError(f"{self.name}: {key} must be -inf or a non-negative integer", item.offset,
                         ['-inf', 'integer'])

    def lattice(self, item: Located) -> Lattice2:
        try:
            return Lattice2.from_token(str(item.value))
        except KodimError as exn:
            raise ParseError(str(exn), item.offset, ['cp2#k', 's2xs2']) from None

    def reject_unknown(self, allowed: Sequence[str]):
        for key, item in self.keywords.items():
            if key not in allowed:
                raise ParseError(f"{self.name}: unknown argument {key!r}", item.offset, list(allowed))


@lark.v_args(meta=True)
class _RecordTransformer(lark.Transformer):
    def paren_record(self, meta, items) -> Record:
        return self._record(meta, items)

    def bracket_record(self, meta, items) -> Record:
        return self._record(meta, items)

    def _record(self, meta, items) -> Record:
        name_token, args = items[0], items[1] if len(items) > 1 and items[1] is not None else []
        record = Record(str(name_token).lower(), name_token.start_pos or 0, end=meta.end_pos or 0)
        for kind, key, located in args:
            if kind == 'kw':
                if key in record.keywords:
                    raise ParseError(f"duplicate argument {key!r}", located.offset, [])
                record.keywords[key] = located
            else:
                record.positional.append(located)
        return record

    def args(self, meta, items):
        return items

    def items(self, meta, items):
        return [('pos', None, item) for item in items]

    def kwarg(self, meta, items):
        return ('kw', str(items[0]).lower(), items[1])

    def positional(self, meta, items):
        return ('pos', None, items[0])

    def number(self, meta, items) -> Located:
        return Located(_rational(items[0]), meta.start_pos)

    def neginf(self, meta, items) -> Located:
        return Located(NEG_INF, meta.start_pos)

    def lattice_token(self, meta, items) -> Located:
        return Located(str(items[0]).lower(), meta.start_pos)

    def word(self, meta, items) -> Located:
        return Located(str(items[0]), meta.start_pos)

    def empty_tuple(self, meta, items) -> Located:
        return Located((), meta.start_pos)

    def tuple(self, meta, items) -> Located:
        return Located(tuple(item.value for item in items), meta.start_pos)


def _read_record(txt: str, names: Sequence[str]) -> Record:
    record = _transform(_RecordTransformer(), _parse_tree(txt, "record"))
    if record.name not in names:
        raise ParseError(f"unexpected record {record.name!r}", record.offset, list(names))
    return record


@_in_bytes
def parse_record(txt: str, names: Sequence[str]) -> Record:
    """Parse one keyword record whose name is in names"""
    return _read_record(txt, names)


# ---------------------------------------------------------------------------
# Record payloads per command
# ---------------------------------------------------------------------------

Kappa4Record = Union[SymplecticRecord4, LefschetzRecord, PlurigeneraSample]


def _build(record: Record, fn, *args):
    """Run a constructor, turning its precondition failures into located parse errors"""
    try:
        return fn(*args)
    except ParseError:
        raise
    except KodimError as exn:
        raise ParseError(f"{record.name}: {exn}", record.offset, []) from None


@_in_bytes
def parse_kappa4_record(txt: str) -> Kappa4Record:
    record = _read_record(txt, ('sympl4', 'lef', 'plurigenera'))
    if record.name == 'sympl4':
        record.reject_unknown(('kw', 'k2', 'minimal'))
        return SymplecticRecord4(record.rational('kw'), record.rational('k2'), record.boolean('minimal', True))
    if record.name == 'lef':
        record.reject_unknown(('g', 'h', 'n', 'min', 'minimal'))
        minimal = record.boolean('min', record.boolean('minimal', True))
        return _build(record, LefschetzRecord, record.integer('g'), record.integer('h'),
                      record.integer('n', 0), minimal)
    samples = []
    for item in record.positional:
        pair = item.value
        if (not isinstance(pair, tuple) or len(pair) != 2
                or not all(isinstance(v, Fraction) and v.denominator == 1 for v in pair)):
            raise ParseError("plurigenera entries are (l, P) integer pairs", item.offset, ['('])
        samples.append((int(pair[0]), int(pair[1])))
    return _build(record, PlurigeneraSample, tuple(samples))


@dataclass(frozen=True)
class Geom4Request:
    name: Geometry4Name
    volume: Optional[Fraction] = None


@_in_bytes
def parse_geom4(txt: str) -> Geom4Request:
    record = _read_record(txt, ('geom4',))
    record.reject_unknown(('vol', 'volume'))
    if len(record.positional) != 1 or not isinstance(record.positional[0].value, str):
        raise ParseError("geom4 takes one geometry name", record.offset, geometry_tokens(4))
    item = record.positional[0]
    try:
        name = lookup_geometry(item.value, 4)
    except KeyError:
        raise ParseError(f"unknown geometry {item.value!r}", item.offset, geometry_tokens(4)) from None
    volume = None
    for key in ('vol', 'volume'):
        if record.has(key):
            volume = record.rational(key)
    return Geom4Request(name, volume)


@dataclass(frozen=True)
class Product6Request:
    k2: Fraction
    kw: Fraction
    w2: Fraction
    sigma: SurfaceFactor
    kappa: Optional[KodairaDim] = None


@dataclass(frozen=True)
class NegativityRequest:
    lattice: Lattice2
    omega: Tuple[Fraction, ...]
    genus: int
    area: Fraction


def _product6_payload(txt: str) -> Union[Product6Request, NegativityRequest]:
    record = _read_record(txt, ('product6', 'negativity'))
    if record.name == 'negativity':
        record.reject_unknown(('lattice', 'omega', 'g', 'area'))
        return NegativityRequest(record.lattice(record.get('lattice')), record.rationals('omega'),
                                 record.integer('g'), record.rational('area', Fraction(1)))
    record.reject_unknown(('k2', 'kw', 'w2', 'g', 'area', 'kappa'))
    sigma = _build(record, SurfaceFactor, record.integer('g'), record.rational('area', Fraction(1)))
    kappa = record.kappa('kappa') if record.has('kappa') else None
    return Product6Request(record.rational('k2'), record.rational('kw'), record.rational('w2'), sigma, kappa)


@_in_bytes
def parse_product6_record(txt: str) -> Union[Product6Request, NegativityRequest]:
    return _product6_payload(txt)


@dataclass(frozen=True)
class LatticeRequest:
    lattice: Lattice2


@dataclass(frozen=True)
class LightConeRequest:
    lattice: Lattice2
    omega: Tuple[Fraction, ...]
    x: Tuple[Fraction, ...]


@dataclass(frozen=True)
class ThomRequest:
    real: Tuple[int, ...]
    complex: Tuple[int, ...]
    chi_real: int
    chi_complex: int


@_in_bytes
def parse_lattice_record(txt: str) -> Union[LatticeRequest, LightConeRequest, ThomRequest]:
    record = _read_record(txt, ('lattice', 'lightcone', 'thom'))
    if record.name == 'lattice':
        record.reject_unknown(())
        if len(record.positional) != 1:
            raise ParseError("lattice takes one family, cp2#k or s2xs2", record.offset, ['cp2#k', 's2xs2'])
        return LatticeRequest(record.lattice(record.positional[0]))
    if record.name == 'lightcone':
        record.reject_unknown(('lattice', 'omega', 'x'))
        return LightConeRequest(record.lattice(record.get('lattice')), record.rationals('omega'),
                                record.rationals('x'))
    record.reject_unknown(('real', 'complex', 'chi_real', 'chi_complex'))
    return ThomRequest(record.integers('real'), record.integers('complex'),
                       record.integer('chi_real'), record.integer('chi_complex'))


@_in_bytes
def parse_kappa6_record(txt: str) -> Union[Product6, Product6Request]:
    """kappa6(k3=.., k2w=.., kw2=..) with the triple products given directly,
    or product6(...) to derive them from M^4 and the surface factor"""
    if txt.lstrip().lower().startswith('product6'):
        return _product6_payload(txt)
    record = _read_record(txt, ('kappa6',))
    record.reject_unknown(('k3', 'k2w', 'kw2'))
    return Product6(record.rational('k3'), record.rational('k2w'), record.rational('kw2'))
