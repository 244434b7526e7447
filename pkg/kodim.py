#!/usr/bin/env python3
"""
kodim.py - Command-line front end for the kodim library

Usage:
    python3 kodim.py kappa3 "Sol # H3(vol=2)"
    python3 kodim.py kappa4 "lef(g=2, h=1, n=1)"
    python3 kodim.py kappa6 "product6(k2=9, kw=-3, w2=1, g=2, area=1)"
    python3 kodim.py gromov --dim 4 "geom4(H2xH2, vol=12)"
    python3 kodim.py table --dim 4 --format json
    python3 kodim.py check-domination --file claim.json
    python3 kodim.py entropy '{"matrices": [[[1]], [[2,1],[1,1]], [[1]]]}'
    python3 kodim.py product6 "negativity(lattice=cp2#8, omega=(3,1,1,1,1,1,1,1,1), g=2)"
    python3 kodim.py lattice "lightcone(lattice=cp2#1, omega=(2,1), x=(1,2))"
    python3 kodim.py shape "S3 # S2xE"
    python3 kodim.py validate "JSJ[E3, Nil]"
    python3 kodim.py selfcheck --scale 0.1

Exit codes: 0 success, 1 validation or precondition error, 2 parse error.
JSON output is one object {verb, input, result, warnings}. In text mode
errors, and the report of a command exiting 1, go to stderr.

Configuration: kodim_config.json next to this file (or $KODIM_CONFIG);
$KODIM_FORMAT sets the default output format, --format overrides it.
"""

import argparse
import contextlib
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from fourfold import (
    DEFAULT_KAPPA_H_TOLERANCE, LefschetzRecord, SymplecticRecord4, geometry4_query,
    gromov_norm_4_geometric, kappa_h_classify, kappa_l, kappa_s_4,
)
from kodaira_values import as_fraction
from kodim_errors import KodimError, ParseError, ValidationError, byte_offset
from lattice import (
    Class2, Product6, additivity_check, canonical_class, li_ruan_kappa6, light_cone_check, pair,
    product6_intersections, rational_ruled_negativity_check, square, thom_sullivan_check,
)
from manifold_parser import (
    LatticeRequest, LightConeRequest, NegativityRequest, Product6Request, parse_geom4,
    parse_kappa4_record, parse_kappa6_record, parse_lattice_record, parse_manifold3,
    parse_product6_record,
)
from maps import (
    DEFAULT_ENTROPY_TOLERANCE, HomologyEndo, InvariantProfile, MapCategory, MapClaim,
    degree_one_equivalence_check, domination_obstructions, entropy_from_radii, profile_from_manifold3,
    spectral_radii,
)
from random_models import run_suites
from taxonomy import geometry3_record, list_geometries, lookup_geometry
from threefold import classify_shape, gromov_norm_3, kappa_t, validate

logger = logging.getLogger(__name__)

VERBS = ('kappa3', 'kappa4', 'kappa6', 'gromov', 'table', 'check-domination', 'entropy',
         'product6', 'shape', 'validate', 'lattice', 'selfcheck')

DEFAULT_CONFIG: Dict[str, Any] = {
    'kappa_h_tolerance': float(DEFAULT_KAPPA_H_TOLERANCE),
    'entropy_tolerance': DEFAULT_ENTROPY_TOLERANCE,
    'default_format': 'text',
    'log_file': None,
    'entropy_workers': 4,
}

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from JSON file, falling back to built-in defaults"""
    config_file = Path(path or os.environ.get('KODIM_CONFIG') or Path(__file__).with_name('kodim_config.json'))
    config = dict(DEFAULT_CONFIG)
    if config_file.exists():
        with open(config_file, 'r') as f:
            config.update(json.load(f))
        logger.debug(f"loaded configuration from {config_file}")
    return config


class _UsageError(ParseError):
    """Bad command line"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _WarningCollector(logging.Handler):
    """Keeps the WARNING records of one command for the JSON envelope"""

    def __init__(self):
        super().__init__(logging.WARNING)
        self.messages: List[str] = []

    def emit(self, record: logging.LogRecord):
        self.messages.append(record.getMessage())


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='kodim', description="Kodaira dimensions, Gromov norms and geometry tables")
    parser.add_argument("verb", choices=VERBS, help="Command to run")
    parser.add_argument("input", nargs="?", default=None, help="Description, record or JSON document")
    parser.add_argument("--file", help="Read the input from a file")
    parser.add_argument("--format", choices=("text", "json"), default=None, help="Output format")
    parser.add_argument("--pretty", action="store_true", help="Indent JSON output")
    parser.add_argument("--tolerance", type=str, default=None, help="Fit tolerance (kappa_h) or entropy tolerance")
    parser.add_argument("--dim", type=int, choices=(3, 4), default=None, help="Dimension for gromov/table")
    parser.add_argument("--name", default=None, help="Single geometry for table")
    parser.add_argument("--seed", type=int, default=0, help="Seed for selfcheck")
    parser.add_argument("--scale", type=float, default=1.0, help="Case-count multiplier for selfcheck")
    parser.add_argument("--config", default=None, help="Configuration file")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose logging")
    parser.add_argument("--debug", action="store_true", help="Debug logging")
    return parser


def _configure_logging(args: argparse.Namespace, config: Dict[str, Any]):
    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
    root_logger.addHandler(console_handler)
    if config.get('log_file'):
        file_handler = logging.FileHandler(config['log_file'])
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root_logger.addHandler(file_handler)
    if args.debug:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    else:
        level = logging.WARNING
    root_logger.setLevel(logging.DEBUG if config.get('log_file') else level)
    console_handler.setLevel(level)


# ---------------------------------------------------------------------------
# Commands: each returns (JSON result, text rendering)
# ---------------------------------------------------------------------------

Outcome = Tuple[Any, str]


class Command:
    """One parsed invocation"""

    def __init__(self, args: argparse.Namespace, config: Dict[str, Any]):
        self.args = args
        self.config = config
        self.verb = args.verb
        self.text = self._read_input()
        self.exit_code = 0
        self.progress = False

    def _read_input(self) -> Optional[str]:
        if self.args.file:
            return Path(self.args.file).read_text()
        return self.args.input

    def require_input(self) -> str:
        if self.text is None or not self.text.strip():
            raise ParseError(f"{self.verb}: input required", 0, ['input'])
        return self.text

    def tolerance(self, key: str) -> Fraction:
        if self.args.tolerance is not None:
            try:
                value = as_fraction(self.args.tolerance)
            except (ValueError, ZeroDivisionError) as exn:
                raise ParseError(f"malformed tolerance {self.args.tolerance!r}", 0, ['rational']) from exn
        else:
            value = as_fraction(self.config[key])
        if value <= 0:
            raise KodimError("tolerance must be positive")
        return value

    def json_input(self) -> Any:
        text = self.require_input()
        try:
            return json.loads(text)
        except json.JSONDecodeError as exn:
            raise ParseError(f"invalid JSON: {exn.msg}", byte_offset(text, exn.pos), ['JSON']) from exn


def _valid_manifold(text: str):
    m = parse_manifold3(text)
    violations = validate(m)
    if violations:
        raise ValidationError(
            "; ".join(f"block {v.block_index}: {v.message}" for v in violations), violations)
    return m


def do_kappa3(c: Command) -> Outcome:
    m = _valid_manifold(c.require_input())
    kappa = kappa_t(m)
    return {'kappa_t': kappa.to_json(), 'manifold': m.to_json()}, f"kappa_t = {kappa}"


def do_kappa4(c: Command) -> Outcome:
    record = parse_kappa4_record(c.require_input())
    if isinstance(record, SymplecticRecord4):
        kappa = kappa_s_4(record)
        return {'kind': 'symplectic', 'kappa_s': kappa.to_json(), 'record': record.to_json()}, f"kappa_s = {kappa}"
    if isinstance(record, LefschetzRecord):
        kappa = kappa_l(record)
        return {'kind': 'lefschetz', 'kappa_l': kappa.to_json(), 'record': record.to_json()}, f"kappa_l = {kappa}"
    result = kappa_h_classify(record, c.tolerance('kappa_h_tolerance'))
    return {'kind': 'plurigenera', 'kappa_h': result.to_json(), 'record': record.to_json()}, f"kappa_h = {result}"


def _products(request: Product6Request) -> Product6:
    return product6_intersections(request.k2, request.kw, request.w2, request.sigma)


def do_kappa6(c: Command) -> Outcome:
    parsed = parse_kappa6_record(c.require_input())
    products = _products(parsed) if isinstance(parsed, Product6Request) else parsed
    kappa = li_ruan_kappa6(*products.as_tuple())
    return {'kappa_s': kappa.to_json(), 'products': products.to_json()}, f"kappa_s = {kappa}"


def do_gromov(c: Command) -> Outcome:
    text = c.require_input()
    if (c.args.dim or 3) == 3:
        norm = gromov_norm_3(_valid_manifold(text))
    else:
        request = parse_geom4(text)
        norm = gromov_norm_4_geometric(request.name, request.volume)
    result = norm.to_json()
    approx = norm.approx() if hasattr(norm, 'approx') else None
    if approx is not None:
        result['approx'] = approx
    return result, norm.render()


def do_table(c: Command) -> Outcome:
    dimension = c.args.dim or 4
    if c.args.name:
        try:
            name = lookup_geometry(c.args.name, dimension)
        except KeyError:
            raise KodimError(f"unknown {dimension}-dimensional geometry {c.args.name!r}") from None
        if dimension == 3:
            record = geometry3_record(name)
            return record.to_json(), f"{record.name.value} ({record.display}): category {record.category}, " \
                                     f"pi_1 {record.pi1_class.name}"
        report = geometry4_query(name)
        return report.to_json(), report.render()
    records = list_geometries(dimension)
    lines = [f"{r.name.value:8} {str(r.category):>4}  {r.display}" for r in records]
    return [r.to_json() for r in records], "\n".join(lines)


def _profile(data: Dict[str, Any]) -> InvariantProfile:
    if 'manifold3' not in data:
        return InvariantProfile.from_json(data)
    derived = profile_from_manifold3(_valid_manifold(data['manifold3'])).to_json()
    derived.update({k: v for k, v in data.items() if k != 'manifold3'})
    return InvariantProfile.from_json(derived)


def do_check_domination(c: Command) -> Outcome:
    data = c.json_input()
    try:
        claim = MapClaim(_profile(data['source']), _profile(data['target']), int(data.get('degree', 1)),
                         MapCategory(data.get('category', MapCategory.Continuous.value)))
    except (KeyError, TypeError, ValueError) as exn:
        raise ValidationError(f"malformed map claim: {exn}") from exn
    violations = domination_obstructions(claim)
    lines = ["consistent: no obstruction violated"] if not violations else [
        f"{v.obstruction.value}: {v.message}" for v in violations]
    return {'consistent': not violations, 'violations': [v.to_json() for v in violations],
            'claim': claim.to_json()}, "\n".join(lines)


def do_entropy(c: Command) -> Outcome:
    data = c.json_input()
    tolerance = float(c.tolerance('entropy_tolerance'))
    workers = int(c.config.get('entropy_workers', 1))
    try:
        endo = HomologyEndo.from_json(data)
    except (KeyError, TypeError, ValueError) as exn:
        raise ValidationError(f"malformed matrices: {exn}") from exn
    if isinstance(data, dict) and 'g_star' in data:
        verdict = degree_one_equivalence_check(endo, data['g_star'], data.get('h_star', []), tolerance, workers)
        text = f"S(f1) = {verdict.entropy_f1:.12g}, S(f2) = {verdict.entropy_f2:.12g}: " \
               f"{'equal' if verdict.passed else 'different'}"
        return verdict.to_json(), text
    radii = spectral_radii(endo, tolerance, workers)
    entropy = entropy_from_radii(radii)
    return {'entropy': entropy, 'spectral_radii': radii}, f"entropy = {entropy:.12g}"


def do_product6(c: Command) -> Outcome:
    parsed = parse_product6_record(c.require_input())
    if isinstance(parsed, NegativityRequest):
        verdict = rational_ruled_negativity_check(parsed.lattice, parsed.omega, parsed.genus, parsed.area)
        text = (f"K^2 = {verdict.k_squared}, K.w = {verdict.k_dot_omega}, w^2 = {verdict.omega_squared}; "
                f"K^2.w = {verdict.products.K2w}, K.w^2 = {verdict.products.Kw2}: "
                f"{'pass' if verdict.passed else 'FAIL'}")
        return verdict.to_json(), text
    if parsed.kappa is not None:
        verdict = additivity_check(parsed.k2, parsed.kw, parsed.w2, parsed.kappa, parsed.sigma)
        text = (f"kappa_s(M x Sigma_{parsed.sigma.genus}) = {verdict.computed}, "
                f"expected {verdict.expected}: {'pass' if verdict.passed else 'FAIL'}")
        return verdict.to_json(), text
    products = _products(parsed)
    return products.to_json(), f"K^3 = {products.K3}, K^2.w = {products.K2w}, K.w^2 = {products.Kw2}"


def do_shape(c: Command) -> Outcome:
    report = classify_shape(_valid_manifold(c.require_input()))
    return report.to_json(), report.render()


def do_validate(c: Command) -> Outcome:
    m = parse_manifold3(c.require_input())
    violations = validate(m)
    if violations:
        c.exit_code = 1
        text = "\n".join(f"block {v.block_index}: {v.message}" for v in violations)
    else:
        text = "ok"
    return {'ok': not violations, 'violations': [v.to_json() for v in violations]}, text


def do_lattice(c: Command) -> Outcome:
    request = parse_lattice_record(c.require_input())
    if isinstance(request, LatticeRequest):
        l = request.lattice
        K = canonical_class(l)
        k2 = square(l, K)
        return ({'lattice': l.to_json(), 'canonical_class': K.to_json(), 'k_squared': str(k2)},
                f"{l.token()}: K = {K.render()}, K^2 = {k2}")
    if isinstance(request, LightConeRequest):
        l = request.lattice
        omega, x = Class2(request.omega), Class2(request.x)
        verdict = light_cone_check(l, omega, x)
        result = {'verdict': verdict.value, 'x_squared': str(square(l, x)), 'x_dot_omega': str(pair(l, x, omega))}
        return result, verdict.value
    report = thom_sullivan_check(request.real, request.complex, request.chi_real, request.chi_complex)
    lines = ["ok"] if report.ok else [v.message for v in report.violations]
    lines.extend(f"note: {n}" for n in report.notes)
    return report.to_json(), "\n".join(lines)


def do_selfcheck(c: Command) -> Outcome:
    results = run_suites(c.args.seed, c.args.scale, progress=c.progress)
    if not all(r.passed for r in results):
        c.exit_code = 1
    lines = [f"{r.name:28} {r.cases:6} cases  {'ok' if r.passed else f'{r.failures} FAILED'}" for r in results]
    return [r.to_json() for r in results], "\n".join(lines)


HANDLERS: Dict[str, Callable[[Command], Outcome]] = {
    'kappa3': do_kappa3,
    'kappa4': do_kappa4,
    'kappa6': do_kappa6,
    'gromov': do_gromov,
    'table': do_table,
    'check-domination': do_check_domination,
    'entropy': do_entropy,
    'product6': do_product6,
    'shape': do_shape,
    'validate': do_validate,
    'lattice': do_lattice,
    'selfcheck': do_selfcheck,
}


def _error_payload(e: Exception) -> Dict[str, Any]:
    payload: Dict[str, Any] = {'status': 'error', 'error': str(e), 'type': type(e).__name__}
    if isinstance(e, ParseError):
        payload['offset'] = e.offset
        payload['expected'] = sorted(e.expected)
    if isinstance(e, ValidationError) and e.violations:
        payload['violations'] = [v.to_json() if hasattr(v, 'to_json') else str(v) for v in e.violations]
    return payload


def _output_format(args: Optional[argparse.Namespace], config: Dict[str, Any]) -> str:
    if args is not None and args.format:
        return args.format
    env_format = os.environ.get('KODIM_FORMAT')
    if env_format in ('text', 'json'):
        return env_format
    return config.get('default_format', 'text')


def run(argv: List[str], configure_logging: bool = False) -> Tuple[int, str, str]:
    """Run one command; returns (exit code, stdout text, stderr text)"""
    parser = build_parser()
    config = dict(DEFAULT_CONFIG)
    args = None
    collector = _WarningCollector()
    root_logger = logging.getLogger()
    root_logger.addHandler(collector)
    help_text = io.StringIO()
    try:
        try:
            with contextlib.redirect_stdout(help_text):
                args = parser.parse_args(argv)
        except SystemExit as exn:
            return int(exn.code or 0), help_text.getvalue(), ""
        config = load_config(args.config)
        if configure_logging:
            _configure_logging(args, config)
        output_format = _output_format(args, config)
        command = Command(args, config)
        command.progress = configure_logging and sys.stderr.isatty()
        result, text = HANDLERS[args.verb](command)
        if output_format == 'json':
            envelope = {'verb': args.verb, 'input': command.text, 'result': result,
                        'warnings': list(collector.messages)}
            stdout = json.dumps(envelope, sort_keys=True, indent=2 if args.pretty else None)
        elif command.exit_code:
            return command.exit_code, "", text + "\n"
        else:
            stdout = text
        return command.exit_code, stdout + "\n", ""
    except Exception as e:
        code = e.exit_code if isinstance(e, KodimError) else 1
        if isinstance(e, (KodimError, OSError)):
            logger.debug(f"{type(e).__name__}: {e}")
        else:
            logger.error(f"Unexpected error: {e}")
        if _output_format(args, config) == 'json':
            return code, "", json.dumps(_error_payload(e), sort_keys=True, indent=2) + "\n"
        return code, "", f"error: {e}\n"
    finally:
        root_logger.removeHandler(collector)


def main():
    code, stdout, stderr = run(sys.argv[1:], configure_logging=True)
    if stdout:
        sys.stdout.write(stdout)
    if stderr:
        sys.stderr.write(stderr)
    sys.exit(code)


if __name__ == "__main__":
    main()
