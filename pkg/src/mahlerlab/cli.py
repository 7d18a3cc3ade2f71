"""Command-line front end: run identity checks, compute single quantities.

Two subcommands:

    mahlerlab verify [ids...] [--all] [--filter kinds] ...
    mahlerlab compute <quantity tokens> [--digits N] ...

Configuration layering, tightest first: command-line flags, then the
MAHLERLAB_CACHE environment variable (cache path only), then a flat
key=value file ./mahlerlab.cfg in the working directory, then defaults.

Report formats: text is for people (real wall times, values to at most 40
digits); json and csv are for machines and are byte-identical across
reruns with the same configuration, which requires the one lossy choice of
reporting wall_ms as 0 there (wall time is the only non-deterministic
field a check produces).  The json document carries schema version "v1".

Exit codes: 0 all requested work succeeded (verify: every check passed),
1 at least one check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mp

from . import registry
from .mahler import (
    builtin_descriptor,
    builtin_names,
    m_rk_hypergeometric,
    mahler_numeric,
    parse_descriptor,
)
from .modular import (
    NEWFORM_F,
    NEWFORM_H,
    dump_coefficient_file,
    l_value,
    load_coefficient_file,
    newform_coefficient,
)
from .registry import UnknownCheckError
from .special import catalan, ell_k, zeta_int

__all__ = ["RunConfig", "main", "cmd_verify", "cmd_compute", "JSON_SCHEMA"]

_FORMATS = ("text", "json", "csv")
_CONFIG_FILENAME = "mahlerlab.cfg"
_CACHE_FORMS = (("f", NEWFORM_F), ("h", NEWFORM_H))
_MACHINE_DIGITS = 40

JSON_SCHEMA = {
    "type": "object",
    "required": ["version", "results", "summary"],
    "properties": {
        "version": {"const": "v1"},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed"],
            "properties": {
                "total": {"type": "integer"},
                "passed": {"type": "integer"},
                "failed": {"type": "integer"},
                "exact": {"type": "integer"},
                "high-precision": {"type": "integer"},
                "statistical": {"type": "integer"},
            },
        },
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "id",
                    "lhs",
                    "rhs",
                    "deviation",
                    "tolerance",
                    "pass",
                    "wall_ms",
                    "evals",
                    "seed",
                ],
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"type": "string"},
                    "lhs": {"type": ["string", "null"]},
                    "rhs": {"type": ["string", "null"]},
                    "deviation": {"type": ["string", "null"]},
                    "tolerance": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "wall_ms": {"type": "integer"},
                    "evals": {"type": "integer"},
                    "seed": {"type": "integer"},
                    "note": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
    },
}


class UsageError(Exception):
    """Bad flags, bad config, unknown names: anything that exits 2."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved execution configuration shared by both subcommands."""

    precision: int = registry.DEFAULT_PRECISION
    seed: int = registry.DEFAULT_SEED
    qmc_samples: int = registry.DEFAULT_SAMPLES
    filter: Tuple[str, ...] = ()
    output_format: str = "text"
    coefficient_cache_path: Optional[str] = None

    def validate(self) -> "RunConfig":
        if not 32 <= self.precision <= 4096:
            raise UsageError(
                f"precision must lie in [32, 4096], got {self.precision}"
            )
        if not 0 <= self.seed < 1 << 64:
            raise UsageError(f"seed must be a 64-bit integer, got {self.seed}")
        if self.qmc_samples < 1 << 10 or self.qmc_samples & (self.qmc_samples - 1):
            raise UsageError(
                f"samples must be a power of two >= 1024, got {self.qmc_samples}"
            )
        bad = set(self.filter) - set(registry.KINDS)
        if bad:
            raise UsageError(
                f"unknown filter tags {sorted(bad)}; valid: {', '.join(registry.KINDS)}"
            )
        if self.output_format not in _FORMATS:
            raise UsageError(
                f"unknown format {self.output_format!r}; valid: {', '.join(_FORMATS)}"
            )
        return self


# ---------------------------------------------------------------------------
# Configuration layering


def _read_config_file(path: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out

def _parse_int(text: str, what: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None


def _parse_filter(text: str) -> Tuple[str, ...]:
    return tuple(tag.strip() for tag in text.split(",") if tag.strip())


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags > MAHLERLAB_CACHE (cache only) > ./mahlerlab.cfg > defaults."""
    file_map: Dict[str, str] = {}
    if os.path.isfile(_CONFIG_FILENAME):
        file_map = _read_config_file(_CONFIG_FILENAME)
    known = {"precision", "seed", "samples", "filter", "format", "cache", "digits"}
    unknown = set(file_map) - known
    if unknown:
        raise UsageError(
            f"{_CONFIG_FILENAME}: unknown keys {sorted(unknown)}; valid: "
            f"{', '.join(sorted(known))}"
        )

    config = RunConfig()
    if "precision" in file_map:
        config = replace(
            config, precision=_parse_int(file_map["precision"], "precision")
        )
    if "seed" in file_map:
        config = replace(config, seed=_parse_int(file_map["seed"], "seed"))
    if "samples" in file_map:
        config = replace(
            config, qmc_samples=_parse_int(file_map["samples"], "samples")
        )
    if "filter" in file_map:
        config = replace(config, filter=_parse_filter(file_map["filter"]))
    if "format" in file_map:
        config = replace(config, output_format=file_map["format"])
    if "cache" in file_map:
        config = replace(config, coefficient_cache_path=file_map["cache"])

    env_cache = os.environ.get("MAHLERLAB_CACHE")
    if env_cache:
        config = replace(config, coefficient_cache_path=env_cache)

    if args.precision is not None:
        config = replace(config, precision=args.precision)
    if args.seed is not None:
        config = replace(config, seed=_parse_int(args.seed, "seed"))
    if args.samples is not None:
        config = replace(config, qmc_samples=args.samples)
    if args.filter is not None:
        config = replace(config, filter=_parse_filter(args.filter))
    if args.format is not None:
        config = replace(config, output_format=args.format)
    if args.cache is not None:
        config = replace(config, coefficient_cache_path=args.cache)
    return config.validate()


def _resolve_digits(args: argparse.Namespace) -> int:
    if getattr(args, "digits", None) is not None:
        digits = args.digits
    else:
        digits = 30
        if os.path.isfile(_CONFIG_FILENAME):
            file_map = _read_config_file(_CONFIG_FILENAME)
            if "digits" in file_map:
                digits = _parse_int(file_map["digits"], "digits")
    if not 1 <= digits <= 1000:
        raise UsageError(f"digits must lie in [1, 1000], got {digits}")
    return digits


# ---------------------------------------------------------------------------
# Coefficient cache


def _cache_file(directory: str, name: str) -> str:
    return os.path.join(directory, f"{name}.coeffs")


def _load_cache(config: RunConfig) -> None:
    directory = config.coefficient_cache_path
    if not directory:
        return
    for name, spec in _CACHE_FORMS:
        path = _cache_file(directory, name)
        if os.path.isfile(path):
            try:
                load_coefficient_file(spec, path)
            except (ValueError, OSError) as exc:
                raise UsageError(f"cache file {path} rejected: {exc}") from None


def _save_cache(config: RunConfig) -> None:
    directory = config.coefficient_cache_path
    if not directory:
        return
    os.makedirs(directory, exist_ok=True)
    for name, spec in _CACHE_FORMS:
        n_max = max(128, spec.cached_order())
        dump_coefficient_file(spec, _cache_file(directory, name), n_max)


# ---------------------------------------------------------------------------
# Value formatting


def _is_rational(value) -> bool:
    return isinstance(value, (int, Fraction))


def _machine_value(value) -> Optional[str]:
    """Deterministic decimal rendering for json/csv fields."""
    if value is None:
        return None
    if _is_rational(value):
        frac = Fraction(value)
        if frac.denominator == 1:
            return str(frac.numerator)
        text = f"{frac.numerator}/{frac.denominator}"
        if len(text) <= 64:
            return text
        return mp.nstr(_frac_to_mpf(frac), _MACHINE_DIGITS)
    return mp.nstr(value, _MACHINE_DIGITS)


def _frac_to_mpf(frac: Fraction):
    with mp.workprec(4 * _MACHINE_DIGITS):
        return mp.mpf(frac.numerator) / mp.mpf(frac.denominator)


def _text_value(value, digits: int) -> str:
    if value is None:
        return "-"
    if _is_rational(value):
        frac = Fraction(value)
        if frac.denominator == 1:
            return str(frac.numerator)
        if len(f"{frac.numerator}/{frac.denominator}") <= 32:
            return f"{frac.numerator}/{frac.denominator}"
        return mp.nstr(_frac_to_mpf(frac), digits)
    return mp.nstr(value, digits)


def _sci_value(value) -> str:
    if value is None:
        return "-"
    if _is_rational(value):
        if value == 0:
            return "0"
        return mp.nstr(_frac_to_mpf(Fraction(value)), 3)
    return mp.nstr(value, 3)


def _fixed_decimal(value, places: int) -> str:
    """value to a fixed number of decimal places, half-even, exact carry."""
    with mp.workprec(max(mp.prec, int(3.33 * places) + 64)):
        scaled = mp.nint(mp.mpf(value) * mp.mpf(10) ** places)
        units = int(scaled)
    sign = "-" if units < 0 else ""
    body = str(abs(units)).rjust(places + 1, "0")
    if places == 0:
        return sign + body
    return f"{sign}{body[:-places]}.{body[-places:]}"


# ---------------------------------------------------------------------------
# verify


def _result_record(result: registry.CheckResult) -> Dict[str, object]:
    return {
        "id": result.id,
        "kind": result.kind,
        "lhs": _machine_value(result.lhs),
        "rhs": _machine_value(result.rhs),
        "deviation": _machine_value(result.deviation),
        "tolerance": _machine_value(result.tolerance),
        "pass": result.passed,
        "wall_ms": 0,
        "evals": result.evaluations,
        "seed": result.seed_used,
        "note": result.note,
    }


def _emit_text(results: Sequence[registry.CheckResult], config: RunConfig, out) -> None:
    digits = min(int(0.3010 * config.precision) + 1, 40)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = (
            f"{status} {r.id} [{r.kind}] "
            f"lhs={_text_value(r.lhs, digits)} rhs={_text_value(r.rhs, digits)} "
            f"deviation={_sci_value(r.deviation)} tolerance={_sci_value(r.tolerance)} "
            f"({r.wall_ms} ms, {r.evaluations} evals)"
        )
        if r.note:
            line += f" note: {r.note}"
        print(line, file=out)
    counts = registry.summarize(results)
    print(
        f"{counts['total']} checks: {counts['passed']} passed, "
        f"{counts['failed']} failed "
        f"(exact {counts['exact']}, high-precision {counts['high-precision']}, "
        f"statistical {counts['statistical']})",
        file=out,
    )


def _emit_json(results: Sequence[registry.CheckResult], out) -> None:
    doc = {
        "version": "v1",
        "results": [_result_record(r) for r in results],
        "summary": registry.summarize(results),
    }
    json.dump(doc, out, indent=2, sort_keys=True)
    out.write("\n")


def _emit_csv(results: Sequence[registry.CheckResult], out) -> None:
    fields = [
        "id",
        "kind",
        "lhs",
        "rhs",
        "deviation",
        "tolerance",
        "pass",
        "wall_ms",
        "evals",
        "seed",
        "note",
    ]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in results:
        record = _result_record(r)
        record["pass"] = "true" if record["pass"] else "false"
        writer.writerow(record)
    out.write(buffer.getvalue())


def cmd_verify(args: argparse.Namespace, out=None) -> int:
    out = sys.stdout if out is None else out
    config = resolve_config(args)
    if not args.ids and not args.all:
        raise UsageError("verify needs check ids or --all (see --help)")
    _load_cache(config)
    if args.ids:
        try:
            for check_id in args.ids:
                registry.get_check(check_id)
        except UnknownCheckError as exc:
            raise UsageError(str(exc)) from None
        results = [
            registry.run_check(
                check_id,
                config.precision,
                seed=config.seed,
                samples=config.qmc_samples,
            )
            for check_id in args.ids
        ]
    else:
        tags = config.filter or None
        results = registry.run_all(
            tags,
            config.precision,
            seed=config.seed,
            samples=config.qmc_samples,
        )
    if config.output_format == "json":
        _emit_json(results, out)
    elif config.output_format == "csv":
        _emit_csv(results, out)
    else:
        _emit_text(results, config, out)
    _save_cache(config)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# compute


def _compute_work(config: RunConfig, digits: int) -> int:
    return max(config.precision, int(3.33 * digits) + 48)


def _quantity_l(tokens: Sequence[str], work: int):
    if len(tokens) != 2:
        raise UsageError("usage: compute L <f|h> <s>")
    forms = {"f": NEWFORM_F, "h": NEWFORM_H}
    if tokens[0] not in forms:
        raise UsageError(f"unknown form {tokens[0]!r}; valid: f, h")
    s = _parse_int(tokens[1], "s")
    spec = forms[tokens[0]]
    if not 2 <= s <= spec.weight:
        raise UsageError(f"s must lie in [2, {spec.weight}] for {tokens[0]}")
    value = l_value(spec, s, precision=work)
    return value, f"mellin-split L({tokens[0]},{s})", mp.mpf(2) ** (8 - work)


def _quantity_zeta(tokens: Sequence[str], work: int):
    if len(tokens) != 1:
        raise UsageError("usage: compute zeta <s>")
    s = _parse_int(tokens[0], "s")
    if s < 2:
        raise UsageError(f"zeta needs integer s >= 2, got {s}")
    return zeta_int(s, work), "euler-maclaurin", mp.mpf(2) ** (8 - work)


def _quantity_catalan(tokens: Sequence[str], work: int):
    if tokens:
        raise UsageError("usage: compute catalan")
    return catalan(work), "levin-accelerated series", mp.mpf(2) ** (8 - work)


def _quantity_k(tokens: Sequence[str], work: int):
    if len(tokens) != 1:
        raise UsageError("usage: compute K <k>")
    with mp.workprec(work):
        try:
            k = mp.mpf(tokens[0])
        except (ValueError, TypeError):
            raise UsageError(f"modulus must be a number, got {tokens[0]!r}") from None
        if not 0 <= k < 1:
            raise UsageError(f"modulus must lie in [0, 1), got {tokens[0]}")
        value = ell_k(k, precision=work)
    return value, "agm", mp.mpf(2) ** (8 - work)


def _parse_k_token(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise UsageError(f"k must be a number, got {token!r}") from None


def _quantity_mrk(tokens: Sequence[str], work: int, digits: int):
    if len(tokens) != 1:
        raise UsageError("usage: compute mRk <k>")
    k = _parse_k_token(tokens[0])
    with mp.workprec(work + 16):
        target = mp.mpf(10) ** (-(digits + 4))
        try:
            value = m_rk_hypergeometric(k, target_abs_error=target, precision=work)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return value, "hypergeometric-6f5", target


def _quantity_mahler(tokens: Sequence[str], config: RunConfig):
    if len(tokens) != 1:
        raise UsageError("usage: compute mahler <descriptor>")
    name = tokens[0]
    try:
        if os.path.isfile(name):
            with open(name) as fh:
                descriptor = parse_descriptor(fh.read(), name=os.path.basename(name))
        else:
            descriptor = builtin_descriptor(name)
    except (ValueError, KeyError) as exc:
        raise UsageError(
            f"bad descriptor {name!r} ({exc}); built-ins: {', '.join(builtin_names())}"
        ) from None
    result = mahler_numeric(
        descriptor,
        samples=config.qmc_samples,
        seed=[config.seed, 0],
    )
    return mp.mpf(result.value), "lattice-qmc", mp.mpf(result.error_estimate)


def _quantity_ap(tokens: Sequence[str], work: int):
    if len(tokens) != 1:
        raise UsageError("usage: compute ap <n>")
    n = _parse_int(tokens[0], "n")
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    return newform_coefficient(NEWFORM_F, n), "q-expansion", 0


def cmd_compute(args: argparse.Namespace, out=None) -> int:
    out = sys.stdout if out is None else out
    config = resolve_config(args)
    digits = _resolve_digits(args)
    work = _compute_work(config, digits)
    _load_cache(config)
    tokens = list(args.quantity)
    head, rest = tokens[0], tokens[1:]
    if head == "L":
        value, route, err = _quantity_l(rest, work)
    elif head == "zeta":
        value, route, err = _quantity_zeta(rest, work)
    elif head == "catalan":
        value, route, err = _quantity_catalan(rest, work)
    elif head == "K":
        value, route, err = _quantity_k(rest, work)
    elif head == "mRk":
        value, route, err = _quantity_mrk(rest, work, digits)
    elif head == "mahler":
        value, route, err = _quantity_mahler(rest, config)
    elif head == "ap":
        value, route, err = _quantity_ap(rest, work)
    else:
        raise UsageError(
            f"unknown quantity {head!r}; valid: L, zeta, catalan, K, mahler, mRk, ap"
        )

    if isinstance(value, int):
        rendered = str(value)
    else:
        with mp.workprec(work + 16):
            rendered = _fixed_decimal(value, digits)
    error_text = "0" if err == 0 else mp.nstr(mp.mpf(err), 3)
    if config.output_format == "json":
        doc = {
            "version": "v1",
            "quantity": " ".join(tokens),
            "value": rendered,
            "route": route,
            "error_estimate": error_text,
        }
        json.dump(doc, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        print(rendered, file=out)
        print(f"route: {route}", file=out)
        print(f"error-estimate: {error_text}", file=out)
    _save_cache(config)
    return 0


# ---------------------------------------------------------------------------
# Entry point


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--precision", type=int, default=None, metavar="BITS")
    shared.add_argument("--seed", default=None, metavar="INT")
    shared.add_argument("--samples", type=int, default=None, metavar="N")
    shared.add_argument("--filter", default=None, metavar="KINDS")
    shared.add_argument("--format", default=None, choices=_FORMATS)
    shared.add_argument("--cache", default=None, metavar="DIR")
    shared.add_argument("--digits", type=int, default=None, metavar="N")

    parser = argparse.ArgumentParser(
        prog="mahlerlab",
        description="Verify Mahler-measure identities and compute the "
        "quantities behind them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser(
        "verify",
        parents=[shared],
        help="run identity checks by id or kind",
    )
    verify.add_argument("ids", nargs="*", metavar="CHECK-ID")
    verify.add_argument("--all", action="store_true", help="run every check")

    compute = sub.add_parser(
        "compute",
        parents=[shared],
        help="evaluate one quantity (L f 4 | zeta 3 | catalan | K <k> | "
        "mahler <descriptor> | mRk <k> | ap <n>)",
    )
    compute.add_argument("quantity", nargs="+", metavar="TOKEN")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_compute(args)
    except UsageError as exc:
        print(f"mahlerlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
