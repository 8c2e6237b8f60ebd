"""Command-line front end.

Subcommands::

    sqwalk evolve  --graph FILE --steps N --initial SITE:DIR --gamma G --out CSV
    sqwalk green   --graph FILE --entry NAME --exit NAME --mode trans|refl --out JSON
    sqwalk hitting --graph FILE --entry NAME --exit NAME --nmax N --out CSV
    sqwalk paths   --graph FILE --descriptor JSON --mode partial|exact --nmax N --out JSON
    sqwalk verify

Bond states are given either as a mark name from the graph spec or as
``SITE:DIR`` with site and direction names (or integer ids).  Every input
is validated before anything is computed, and output files are written
in one piece, so a failed run never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import exact as ex
from . import specfile
from .errors import DescriptorError, SQWError
from .evolution import WalkState, trajectory
from .greenfn import GreenRequest, green_function
from .operators import (
    EXACT,
    PARTIAL,
    CoinSymbol,
    MultivariateSeries,
    PathDescriptor,
    cumulative,
    default_symbols,
    numeric_values,
    path_filter,
    step_coefficients,
    symbolic_series,
)
from .operators.series import MAX_ORDER
from .topology import BondState, GraphTopology

SCHEMA_VERSION = 1


class UsageError(SQWError):
    """Bad command-line input that argparse cannot catch."""


@dataclass
class RunConfig:
    command: str
    exact: bool
    tol: float | None
    seed: int
    out: str | None
    args: argparse.Namespace


# --- helpers ------------------------------------------------------------------


def _resolve_state(g: GraphTopology, text: str) -> BondState:
    if text in g.marks:
        return g.mark(text)
    if ":" in text:
        site, _, direction = text.rpartition(":")
        return g.state(site, direction)
    raise UsageError(f"{text!r} is neither a mark of the graph nor SITE:DIR")


def _load(path: str):
    return specfile.load(path)


def _emit(text: str, out: str | None):
    """Write ``text`` atomically to ``out`` (stdout when None or '-')."""
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent if str(target.parent) else ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def _parts(c) -> tuple:
    if ex.is_exact(c):
        return ex.parts(c)
    c = complex(c)
    return c.real, c.imag


def _json_num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return float(x)


def _state_doc(g: GraphTopology, s: BondState) -> dict:
    return {"site": g.names[s.site], "dir": g.labels[s.site][s.direction - 1]}


# --- subcommands --------------------------------------------------------------


def cmd_evolve(cfg: RunConfig) -> int:
    a = cfg.args
    if cfg.exact:
        raise UsageError("evolve works in floating point only; drop --exact")
    if a.steps < 0:
        raise UsageError("--steps must be non-negative")
    g, coins = _load(a.graph)
    start = _resolve_state(g, a.initial)
    rows = []
    for psi in trajectory(WalkState.basis(start), a.steps, g, coins):
        for s in psi.support():
            amp = psi.amplitude(s, a.gamma)
            rows.append([psi.steps, g.names[s.site], g.labels[s.site][s.direction - 1],
                         _num(amp.real), _num(amp.imag), _num(abs(amp) ** 2)])
    _emit(_csv(["step", "site", "dir", "re", "im", "prob"], rows), cfg.out)
    return 0


def _request(g: GraphTopology, a) -> GreenRequest:
    mode = getattr(a, "mode", "trans") or "trans"
    entry = _resolve_state(g, a.entry)
    exit_name = a.exit if a.exit is not None else ("refl" if mode == "refl" else "exit")
    return GreenRequest(entry, _resolve_state(g, exit_name), mode)


def cmd_green(cfg: RunConfig) -> int:
    g, coins = _load(cfg.args.graph)
    req = _request(g, cfg.args)
    rf = green_function(g, coins, req, exact=cfg.exact)
    if cfg.exact:
        num, den = rf.integer_form()
        num = [list(p) for p in num]
        den = [list(p) for p in den]
    else:
        num = [[float(c.real), float(c.imag)] for c in map(complex, rf.numerator)]
        den = [[float(c.real), float(c.imag)] for c in map(complex, rf.denominator)]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "mode": req.mode,
        "entry": _state_doc(g, req.entry),
        "exit": _state_doc(g, req.exit),
        "exact": cfg.exact,
        "numerator": num,
        "denominator": den,
    }
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    return 0


def cmd_hitting(cfg: RunConfig) -> int:
    a = cfg.args
    if a.nmax < 0:
        raise UsageError("--nmax must be non-negative")
    g, coins = _load(a.graph)
    req = _request(g, a)
    cs = step_coefficients(green_function(g, coins, req, exact=cfg.exact), a.nmax)
    probs = [ex.abs2(c) if cfg.exact else abs(c) ** 2 for c in cs]
    rows = []
    for n, (c, p, acc) in enumerate(zip(cs, probs, cumulative(probs))):
        re, im = _parts(c)
        rows.append([n, _num(re), _num(im), _num(p), _num(acc)])
    _emit(_csv(["n", "re", "im", "prob", "cumulative"], rows), cfg.out)
    return 0


def _symbol(g: GraphTopology, obj: dict, where: str) -> list[CoinSymbol]:
    """Coin symbols named by a descriptor entry.

    ``{site, in, out}`` names one entry; ``{kind, site}`` without ``in`` and
    ``out`` names every entry of that kind at the site.
    """
    if not isinstance(obj, dict) or "site" not in obj:
        raise DescriptorError(f"{where}: expected an object with a site")
    try:
        j = g.site_id(obj["site"])
    except SQWError as exc:
        raise DescriptorError(f"{where}: {exc}") from None
    if g.free[j]:
        raise DescriptorError(f"{where}: site {g.names[j]} is free and has no coin")
    kind = obj.get("kind")
    if "in" not in obj and "out" not in obj:
        if kind not in ("r", "t"):
            raise DescriptorError(f"{where}: a whole-site entry needs kind 'r' or 't'")
        return [CoinSymbol.of(j, a, b) for a in g.own_labels(j) for b in g.own_labels(j)
                if (a == b) == (kind == "r")]
    try:
        a = g.direction_id(j, str(obj["in"]))
        b = g.direction_id(j, str(obj["out"]))
    except KeyError as exc:
        raise DescriptorError(f"{where}: missing {exc.args[0]!r}") from None
    except SQWError as exc:
        raise DescriptorError(f"{where}: {exc}") from None
    sym = CoinSymbol.of(j, a, b)
    if kind is not None and kind != sym.kind:
        raise DescriptorError(f"{where}: kind {kind!r} does not match in={obj['in']!r}, out={obj['out']!r}")
    return [sym]


def _key(g: GraphTopology, obj: dict, symbols: dict, where: str):
    """A descriptor key: a merged variable name or a single coin symbol."""
    if isinstance(obj, dict) and "symbol" in obj:
        name = obj["symbol"]
        if name not in set(symbols.values()):
            raise DescriptorError(f"{where}: unknown symbol {name!r}")
        return name
    syms = _symbol(g, obj, where)
    if len(syms) != 1:
        raise DescriptorError(f"{where}: give in and out, or a symbol name")
    return syms[0]


def parse_descriptor(g: GraphTopology, doc, mode: str | None):
    """Symbol map and list of PathDescriptors from a descriptor document."""
    if not isinstance(doc, dict):
        raise DescriptorError("descriptor must be a JSON object")
    symbols = default_symbols(g)
    merge = doc.get("merge", {})
    if not isinstance(merge, dict):
        raise DescriptorError("merge must map names to lists of coin entries")
    for name, entries in merge.items():
        if not isinstance(entries, list):
            raise DescriptorError(f"merge.{name}: expected a list")
        for k, e in enumerate(entries):
            for s in _symbol(g, e, f"merge.{name}[{k}]"):
                symbols[s] = name
    terms = doc.get("terms", [doc])
    if not isinstance(terms, list) or not terms:
        raise DescriptorError("terms must be a non-empty list")
    out = []
    for t_idx, term in enumerate(terms):
        where = f"terms[{t_idx}]"
        if not isinstance(term, dict):
            raise DescriptorError(f"{where}: expected an object")
        factors = []
        for k, f in enumerate(term.get("factors", [])):
            if not isinstance(f, dict) or "power" not in f:
                raise DescriptorError(f"{where}.factors[{k}]: needs a power")
            p = f["power"]
            if isinstance(p, bool) or not isinstance(p, int):
                raise DescriptorError(f"{where}.factors[{k}]: power must be an integer")
            factors.append((_key(g, f, symbols, f"{where}.factors[{k}]"), p))
        exempt = [_key(g, e, symbols, f"{where}.exempt[{k}]") for k, e in enumerate(term.get("exempt", []))]
        m = mode or term.get("mode") or doc.get("mode") or PARTIAL
        out.append(PathDescriptor(tuple(factors), m, tuple(exempt)))
    return symbols, out


def _read_descriptor(text: str):
    p = Path(text)
    if not text.lstrip().startswith(("{", "[")):
        try:
            text = p.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read descriptor {p}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def cmd_paths(cfg: RunConfig) -> int:
    a = cfg.args
    if not 0 <= a.nmax <= MAX_ORDER:
        raise UsageError(f"--nmax must lie in 0..{MAX_ORDER}")
    g, coins = _load(a.graph)
    desc_doc = _read_descriptor(a.descriptor)
    symbols, descriptors = parse_descriptor(g, desc_doc, a.mode)
    entry = _resolve_state(g, a.entry)
    exit_ = _resolve_state(g, a.exit if a.exit is not None else "exit")
    series = symbolic_series(g, entry, exit_, a.nmax, symbols=symbols)
    result: MultivariateSeries | None = None
    for d in descriptors:
        part = path_filter(series, d)
        result = part if result is None else result + part
    doc = result.to_doc()
    doc["schema_version"] = SCHEMA_VERSION
    doc["entry"] = _state_doc(g, entry)
    doc["exit"] = _state_doc(g, exit_)
    doc["mode"] = descriptors[0].mode if len({d.mode for d in descriptors}) == 1 else "mixed"
    doc["formatted"] = str(result)
    values = numeric_values(symbols, coins, exact=cfg.exact)
    doc["amplitudes"] = [[_json_num(x) for x in _parts(v)] for v in result.evaluate(values)]
    _emit(json.dumps(doc, indent=2) + "\n", cfg.out)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import run_all

    results = run_all(tol=cfg.tol, seed=cfg.seed)
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", cfg.out)
    return 1 if failed else 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sqwalk", description="Scattering quantum walks on finite graphs.")
    arith = p.add_mutually_exclusive_group()
    arith.add_argument("--exact", action="store_true", help="exact Gaussian-rational arithmetic")
    arith.add_argument("--float", dest="exact", action="store_false", help="floating point (default)")
    p.add_argument("--tol", type=float, default=None, help="override every numeric tolerance of verify")
    p.add_argument("--seed", type=int, default=0, help="seed for the random coin draws of verify")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--graph", required=True, help="graph-spec JSON file")
        sp.add_argument("--out", default=None, help="output file (stdout if omitted)")
        return sp

    sp = graph_cmd("evolve", "direct unitary evolution, one CSV row per occupied state and step")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--initial", default="entry", help="SITE:DIR or mark name (default: entry)")
    sp.add_argument("--gamma", type=float, default=None, help="apply the e^{i gamma n} phase")

    for name, help in (("green", "Green function as a rational function of z"),
                       ("hitting", "first-arrival amplitudes and probabilities")):
        sp = graph_cmd(name, help)
        sp.add_argument("--entry", default="entry", help="SITE:DIR or mark name (default: entry)")
        sp.add_argument("--exit", default=None, help="SITE:DIR or mark name (default: exit, or refl in refl mode)")
        sp.add_argument("--mode", choices=("trans", "refl"), default="trans")
        if name == "hitting":
            sp.add_argument("--nmax", type=int, required=True)

    sp = graph_cmd("paths", "filter the formal path sum by coin exponents")
    sp.add_argument("--descriptor", required=True, help="descriptor JSON file or inline JSON")
    sp.add_argument("--mode", choices=(PARTIAL, EXACT), default=None, help="override the descriptor's mode")
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--entry", default="entry")
    sp.add_argument("--exit", default=None)

    sp = sub.add_parser("verify", help="run the golden-vector and oracle battery")
    sp.add_argument("--out", default=None)
    # also accepted after the subcommand name
    sp.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return p


COMMANDS = {
    "evolve": cmd_evolve,
    "green": cmd_green,
    "hitting": cmd_hitting,
    "paths": cmd_paths,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.exact, args.tol, args.seed, getattr(args, "out", None), args)
    try:
        return COMMANDS[cfg.command](cfg)
    except OSError as exc:
        print(f"sqwalk {cfg.command}: error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return 2
    except SQWError as exc:
        print(f"sqwalk {cfg.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
