"""Command-line front end: `codingmaps <group> <command> [flags]`.

Reports are `key = value` lines followed by a JSON block. Exit status is 0
on success, 2 on a domain error (its name is printed) and 1 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import cod_space as cs
from . import coding_tree as ct
from . import eq_graph as eg
from . import lifted_ifs as li
from . import rational_maps as rm
from .errors import DomainError

DEFAULT_RESOLUTION = 512
DEFAULT_DEPTH = 40
DEFAULT_SEED = 0xC0D1A6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Report:
    command: str
    items: list[tuple[str, object]]

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def render(self) -> str:
        lines = [f"# codingmaps {self.command}",
                 f"# defaults: resolution = {DEFAULT_RESOLUTION}, depth = {DEFAULT_DEPTH},"
                 f" seed = {DEFAULT_SEED:#x}"]
        lines += [f"{k} = {_text(v)}" for k, v in self.items]
        lines.append(json.dumps({k: _jsonable(v) for k, v in self.items}, sort_keys=True))
        return "\n".join(lines) + "\n"


def _text(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, complex):
        return f"{v.real + 0.0:.12g}{v.imag + 0.0:+.12g}i"
    if isinstance(v, (list, tuple)):
        return ", ".join(_text(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def _positive(kind):
    def conv(text):
        v = kind(text, 0) if kind is int else kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    conv.__name__ = kind.__name__
    return conv


POS_INT = _positive(int)
POS_FLOAT = _positive(float)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file with default flags (flags win)")
    p.add_argument("--report", help="also write the text report to this path")
    p.add_argument("--threads", type=POS_INT, default=os.cpu_count() or 1,
                   help="worker threads (never changes output)")


def _add_class(p: argparse.ArgumentParser, second: bool = False) -> None:
    p.add_argument("--family", required=True, help="power:d, cheb:2 or lattes")
    p.add_argument("--class", dest="cls", required=True,
                   help="comma separated cover coordinates, e.g. 'i/2,1/2+1+i'")
    if second:
        p.add_argument("--class2", required=True, help="second class, same family")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="codingmaps", description="Coding maps, lifted tiles and equivalence graphs.")
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    tile = groups.add_parser("tile", help="lifted tiles of radial classes")
    tcmd = tile.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("render", "measure", "check-tiling", "multiplicity"):
        p = tcmd.add_parser(name)
        _add_common(p)
        _add_class(p)
        p.add_argument("--res", type=POS_INT, default=DEFAULT_RESOLUTION, help="pixels per unit")
        if name == "render":
            p.add_argument("--out", required=True, help="output PGM path")
        if name == "check-tiling":
            p.add_argument("--window", required=True, help="x0,x1 (line) or x0,y0,x1,y1 (plane)")

    code = groups.add_parser("code", help="coding trees and growth rates")
    ccmd = code.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = ccmd.add_parser("eval")
    _add_common(p)
    p.add_argument("--map", required=True, help="power:d, cheb:d, lattes or quadcantor")
    p.add_argument("--radial", default="canonical", help="canonical, or r1/r2/r3 for quadcantor")
    p.add_argument("--word", required=True, help="'12^' = (12)^inf, '1.2^' = 1 then 2^inf")
    p.add_argument("--eps", type=POS_FLOAT, default=1e-9)
    p.add_argument("--depth", type=POS_INT, default=DEFAULT_DEPTH, help="tree depth cap")
    p = ccmd.add_parser("growth")
    _add_common(p)
    _add_class(p)
    p.add_argument("--kmax", type=POS_INT, default=16)

    eq = groups.add_parser("eqgraph", help="equivalence graphs for z^2 - 3")
    ecmd = eq.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name in ("build", "decide", "mult"):
        p = ecmd.add_parser(name)
        _add_common(p)
        p.add_argument("--map", default="quadcantor")
        p.add_argument("--radial", required=True, choices=sorted(eg.RADIAL_PREFIXES))
        p.add_argument("--radial2", choices=sorted(eg.RADIAL_PREFIXES), help="defaults to --radial")
        if name == "build":
            p.add_argument("--out", help="output DOT path")
        if name == "decide":
            p.add_argument("--w", required=True)
            p.add_argument("--w2", required=True)
        if name == "mult":
            p.add_argument("--samples", type=POS_INT, default=10_000)
            p.add_argument("--depth", type=POS_INT, default=60)
            p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)

    cod = groups.add_parser("cod", help="deck actions on radial classes")
    kcmd = cod.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = kcmd.add_parser("equal")
    _add_common(p)
    _add_class(p, second=True)
    p.add_argument("--strict", action="store_true")
    p = kcmd.add_parser("canon")
    _add_common(p)
    _add_class(p)
    p.add_argument("--strict", action="store_true")

    st = groups.add_parser("selftest", help="run the acceptance criteria")
    _add_common(st)
    st.add_argument("--only", help="comma separated criterion numbers")
    st.add_argument("--verbose", action="store_true", help="print every sub-check")
    _defer_required(top)
    return top


def _defer_required(p: argparse.ArgumentParser) -> None:
    """Required flags may come from --config, so they are checked after it is read."""
    for a in p._actions:
        if isinstance(a, argparse._SubParsersAction):
            for sub in a.choices.values():
                _defer_required(sub)
        elif a.option_strings and a.required:
            a.required = False
            a.needed = True


def _subparser(top: argparse.ArgumentParser, ns: argparse.Namespace) -> argparse.ArgumentParser:
    p = top
    for attr in ("group", "cmd"):
        val = getattr(ns, attr, None)
        if val is None:
            break
        sub = next(a for a in p._actions if isinstance(a, argparse._SubParsersAction))
        p = sub.choices[val]
    return p


def _apply_config(top, ns, argv: Sequence[str]) -> None:
    """Fill flags not given on the command line from a key = value file."""
    p = _subparser(top, ns)
    if getattr(ns, "config", None):
        _read_config(p, ns, argv)
    missing = [a.option_strings[0] for a in p._actions
               if getattr(a, "needed", False) and getattr(ns, a.dest) is None]
    if missing:
        raise UsageError(f"missing required flags: {', '.join(missing)}")


def _read_config(p, ns, argv: Sequence[str]) -> None:
    actions = {a.dest: a for a in p._actions if a.option_strings}
    given = {a.dest for a in p._actions for opt in a.option_strings
             for arg in argv if arg == opt or arg.startswith(opt + "=")}
    try:
        text = open(ns.config, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"--config: {exc}") from exc
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if key == "class":
            key = "cls"
        if not sep or key not in actions or key == "config":
            raise UsageError(f"--config line {n}: unknown key {key!r}")
        if key in given:
            continue
        act = actions[key]
        if isinstance(act, argparse._StoreTrueAction):
            setattr(ns, key, value.lower() in ("1", "true", "yes"))
        else:
            try:
                setattr(ns, key, act.type(value) if act.type else value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"--config line {n}: {key}: {exc}") from exc


def _parse_class(family: str, text: str, flag: str = "--class") -> cs.RadialClass:
    try:
        return cs.RadialClass.parse(family, text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _window(text: str, ambient: str) -> tuple[complex, complex]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--window: {exc}") from exc
    if ambient == "line" and len(vals) == 2:
        return complex(vals[0]), complex(vals[1])
    if ambient == "plane" and len(vals) == 4:
        return complex(vals[0], vals[1]), complex(vals[2], vals[3])
    raise UsageError(f"--window: need {'x0,x1' if ambient == 'line' else 'x0,y0,x1,y1'}")


def _radial(map_token: str, name: str) -> ct.Radial:
    m = rm.from_token(map_token)
    if m.family == "quadcantor":
        if name == "canonical":
            name = "r1"
        return eg.named_radial(name)
    if name != "canonical":
        raise UsageError(f"--radial: only 'canonical' is shipped for {m.token}")
    if m.family == "power":
        return ct.power_radial(m)
    if m.family == "cheb":
        return ct.chebyshev_radial(m)
    return ct.lattes_radial(m)


def _graph(ns) -> eg.EqGraph:
    if rm.from_token(ns.map).family != "quadcantor":
        raise UsageError("--map: equivalence graphs are shipped for quadcantor only")
    r = eg.named_radial(ns.radial)
    rp = eg.named_radial(ns.radial2 or ns.radial)
    name = ns.radial if not ns.radial2 or ns.radial2 == ns.radial else f"{ns.radial}_{ns.radial2}"
    return eg.build_eq_graph(r, rp, eg.dihedral_group(), name)


def _run(ns, rep: Report) -> int:
    cmd = f"{ns.group} {ns.cmd}" if getattr(ns, "cmd", None) else ns.group
    if ns.group == "tile":
        c = _parse_class(ns.family, ns.cls)
        ifs = li.lift_radial_class(c)
        rep.add("family", c.token)
        rep.add("class", str(c))
        rep.add("resolution", ns.res)
        if ns.cmd == "render":
            r = li.attractor_raster(ifs, ns.res)
            with open(ns.out, "wb") as fh:
                fh.write(r.to_pgm())
            rep.add("pixels", r.count())
            rep.add("iterations", r.iterations)
            rep.add("out", ns.out)
        elif ns.cmd == "measure":
            r = li.attractor_raster(ifs, ns.res)
            rep.add("measure_estimate", li.measure_estimate(r).value)
            rep.add("iterations", r.iterations)
            try:
                rep.add("closed_form", str(li.closed_form_measure(c)))
            except DomainError:
                rep.add("closed_form", "n/a")
        elif ns.cmd == "check-tiling":
            tr = li.tiling_check(ifs, _window(ns.window, ifs.ambient), ns.res)
            rep.add("coverage", tr.coverage)
            rep.add("overlap", tr.overlap)
            rep.add("translates", len(tr.translations))
        else:
            mu = li.multiplicity_estimate(ifs, ns.res)
            rep.add("multiplicity", mu.n)
            rep.add("gap", mu.gap)
            rep.add("normalized_measure", mu.measure)
    elif cmd == "code eval":
        r = _radial(ns.map, ns.radial)
        tree = ct.extend_tree(r, min(8, ns.depth))
        try:
            v = ct.pi_eval(tree, ns.word, ns.eps, max_depth=ns.depth)
        except ct.WordError as exc:
            raise UsageError(f"--word: {exc}") from exc
        rep.add("map", r.map.token)
        rep.add("radial", r.name or ns.radial)
        rep.add("word", ns.word)
        rep.add("point", v.point)
        rep.add("bound", v.bound)
        rep.add("depth", v.depth)
        rep.add("contraction", tree.contraction)
    elif cmd == "code growth":
        c = _parse_class(ns.family, ns.cls)
        counts, verdict = li.growth_rate_exact(li.lift_radial_class(c), ns.kmax)
        rep.add("family", c.token)
        rep.add("class", str(c))
        rep.add("counts", counts)
        rep.add("verdict", verdict)
    elif ns.group == "eqgraph":
        g = _graph(ns)
        G = g.group
        rep.add("radial", ns.radial)
        rep.add("radial2", ns.radial2 or ns.radial)
        rep.add("vertices", [G.label(v) for v in g.vertices])
        rep.add("edges", len(g.edges))
        if ns.cmd == "build":
            dot = g.to_dot()
            if ns.out:
                with open(ns.out, "w", encoding="utf-8") as fh:
                    fh.write(dot)
                rep.add("out", ns.out)
            else:
                sys.stdout.write(dot)
        elif ns.cmd == "decide":
            try:
                verdict = eg.relation_decide(g, ns.w, ns.w2)
            except ct.WordError as exc:
                raise UsageError(f"--w/--w2: {exc}") from exc
            rep.add("w", ns.w)
            rep.add("w2", ns.w2)
            rep.add("related", "undecided" if verdict is None else str(verdict).lower())
        else:
            m = eg.multiplicity_classify(g, ns.samples, ns.depth, ns.seed)
            for line in m.lines():
                k, _, v = line.partition(" = ")
                rep.add(k, v)
    elif cmd == "cod equal":
        c1 = _parse_class(ns.family, ns.cls)
        c2 = _parse_class(ns.family, ns.class2, "--class2")
        rep.add("class", str(c1))
        rep.add("class2", str(c2))
        rep.add("equal", str(cs.cod_equal(c1, c2, strict=ns.strict)).lower())
        t = cs.solve_deck(c1, c2)
        if t is not None:
            rep.add("deck", f"a = {t.a}, n = {t.n}")
    elif cmd == "cod canon":
        c = _parse_class(ns.family, ns.cls)
        rep.add("class", str(c))
        rep.add("canonical", str(cs.canonical_form(c, strict=ns.strict)))
        rep.add("degenerate", str(cs.is_degenerate(c)).lower())
    elif ns.group == "selftest":
        return _selftest(ns, rep)
    return 0


def _selftest(ns, rep: Report) -> int:
    from .acceptance import CRITERIA, run_criterion
    try:
        which = [int(x) for x in ns.only.split(",")] if ns.only else sorted(CRITERIA)
    except ValueError as exc:
        raise UsageError(f"--only: {exc}") from exc
    bad = [n for n in which if n not in CRITERIA]
    if bad:
        raise UsageError(f"--only: no criterion {bad[0]}")
    failed = 0
    for n in which:
        res = run_criterion(n)
        lines = res.report() if ns.verbose or not res.passed else [res.line()]
        print("\n".join(lines), flush=True)
        failed += not res.passed
        rep.add(f"criterion_{n}", "PASS" if res.passed else "FAIL")
    rep.add("failed", failed)
    return 1 if failed else 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    top = build_parser()
    try:
        ns = top.parse_args(argv)
        _apply_config(top, ns, argv)
        cmd = f"{ns.group} {ns.cmd}" if getattr(ns, "cmd", None) else ns.group
        rep = Report(cmd, [])
        code = _run(ns, rep)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return 2
    text = rep.render()
    if ns.group != "selftest" or ns.report:
        if ns.group != "selftest":
            sys.stdout.write(text)
        if ns.report:
            with open(ns.report, "w", encoding="utf-8") as fh:
                fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
