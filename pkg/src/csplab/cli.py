"""Command-line entry point.

Exit codes: 0 for a definite answer (negative answers included), 1 for
usage, parse or input errors, 2 when a size guard refuses the computation.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import so3
from .btlab import (build_fragment, collapse_iso, compute_b, fragment_label, invariant_point_search,
                    projection, tree_hom)
from .dsl import DSLError, format_word, label, parse_word, read_structure, serialize_structure
from .polywidth import cyclic_polymorphism, ts_polymorphism, u_structure, width1_witness
from .solver import ac_lists, hom_lists, solve_hom
from .structures import (Guards, SizeGuardError, StructureError, compose, gaifman_components,
                         is_forest, validate)


@dataclass
class Config:
    guards: Guards = field(default_factory=Guards)
    output: str = "json"
    seed: int = 0
    threads: int = 1


def load_config(path) -> Config:
    """Read ``key = value`` lines; guard names match :class:`Guards` fields."""
    cfg = Config()
    guard_fields = {f.name for f in dataclasses.fields(Guards)}
    updates = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected key = value")
            key, value = (p.strip() for p in line.split("=", 1))
            if key in guard_fields:
                updates[key] = int(value)
            elif key == "output":
                cfg.output = value
            elif key in ("seed", "threads"):
                setattr(cfg, key, int(value))
            else:
                raise ValueError(f"{path}:{n}: unknown key {key!r}")
    cfg.guards = dataclasses.replace(cfg.guards, **updates)
    return cfg


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _subset(a, s) -> str:
    return "+".join(label(v) for v in sorted(s, key=a.index.__getitem__))


def _hom_json(h):
    if h is None:
        return None
    return {label(x): label(h.mapping[x]) for x in h.source.universe}


def _lists_json(b, a, lists):
    return {label(x): [label(v) for v in a.universe if v in lists[x]] for x in b.universe}


def _omega_json(a, h):
    if h is None:
        return None
    return {_subset(a, s): label(h.mapping[s]) for s in h.source.universe}


def _word(text):
    try:
        return parse_word(text)
    except DSLError as e:
        raise UsageError(str(e)) from None


def cmd_validate(args, cfg):
    s = read_structure(args.file)
    errors = validate(s)
    return {"ok": not errors, "errors": errors, "name": s.name, "size": len(s.universe)}


def cmd_hom(args, cfg):
    b, a = read_structure(args.source), read_structure(args.target)
    return {"hom": _hom_json(solve_hom(b, a, guards=cfg.guards))}


def cmd_ac(args, cfg):
    b, a = read_structure(args.source), read_structure(args.target)
    lists = ac_lists(b, a)
    if lists is None:
        return {"status": "FAIL"}
    return {"status": "OK", "lists": _lists_json(b, a, lists)}


def cmd_homlists(args, cfg):
    b, a = read_structure(args.source), read_structure(args.target)
    return {"lists": _lists_json(b, a, hom_lists(b, a, cfg.guards))}


def cmd_u(args, cfg):
    a = read_structure(args.file)
    u = u_structure(a, cfg.guards)
    text = serialize_structure(u, lambda s: _subset(a, s))
    return {"size": len(u.universe),
            "tuples": {r: len(u.relations[r]) for r, _ in u.signature},
            "struct": text}


def cmd_width1(args, cfg):
    a = read_structure(args.file)
    h = width1_witness(a, cfg.guards)
    return {"width1": h is not None, "witness": _omega_json(a, h)}


def cmd_poly(args, cfg):
    a = read_structure(args.file)
    if args.kind == "cyclic":
        w = cyclic_polymorphism(a, args.n, cfg.guards)
        table = None if w is None else {",".join(label(v) for v in k): label(v)
                                        for k, v in w.table.items()}
    else:
        w = ts_polymorphism(a, args.n, cfg.guards)
        table = None if w is None else {_subset(a, k): label(v) for k, v in w.table.items()}
    return {"kind": args.kind, "n": args.n, "exists": w is not None, "witness": table}


def cmd_bt_b(args, cfg):
    a = read_structure(args.file)
    b, _ = compute_b(a, cfg.guards)
    return {"b": b}


def _fragment_summary(frag):
    s = frag.structure
    return {"radius": frag.radius, "b": frag.table.b, "words": len(frag.words),
            "vertices": len(s.universe),
            "tuples": sum(len(s.relations[r]) for r, _ in s.signature),
            "components": len(gaifman_components(s)), "acyclic": is_forest(s)}


def cmd_bt_fragment(args, cfg):
    frag = build_fragment(read_structure(args.file), args.radius, cfg.guards)
    out = _fragment_summary(frag)
    out["struct"] = serialize_structure(frag.structure, fragment_label(frag))
    return out


def cmd_bt_treehom(args, cfg):
    frag = build_fragment(read_structure(args.file), args.radius, cfg.guards)
    h = tree_hom(frag, root_index=args.root)
    lab = fragment_label(frag)
    return {"verified": True, "hom": {lab(x): label(h.mapping[x]) for x in frag.structure.universe}}


def _block_uset(block):
    # every member of a collapsed block shares its U-component
    return next(iter(block))[1]


def cmd_bt_collapse(args, cfg):
    a = read_structure(args.file)
    iso = collapse_iso(a, cfg.guards)
    return {"collapse": iso is not None,
            "iso": None if iso is None else {_subset(a, _block_uset(x)): _subset(a, iso.mapping[x])
                                             for x in iso.source.universe}}


def cmd_bt_invariant(args, cfg):
    a = read_structure(args.file)
    frag = build_fragment(a, args.radius, cfg.guards)
    if args.phi == "projection":
        omega = width1_witness(a, cfg.guards)
        if omega is None:
            return {"hom": None, "reason": "no width-1 witness for projection phi"}
        phi = compose(projection(frag), omega)
    else:
        phi = tree_hom(frag, root_index=args.root)
    h, reason = invariant_point_search(frag, phi, cfg.guards)
    return {"phi": args.phi, "hom": _omega_json(a, h), "reason": reason}


def cmd_so3_delta(args, cfg):
    w = _word(args.word)
    q = so3.delta_sq(so3.word_matrix(w))
    return {"word": format_word(so3.reduce(w)), "delta_sq": _frac(q),
            "delta_sq_float": float(q), "delta_float": math.sqrt(q)}


def cmd_so3_axis(args, cfg):
    ax = so3.axis(so3.word_matrix(_word(args.word)))
    return {"axis": None if ax is None else [_frac(c) for c in ax]}


def cmd_so3_innc(args, cfg):
    return {"in_normal_closure": so3.in_normal_closure(_word(args.word))}


def cmd_so3_approx(args, cfg):
    r = so3.approx_search(_word(args.d), args.depth, guards=cfg.guards)
    return {"d": format_word(so3.reduce(_word(args.d))), "depth": args.depth,
            "m": format_word(r.word), "delta_sq": _frac(r.delta_sq), "delta_sq_float": r.delta_sq_float,
            "baseline": _frac(r.baseline), "pool": r.pool_size,
            "in_normal_closure": so3.in_normal_closure(r.word)}


def cmd_check(args, cfg):
    """Randomised AC soundness check against brute force (seeded)."""
    from .catalog import K2, K3, T2
    from .structures import digraph
    import itertools

    rng = random.Random(cfg.seed)
    violations = 0
    for _ in range(args.trials):
        n = rng.randint(1, 5)
        vs = [f"v{i}" for i in range(n)]
        arcs = [p for p in itertools.product(vs, vs) if rng.random() < 0.3]
        b = digraph(vs, arcs, name="B")
        for a in (T2(), K2(), K3()):
            brute = any(all((m[x], m[y]) in set(a.relations["E"]) for x, y in arcs)
                        for m in (dict(zip(vs, c)) for c in itertools.product(a.universe, repeat=n)))
            if ac_lists(b, a) is None and brute:
                violations += 1
            if (solve_hom(b, a) is not None) != brute:
                violations += 1
    return {"seed": cfg.seed, "trials": args.trials, "violations": violations}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="csplab", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--output", choices=["json", "text"])
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, help="accepted for compatibility; output is identical")
    for f in dataclasses.fields(Guards):
        p.add_argument(f"--{f.name.replace('_', '-')}", type=int, dest=f.name, metavar="N")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(subp, name, fn, *files, **kw):
        q = subp.add_parser(name, **kw)
        for f in files:
            q.add_argument(f)
        q.set_defaults(fn=fn)
        return q

    add(sub, "validate", cmd_validate, "file")
    add(sub, "hom", cmd_hom, "source", "target")
    add(sub, "ac", cmd_ac, "source", "target")
    add(sub, "homlists", cmd_homlists, "source", "target")
    add(sub, "u", cmd_u, "file")
    add(sub, "width1", cmd_width1, "file")
    q = add(sub, "poly", cmd_poly, "file")
    q.add_argument("--kind", choices=["cyclic", "ts"], required=True)
    q.add_argument("-n", type=int, required=True)
    q = add(sub, "check", cmd_check)
    q.add_argument("--trials", type=int, default=200)

    bt = sub.add_parser("bt").add_subparsers(dest="btcmd", required=True, parser_class=_Parser)
    add(bt, "b", cmd_bt_b, "file")
    add(bt, "collapse", cmd_bt_collapse, "file")
    for name, fn in (("fragment", cmd_bt_fragment), ("treehom", cmd_bt_treehom),
                     ("invariant", cmd_bt_invariant)):
        q = add(bt, name, fn, "file")
        q.add_argument("--radius", type=int, required=True)
        if name != "fragment":
            q.add_argument("--root", type=int, default=0, help="root position within each component")
        if name == "invariant":
            q.add_argument("--phi", choices=["treehom", "projection"], default="treehom")

    s3 = sub.add_parser("so3").add_subparsers(dest="so3cmd", required=True, parser_class=_Parser)
    for name, fn in (("delta", cmd_so3_delta), ("axis", cmd_so3_axis), ("innc", cmd_so3_innc)):
        add(s3, name, fn, "word")
    q = add(s3, "approx", cmd_so3_approx)
    q.add_argument("--d", required=True)
    q.add_argument("--depth", type=int, required=True)
    return p


def _emit(result, mode, out):
    if mode == "json":
        out.write(json.dumps(result, sort_keys=False) + "\n")
        return
    for k, v in result.items():
        if k == "struct":
            out.write(v)
        elif isinstance(v, dict):
            out.write(f"{k}:\n")
            for kk, vv in v.items():
                out.write(f"  {kk}: {vv}\n")
        else:
            out.write(f"{k}: {v}\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    cfg = Config()
    try:
        args = parser.parse_args(argv)
        if args.config:
            cfg = load_config(args.config)
        if args.output:
            cfg.output = args.output
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        overrides = {f.name: getattr(args, f.name) for f in dataclasses.fields(Guards)
                     if getattr(args, f.name) is not None}
        cfg.guards = dataclasses.replace(cfg.guards, **overrides)
        if any(getattr(cfg.guards, f.name) <= 0 for f in dataclasses.fields(Guards)):
            raise UsageError("guards must be positive")
        result = args.fn(args, cfg)
    except SizeGuardError as e:
        _emit({"guard": e.guard, "needed": e.needed, "limit": e.limit, "error": str(e)},
              cfg.output, out)
        err.write(f"csplab: {e}\n")
        return 2
    except (UsageError, DSLError, StructureError, OSError, ValueError) as e:
        err.write(f"csplab: error: {e}\n")
        return 1
    _emit(result, cfg.output, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
