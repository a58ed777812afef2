"""Command line front end.

Subcommands ``extend``, ``hodge``, ``periodmap``, ``eval`` and ``verify``.
Exit status: 0 ok, 1 verification mismatch, 2 bad input, 3 computation
error, 4 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import reference
from .connext import log_extension, verify_log_poles
from .errors import AlbaneseError, InputError, InsufficientPrecision
from .evalnum import IntegralOracle, compose_paths, tangential_value
from .exactalg import CurveModel, FuncElem, LaurentSeries, curve_new, rational, rational_str
from .hodge import Basepoint, check_conditions_Im, hodge_constants, hodge_f0
from .periods import period_map
from .wordalg import WordIndex, word_index, word_letters, word_string

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "v1"
DEFAULT_CURVE = "[1,0,0,1]"


@dataclass
class JobConfig:
    command: str
    curve: list = field(default_factory=lambda: [1, 0, 0, 1])
    genus: int | None = None
    basis: list | None = None
    level: int = 1
    basepoint: str = "rational"
    fmt: str = "json"
    threads: int = 1
    forms: list | None = None
    z: str | None = None
    log_z: str | None = None
    oracle: dict | None = None
    y: str | None = None


# -- parsing ------------------------------------------------------------------

def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def parse_curve(cfg: JobConfig) -> CurveModel:
    if not isinstance(cfg.curve, list) or not cfg.curve:
        raise InputError("curve must be a JSON list of coefficients, constant term first")
    if cfg.genus is not None and cfg.genus < 1:
        raise InputError("genus must be at least 1")
    return curve_new([rational(c) for c in cfg.curve], cfg.genus, cfg.basis)


def parse_basepoint(text: str) -> Basepoint:
    """``rational`` (unspecified affine point), ``tangential`` or ``x=..[,y=..]``."""
    text = text.strip()
    if text == "tangential":
        return Basepoint(tangential=True)
    if text == "rational":
        return Basepoint()
    vals = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        if not sep or key.strip() not in ("x", "y"):
            raise InputError(f"cannot read base point {text!r}")
        vals[key.strip()] = rational(val.strip())
    if "x" not in vals:
        raise InputError("base point needs an x coordinate")
    return Basepoint(x=vals["x"], y=vals.get("y"))


def _check_point(curve: CurveModel, bp: Basepoint):
    if bp.x is not None and bp.y is not None and bp.y ** 2 != curve.f(bp.x):
        raise InputError(f"({bp.x}, {bp.y}) is not on the curve")


# -- helpers for output -----------------------------------------------------------

def _word(m: int, r: int, g: int) -> str:
    return word_string(word_letters(WordIndex(m, r), g))


def in_powers_of(h: FuncElem, F: FuncElem, curve: CurveModel) -> list[str] | None:
    """Coefficients ``[c_1, ..., c_k]`` with ``h = sum c_i F^i``, or None."""
    g = curve.genus
    rest = h
    coeffs: dict[int, Fraction] = {}
    lead_F = curve.expand(F, 1)[-1]
    while not rest.is_zero():
        k = rest.pole_order(g)
        if k <= 0:
            return None
        c = curve.expand(rest, 1)[-k] / lead_F ** k
        coeffs[k] = c
        rest = rest - F ** k * c
    top = max(coeffs, default=0)
    return [rational_str(coeffs.get(i, Fraction(0))) for i in range(1, top + 1)]


def _func_json(v: FuncElem, curve: CurveModel, F: FuncElem | None = None) -> dict:
    out = {"elem": v.to_json(), "text": repr(v)}
    if F is not None:
        pw = in_powers_of(v, F, curve)
        if pw is not None:
            out["in_F"] = pw
    return out


def _curve_json(curve: CurveModel) -> dict:
    return curve.to_json()


# -- commands ---------------------------------------------------------------------

def run_extend(cfg: JobConfig) -> dict:
    curve = parse_curve(cfg)
    ext = log_extension(curve, cfg.level, cfg.threads)
    g = curve.genus
    F = ext.h_at(2, 0, 1) if g == 1 else None
    # stored entries are the i = 0 ones; the others follow by the shift law
    h = [{"r": r, "i": 0, "len": m, "word": _word(m, r, g), **_func_json(v, curve, F)}
         for (m, r), v in sorted(ext.h.items()) if m >= 1 and not v.is_zero()]
    c = [{"r": r, "i": 0, "len": m, "word": _word(m, r, g), "elem": w.to_json(), "text": repr(w)}
         for (m, r), w in sorted(ext.c.items()) if not w.is_zero()]
    ok, _ = verify_log_poles(ext.connection())
    consts = {}
    if g == 1 and cfg.level >= 3:
        k = hodge_constants(curve, ext)
        consts = {"lambda": rational_str(k.lam)}
        if cfg.level >= 4:
            consts["mu"] = rational_str(k.mu)
    out = {"command": "extend", "curve": _curve_json(curve), "level": cfg.level,
           "h": h, "c": c, "log_poles": ok, "lambda_like_constants": consts}
    if F is not None:
        out["F"] = _func_json(F, curve)
    return out


def run_hodge(cfg: JobConfig) -> dict:
    curve = parse_curve(cfg)
    bp = parse_basepoint(cfg.basepoint)
    _check_point(curve, bp)
    ext = log_extension(curve, cfg.level, cfg.threads)
    gens = hodge_f0(curve, cfg.level, bp, ext)
    side = "Y" if bp.tangential else "X"
    g = curve.genus
    items = []
    for m, f, t in gens.generators(side):
        terms = []
        for w, v in sorted(t.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            idx = word_index(w, g)
            terms.append({"len": idx.length, "rank": idx.rank, "word": word_string(w),
                          "coeff": v.to_json(), "text": repr(v)})
        items.append({"m": m, "f": f, "word": _word(m, f, g), "terms": terms})
    report = check_conditions_Im(gens, ext)
    report["failures"] = [list(x) for x in report["failures"]]
    out = {"command": "hodge", "curve": _curve_json(curve), "level": cfg.level,
           "basepoint": bp.label(), "side": side, "generators": items, "conditions": report}
    if g == 1 and cfg.level >= 1:
        out["constants"] = {k: rational_str(v) for k, v in hodge_constants(curve, ext).as_dict().items()}
    return out


def run_periodmap(cfg: JobConfig) -> dict:
    curve = parse_curve(cfg)
    bp = parse_basepoint(cfg.basepoint)
    _check_point(curve, bp)
    res = period_map(cfg.level, curve, bp, threads=cfg.threads)
    out = {"command": "periodmap", "curve": _curve_json(curve)}
    out.update(res.to_json())
    return out


def _series_list(forms) -> tuple[list[str], dict[str, LaurentSeries]]:
    if not isinstance(forms, list):
        raise InputError("forms must be a JSON list of series")
    labels, table = [], {}
    for i, item in enumerate(forms):
        s = LaurentSeries.from_json(item)
        lab = str(item.get("label", f"w{i + 1}")) if isinstance(item, dict) else f"w{i + 1}"
        if lab in table and table[lab] != s:
            raise InputError(f"label {lab!r} used for two different series")
        labels.append(lab)
        table[lab] = s
    return labels, table


def run_eval(cfg: JobConfig) -> dict:
    labels, table = _series_list(cfg.forms if cfg.forms is not None else [])
    if cfg.oracle is None:
        if cfg.z is None:
            raise InputError("eval needs --z")
        val = tangential_value([table[lab] for lab in labels], rational(cfg.z))
        point = {"z": rational_str(rational(cfg.z))}
    else:
        if cfg.y is None:
            raise InputError("path splitting needs --y, the disc point")
        oracle = IntegralOracle.from_json(cfg.oracle)
        val = compose_paths(labels, table, rational(cfg.y), oracle)
        point = {"y": rational_str(rational(cfg.y))}
    out = {"command": "eval", "forms": labels, **point, "log_polynomial": val.to_json()}
    if cfg.log_z is not None:
        out["value"] = rational_str(val.value(cfg.log_z))
    elif val.is_rational():
        out["value"] = rational_str(val.value())
    return out


COMMANDS = {"extend": run_extend, "hodge": run_hodge, "periodmap": run_periodmap, "eval": run_eval}


def run(cfg: JobConfig) -> dict:
    if cfg.level < 0 or (cfg.command in ("extend", "hodge", "periodmap") and cfg.level < 1):
        raise InputError("level must be at least 1")
    return COMMANDS[cfg.command](cfg)


# -- golden files and reference identities -------------------------------------------

GOLDEN = [
    ("x3+1", [1, 0, 0, 1], "extend", "none", 2),
    ("x3+1", [1, 0, 0, 1], "extend", "none", 3),
    ("x3-x+1", [1, -1, 0, 1], "extend", "none", 2),
    ("x3+1", [1, 0, 0, 1], "hodge", "x=2,y=3", 4),
    ("x5+1", [1, 0, 0, 0, 0, 1], "hodge", "x=2", 2),
    ("x3+1", [1, 0, 0, 1], "periodmap", "rational", 4),
    ("x3+1", [1, 0, 0, 1], "periodmap", "tangential", 3),
    ("x5+1", [1, 0, 0, 0, 0, 1], "periodmap", "rational", 2),
    ("x5+1", [1, 0, 0, 0, 0, 1], "periodmap", "tangential", 2),
]


def _fixture_name(key, cmd, bp, level) -> str:
    tag = bp.replace("=", "").replace(",", "_").replace("/", "over")
    return f"{key}-{cmd}-{tag}-L{level}.json"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def reference_checks() -> list[tuple[str, bool, str]]:
    """Closed forms against computed coordinates; ``[(name, ok, detail)]``."""
    results = []
    for f in ([1, 0, 0, 1], [1, -1, 0, 1]):
        curve = curve_new(f)
        for n in (2, 3, 4):
            r = period_map(n, curve, "rational")
            d = reference.difference(reference.elliptic_rational(n, r.forms, r.constants), r.u_tensor)
            results.append((f"genus 1 affine level {n} {f}", d.is_zero(), repr(d) if not d.is_zero() else ""))
        ext = log_extension(curve, 3)
        for n in (2, 3):
            r = period_map(n, curve, "tangential", ext)
            d = reference.difference(reference.elliptic_tangential(n, r.forms, r.constants), r.u_tensor)
            results.append((f"genus 1 tangential level {n} {f}", d.is_zero(), repr(d) if not d.is_zero() else ""))
    curve = curve_new([1, 0, 0, 0, 0, 1])
    ext = log_extension(curve, 2)
    r = period_map(2, curve, "rational", ext)
    d = reference.difference(reference.hyperelliptic_rational(r.forms, 2, r.constants), r.u_tensor)
    results.append(("genus 2 affine level 2", d.is_zero(), repr(d) if not d.is_zero() else ""))
    r = period_map(2, curve, "tangential", ext)
    d = reference.difference(reference.hyperelliptic_tangential(r.forms, 2, ext, r.constants), r.u_tensor)
    results.append(("genus 2 tangential level 2", d.is_zero(), repr(d) if not d.is_zero() else ""))
    return results


def run_verify(fixtures: Path, update: bool, out) -> int:
    failed = 0
    for name, ok, detail in reference_checks():
        print(f"{'PASS' if ok else 'FAIL'} reference {name}" + (f": {detail}" if detail else ""), file=out)
        failed += not ok
    fixtures.mkdir(parents=True, exist_ok=True) if update else None
    for key, coeffs, cmd, bp, level in GOLDEN:
        path = fixtures / _fixture_name(key, cmd, bp, level)
        cfg = JobConfig(command=cmd, curve=coeffs, level=level, basepoint=bp if bp != "none" else "rational")
        text = dumps(run(cfg))
        if update:
            path.write_text(text)
            print(f"WROTE {path.name}", file=out)
            continue
        if not path.exists():
            print(f"FAIL golden {path.name}: missing", file=out)
            failed += 1
            continue
        ok = path.read_text() == text
        print(f"{'PASS' if ok else 'FAIL'} golden {path.name}", file=out)
        failed += not ok
    return 1 if failed else 0


# -- text rendering ------------------------------------------------------------------

def render_text(obj: dict) -> str:
    cmd = obj.get("command")
    lines = []
    if cmd == "extend":
        lines.append(f"level {obj['level']} extension, logarithmic poles: {obj['log_poles']}")
        for e in obj["h"]:
            extra = f"   [in F: {', '.join(e['in_F'])}]" if "in_F" in e else ""
            lines.append(f"h[{e['word']}] = {e['text']}{extra}")
        for e in obj["c"]:
            lines.append(f"c[{e['word']}] = {e['text']}")
    elif cmd == "hodge":
        lines.append(f"level {obj['level']} F^0 generators, base point {obj['basepoint']}")
        for gen in obj["generators"]:
            body = " + ".join(f"({t['text']})*{t['word']}" for t in gen["terms"])
            lines.append(f"{gen['word']}: {body}")
        cond = {k: v for k, v in obj["conditions"].items() if k != "failures"}
        lines.append("conditions: " + ", ".join(f"{k}={v}" for k, v in sorted(cond.items())))
        if "constants" in obj:
            lines.append("constants: " + ", ".join(f"{k}={v}" for k, v in obj["constants"].items()))
    elif cmd == "periodmap":
        lines.append(f"level {obj['level']} period map, {obj['basepoint']} base point")
        for key in ("u", "hodge_factor"):
            lines.append(f"{key}:")
            for t in obj[key]:
                coeff = " + ".join(f"{c['scalar']}*I({' '.join(c['word'])})" if c["word"] else c["scalar"]
                                   for c in t["coeff"])
                lines.append(f"  {t['bracket']}: {coeff}")
        if obj["constants"]:
            lines.append("constants: " + ", ".join(f"{k}={v}" for k, v in obj["constants"].items()))
    elif cmd == "eval":
        lines.append("value: " + obj.get("value", " + ".join(f"{c}*log(z)^{j}" for j, c in obj["log_polynomial"].items())))
    return "\n".join(lines) + "\n"


# -- entry point ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="albanese", description="Unipotent Albanese maps of odd hyperelliptic curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, basepoint_default=None):
        sp.add_argument("--curve", default=DEFAULT_CURVE, help="JSON list of f coefficients, constant term first")
        sp.add_argument("--genus", type=int)
        sp.add_argument("--basis", help="JSON list of basis polynomials (coefficient lists)")
        sp.add_argument("--level", type=int, required=True)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if basepoint_default is not None:
            sp.add_argument("--basepoint", default=basepoint_default,
                            help="'rational', 'tangential' or 'x=..[,y=..]'")

    common(sub.add_parser("extend", help="logarithmic extension of the universal connection"))
    common(sub.add_parser("hodge", help="F^0 generators"), "x=0,y=1")
    common(sub.add_parser("periodmap", help="period map coordinates"), "rational")
    ev = sub.add_parser("eval", help="iterated integral from the tangential base point")
    ev.add_argument("--forms", required=True, help="JSON list of series {val, coeffs[, prec, label]}")
    ev.add_argument("--z", help="local parameter of the end point")
    ev.add_argument("--log-z", dest="log_z", help="branch value for log z")
    ev.add_argument("--oracle", help="JSON file with far-segment integrals")
    ev.add_argument("--y", help="disc point where the path is split")
    ev.add_argument("--format", choices=("json", "text"), default="json")
    vf = sub.add_parser("verify", help="reference identities and golden files")
    vf.add_argument("--fixtures", default=str(FIXTURE_DIR))
    vf.add_argument("--update", action="store_true")
    return p


def config_from_args(args) -> JobConfig:
    cfg = JobConfig(command=args.command, fmt=args.format)
    if args.command == "eval":
        cfg.forms = _json_arg(args.forms, "--forms")
        cfg.z, cfg.log_z, cfg.y = args.z, args.log_z, args.y
        if args.oracle:
            try:
                cfg.oracle = json.loads(Path(args.oracle).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read oracle file: {exc}") from exc
        return cfg
    cfg.curve = _json_arg(args.curve, "--curve")
    cfg.genus = args.genus
    cfg.basis = _json_arg(args.basis, "--basis") if args.basis else None
    cfg.level = args.level
    cfg.threads = max(1, args.threads)
    if hasattr(args, "basepoint"):
        cfg.basepoint = args.basepoint
    return cfg


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(Path(args.fixtures), args.update, out)
        cfg = config_from_args(args)
        result = run(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InsufficientPrecision as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except AlbaneseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out.write(dumps(result) if cfg.fmt == "json" else render_text(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
