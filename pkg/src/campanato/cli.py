"""Command-line front end.

    campanato conjugate --young '{"kind":"Power","p":2}' --check-duality
    campanato gauge --young '{"kind":"Power","p":3}' --n 3 --s 1.5
    campanato check --young '{"kind":"PowerLog","p":4,"alpha":5}' --n 2 --s 0.5
    campanato verify --experiment necessity --n 2 --s 1.5 --k 0

Exit codes: 0 success, 2 validation error, 3 indeterminate verdict,
4 numerical divergence.  Reports are JSON (or CSV tables) and embed the
fully resolved configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, analysis, gauges, seminorms, young
from .analysis import StepFunction
from .extremals import bump, make_uf, make_vf, make_wf
from .gauges import EmbeddingParams, PreconditionError
from .young import DomainError, InvalidYoungFunction

EXIT_OK, EXIT_INVALID, EXIT_INDETERMINATE, EXIT_DIVERGENT = 0, 2, 3, 4

COMMANDS = ("conjugate", "inverse", "indices", "gauge", "check", "verify", "rearrange", "norm")

DEFAULTS = {
    "young": '{"kind": "Power", "p": 2}',
    "n": 1,
    "s": 0.5,
    "k": 0,
    "rmin": 1e-3,
    "rmax": 1.0,
    "points": 25,
    "seed": 0,
    "tol": 1e-6,
    "level": 1,
    "out": None,
    "format": "json",
    "check_duality": False,
    "alphas": None,
    "experiment": "ratio",
    "family": "uf",
    "beta": 0.0,
    "alpha": 0.25,
    "space": "conjugate",
    "jmax": 64,
    "f": None,
    "values": None,
    "weights": None,
}


class Indeterminate(Exception):
    pass


class Divergent(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="campanato", description="Young functions, Campanato gauges "
                                "and numerical embedding checks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file with option values; flags override it")
        sp.add_argument("--young", help="Young function as JSON, a JSON file, or a built-in label")
        sp.add_argument("--n", type=int)
        sp.add_argument("--s", type=float)
        sp.add_argument("--k", type=int)
        sp.add_argument("--rmin", type=float)
        sp.add_argument("--rmax", type=float)
        sp.add_argument("--points", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--level", type=int, help="quadrature refinement level")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"))
        if name == "conjugate":
            sp.add_argument("--check-duality", dest="check_duality", action="store_const", const=True)
        if name == "check":
            sp.add_argument("--alphas", help="comma-separated power-log exponents for the continuity table")
        if name == "verify":
            sp.add_argument("--experiment", choices=("ratio", "necessity", "power-weights", "optimality"))
            sp.add_argument("--family", choices=("uf", "vf", "wf"))
            sp.add_argument("--beta", type=float)
            sp.add_argument("--alpha", type=float)
            sp.add_argument("--space", choices=("conjugate", "direct"))
            sp.add_argument("--jmax", type=int)
        if name in ("norm", "verify"):
            sp.add_argument("--f", help='step function JSON {"breakpoints": [...], "levels": [...]}')
        if name == "rearrange":
            sp.add_argument("--values", help="JSON list of sample values")
            sp.add_argument("--weights", help="JSON list of sample weights")
    return p


def resolve_config(argv) -> dict:
    args = _parser().parse_args(argv)
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        unknown = set(file_cfg) - set(DEFAULTS) - {"command"}
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        cfg.update({k: v for k, v in file_cfg.items() if k != "command"})
    for key, val in vars(args).items():
        if key in DEFAULTS and val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    if isinstance(cfg["young"], dict):
        cfg["young"] = json.dumps(cfg["young"], sort_keys=True)
    return cfg


def _load_young(spec: str) -> young.YoungFunction:
    cat = young.builtin_catalogue()
    if spec in cat:
        return cat[spec]
    text = spec
    if not spec.lstrip().startswith("{") and os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidYoungFunction(f"cannot parse Young function: {exc.msg}") from None
    A = young.from_json(obj)
    young.validate(A)
    return A


def _json_arg(text, what):
    if text is None:
        return None
    if isinstance(text, (list, dict)):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"cannot parse {what}: {exc.msg}") from None


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _radii(cfg):
    if not 0 < cfg["rmin"] < cfg["rmax"]:
        raise DomainError("need 0 < rmin < rmax")
    if cfg["points"] < 2:
        raise DomainError("points must be at least 2")
    return np.geomspace(cfg["rmin"], cfg["rmax"], cfg["points"])


def _params(cfg):
    return EmbeddingParams(cfg["n"], cfg["s"], cfg["k"])


def _verdict_dict(v):
    return {"verdict": v.verdict, "method": v.method, "evidence": v.evidence}


# ---------------------------------------------------------------------------
# commands


def cmd_conjugate(cfg):
    A = _load_young(cfg["young"])
    At = young.conjugate(A)
    t = _radii(cfg)
    out = {"conjugate": At.to_dict(), "table": [[float(a), float(b)] for a, b in zip(t, At(t))]}
    if cfg["check_duality"]:
        band_t = np.logspace(-6, 6, 50)
        prod = np.asarray(young.inverse(A, band_t)) * np.asarray(young.inverse(At, band_t)) / band_t
        out["duality"] = {"t": band_t.tolist(), "ratio": prod.tolist(),
                          "min": float(prod.min()), "max": float(prod.max()),
                          "within": bool(prod.min() >= 1 - 1e-9 and prod.max() <= 2 + 1e-9)}
    return out, ["t", "conjugate"]


def cmd_inverse(cfg):
    A = _load_young(cfg["young"])
    t = _radii(cfg)
    return {"table": [[float(a), float(b)] for a, b in zip(t, young.inverse(A, t))]}, ["t", "inverse"]


def cmd_indices(cfg):
    A = _load_young(cfg["young"])
    i0, iinf = young.indices(A)
    out = {"i_zero": i0._asdict(), "i_infinity": iinf._asdict()}
    if not (i0.determinate and iinf.determinate):
        raise Indeterminate(out)
    return out, None


def _slope(r, v):
    r, v = np.asarray(r), np.asarray(v)
    good = (v > 0) & np.isfinite(v)
    if good.sum() < 2:
        return None
    return float(np.polyfit(np.log(r[good]), np.log(v[good]), 1)[0])


def cmd_gauge(cfg):
    A = _load_young(cfg["young"])
    p = _params(cfg)
    r = _radii(cfg)
    out = {}
    if p.s < 1:
        g = gauges.phi_gauge(p, A)
        out["gauge"] = "phi_sA"
    else:
        g = gauges.build_Fk_and_psi_k(p, A)
        out["gauge"] = "psi_sA" if p.k == 0 else "psi_k"
        out["branch"] = g.meta.get("branch")
    vals = np.asarray(g(r))
    out["table"] = [[float(a), float(b)] for a, b in zip(r, vals)]
    head, tail = slice(0, max(2, len(r) // 4)), slice(-max(2, len(r) // 4), None)
    out["edge_exponents"] = {"small_r": _slope(r[head], vals[head]), "large_r": _slope(r[tail], vals[tail])}
    out["admissible"] = g.admissible()
    if g.alternative is not None:
        ratio = np.asarray(g.alternative(r)) / vals
        out["consistency_band"] = {"min": float(ratio.min()), "max": float(ratio.max())}
    if g.extrapolated is not None:
        out["extrapolated_points"] = int(np.sum(g.extrapolated(r)))
    if g.meta:
        out["meta"] = {k: v for k, v in g.meta.items() if k != "branch"}
    return out, ["r", "gauge"]


def cmd_check(cfg):
    A = _load_young(cfg["young"])
    p = _params(cfg)
    out = {}
    bv = gauges.bmo_vmo_verdict(p, A)
    out["bmo"] = {"bmo": bv.bmo, "vmo": bv.vmo, "constant": bv.constant, "evidence": bv.evidence}
    verdicts = [bv.bmo, bv.vmo]
    if p.s < 1:
        q = p.exponent()
        adm = gauges.check_integral_condition(A, q, "zero", "power_of_t_over_A")
        out["embedding_admissibility"] = {"condition": "integrability_at_zero", **_verdict_dict(adm)}
        sp = gauges.spanne_modulus(gauges.phi_gauge(p, A), np.geomspace(cfg["rmin"], cfg["rmax"], 5))
        out["spanne"] = {"feasible": sp.feasible, "values": sp.values,
                         "dini": _verdict_dict(sp.dini),
                         "inverse_tail": None if sp.inverse_tail is None else _verdict_dict(sp.inverse_tail)}
        verdicts += [adm.verdict, sp.feasible]
        if cfg["alphas"]:
            alphas = [float(a) for a in str(cfg["alphas"]).split(",")]
            out["continuity_table"] = gauges.continuity_gap_report(p, alphas)
    else:
        k = p.k if p.k < p.floor else 0
        cond = {"integrability": None, "smoothness": None}
        try:
            p.require_higher(k)
            cond["smoothness"] = "ok"
        except PreconditionError as exc:
            cond["smoothness"] = exc.condition
        adm = gauges.check_integral_condition(A, p.exponent(k), "zero", "dual_tail")
        cond["integrability"] = _verdict_dict(adm)
        out["embedding_admissibility"] = cond
        verdicts.append(adm.verdict)
        out["linear_growth_at_zero"] = gauges.linear_growth_at_zero(A)
    if "indeterminate" in verdicts:
        raise Indeterminate(out)
    return out, None


def _step(cfg, default):
    obj = _json_arg(cfg["f"], "f")
    if obj is None:
        return default
    return StepFunction(np.asarray(obj["breakpoints"], dtype=float), np.asarray(obj["levels"], dtype=float))


def cmd_verify(cfg):
    A = _load_young(cfg["young"])
    exp = cfg["experiment"]
    if exp == "power-weights":
        res = {}
        for r in (0.1, 1.0, 10.0):
            rep = analysis.lemma_rinorm_equivalence(cfg["alpha"], cfg["beta"], r, A, cfg["space"])
            res[str(r)] = rep._asdict()
        out = {"lemma": res, "band": list(next(iter(res.values()))["band"])}
        if not all(v["finite"] for v in res.values()):
            raise Divergent(out)
        return out, None
    p = _params(cfg)
    if exp == "necessity":
        shape = "tilted" if p.k == 0 else "harmonic"
        xi = bump(p.n, shape, p.k)
        js = [j for j in (2, 4, 8, 16, 32, 64, 128, 256) if j <= cfg["jmax"]]
        rep = seminorms.necessity_scaling_experiment(p, A, xi, js, level=cfg["level"])
        return rep.to_dict(), None
    balls = seminorms.BallFamily(tuple(_radii(cfg)))
    if exp == "optimality":
        base = gauges.phi_gauge(p, A)
        g = gauges.Gauge(lambda r: base(r) * np.log(np.e + 1 / r), "phi_sA*log(e+1/r)")
        return seminorms.optimality_experiment(p, A, g, balls).to_dict(), ["radius", "gauge_quotient"]
    f = _step(cfg, StepFunction.indicator(1.0))
    if cfg["family"] == "uf":
        u = make_uf(f, p)
        g = gauges.phi_gauge(p, A)
    elif cfg["family"] == "vf":
        u = make_vf(f, p)
        g = gauges.build_Fk_and_psi_k(EmbeddingParams(p.n, p.s, 0), A)
    else:
        u = make_wf(f, None, p, p.k, A)
        g = gauges.build_Fk_and_psi_k(p, A)
    rep = seminorms.embedding_ratio_experiment(u, p, A, g, balls, level=cfg["level"], seed=cfg["seed"])
    out = rep.to_dict()
    if rep.errors.get("divergent"):
        raise Divergent(out)
    return out, None


def cmd_rearrange(cfg):
    vals = _json_arg(cfg["values"], "values")
    if vals is None:
        raise DomainError("--values is required")
    w = _json_arg(cfg["weights"], "weights")
    u = np.asarray(vals, dtype=float)
    w = np.ones_like(u) if w is None else np.asarray(w, dtype=float)
    if u.shape != w.shape:
        raise DomainError("values and weights must have the same length")
    star = analysis.decreasing_rearrangement(u, w)
    ds = analysis.double_star(star)
    rows = [[float(a), float(b), float(c)] for a, b, c in
            zip(star.edges[1:], star.values, ds(star.edges[1:]))]
    return {"rearrangement": star.to_dict(), "table": rows}, ["r", "u_star", "u_double_star"]


def cmd_norm(cfg):
    A = _load_young(cfg["young"])
    f = _step(cfg, StepFunction.indicator(1.0))
    out = {"f": f.to_dict(), "luxemburg_norm": analysis.luxemburg_norm(f, A)}
    if len(f.levels) == 1:
        out["char_norm"] = f.levels[0] * analysis.char_norm(A, f.support)
    return out, None


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def _emit(cfg, payload, columns, stream):
    report = _clean({"config": cfg, "result": payload})
    if cfg["format"] == "csv" and columns and isinstance(payload, dict) and "table" in payload:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns if len(columns) == len(payload["table"][0]) else
                   columns + [f"c{i}" for i in range(len(columns), len(payload["table"][0]))])
        for row in payload["table"]:
            w.writerow([repr(float(x)) for x in row])
        text = buf.getvalue()
    elif cfg["format"] == "csv" and isinstance(payload, dict) and payload.get("per_ball"):
        keys = sorted({k for row in payload["per_ball"] for k in row})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for row in payload["per_ball"]:
            w.writerow([repr(row[k]) if k in row else "" for k in keys])
        text = buf.getvalue()
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        cfg = resolve_config(argv)
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    try:
        payload, columns = HANDLERS[cfg["command"]](cfg)
    except InvalidYoungFunction as exc:
        print(json.dumps({"error": str(exc), "index": exc.index}), file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as exc:
        print(json.dumps({"error": str(exc), "condition": exc.condition}), file=sys.stderr)
        return EXIT_INVALID
    except (DomainError, ValueError, KeyError, TypeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    except Indeterminate as exc:
        _emit(cfg, {**exc.args[0], "status": "indeterminate"}, None, stream)
        return EXIT_INDETERMINATE
    except Divergent as exc:
        _emit(cfg, {**exc.args[0], "status": "divergent"}, None, stream)
        return EXIT_DIVERGENT
    _emit(cfg, payload, columns, stream)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
