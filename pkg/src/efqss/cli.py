"""Command-line front end: ``efqss example | run | attack | analyze``.

Exit codes: 0 success, 1 verification failure in an honest run (or a golden
mismatch), 2 configuration error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import secrets as _sysrand
import sys
from pathlib import Path
from typing import Any

import jsonschema

from . import __version__
from .adversary import AttackKind, AttackScenario, estimate_detection_rate
from .analysis import (
    COMPARISON_TABLE,
    mutual_information_table,
    qubit_efficiency,
    theoretical_detection_rate,
)
from .errors import BudgetError, ConfigError, QSSError
from .protocol import Mode, ProtocolConfig, Verdict, run_round

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3
_MAX_SAFE_INT = 2**53

_INT_MAP = {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "integer"}}}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "efqss run configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "d": {"type": "integer", "minimum": 2},
        "t": {"type": "integer", "minimum": 1},
        "n": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "xs": {"type": "array", "items": {"type": "integer"}},
        "active_set": {"type": "array", "items": {"type": "integer"}},
        "mode": {"enum": [m.value for m in Mode]},
        "backend": {"enum": ["orbit", "statevector"]},
        "seed": {"type": "integer", "minimum": 0},
        "secrets": {"type": "array", "items": {"type": "integer"}},
        "polynomials": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "randoms": _INT_MAP,
        "attack": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"type": "string"},
                "actor": {"type": ["integer", "string", "null"]},
                "delta": {"type": "integer"},
                "hop": {"type": "integer", "minimum": 0},
                "exclude_true": {"type": "boolean"},
            },
        },
        "trials": {"type": "integer", "minimum": 1},
        "engine": {"enum": ["auto", "batch", "scalar"]},
        "out": {"type": "string"},
    },
}

TRANSCRIPT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "efqss round transcript",
    "type": "object",
    "required": [
        "config", "shares", "randoms", "components", "published_R",
        "recovered", "verdict", "attack", "seed", "version",
    ],
    "properties": {
        "config": {
            "type": "object",
            "required": ["d", "t", "n", "k", "xs", "active_set", "mode"],
        },
        "shares": _INT_MAP,
        "randoms": _INT_MAP,
        "components": _INT_MAP,
        "published_R": {"type": "array", "items": {"type": "integer"}},
        "recovered": _INT_MAP,
        "verdict": {"enum": [v.value for v in Verdict]},
        "attack": {"type": ["object", "null"]},
        "seed": {"type": ["integer", "string", "null"]},
        "version": {"type": "string"},
        "fourier_exponent_raw": {"type": ["array", "null"]},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "efqss analysis report",
    "type": "object",
    "required": ["kind", "seed", "version"],
    "properties": {
        "kind": {"enum": ["attack", "analysis"]},
        "seed": {"type": ["integer", "string", "null"]},
        "version": {"type": "string"},
        "detection": {"type": "object", "required": ["trials", "detected", "rate", "theoretical"]},
        "mutual_information": {"type": "array"},
        "detection_rate": {"type": "object"},
        "efficiency": {"type": "object"},
    },
}

GOLDEN = {
    "shares": [8, 3, 15, 11, 4, 7],
    "components": [22, 9, 3, 6],
    "dealer_exponent": 20,
    "fourier_exponent": 88,
    "published_R": 19,
    "recovered": 14,
}

GOLDEN_SETUP = {
    "d": 23,
    "t": 4,
    "n": 6,
    "k": 1,
    "xs": [2, 3, 4, 5, 6, 7],
    "active_set": [1, 3, 4, 6],
    "mode": "Basic",
    "secrets": [14],
    "polynomials": [[17, 5, 12, 6]],
    "randoms": {"1": [0], "3": [3], "4": [16], "6": [9]},
}


def _safe_ints(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= _MAX_SAFE_INT else obj
    if isinstance(obj, dict):
        return {k: _safe_ints(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_safe_ints(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_safe_ints(obj), indent=2, ensure_ascii=False) + "\n"


def emit(doc: dict, schema: dict, out: str | None, to_stdout: bool) -> None:
    jsonschema.validate(doc, schema)
    text = dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    if to_stdout:
        sys.stdout.write(text)


def _int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config {path}: {exc.message}") from exc
    return data


def _merge(cfg: dict, args: argparse.Namespace, keys: list[str]) -> dict:
    merged = dict(cfg)
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _seed(value: int | None) -> int:
    if value is None:
        value = _sysrand.randbits(63)
        print(f"seed: {value}", file=sys.stderr)
    return value


def _default_mode(k: int) -> str:
    return Mode.VERIFIABLE.value if k >= 2 else Mode.BASIC.value


def _protocol_config(c: dict, seed: int) -> ProtocolConfig:
    for key in ("d", "t", "n"):
        if key not in c:
            raise ConfigError(f"missing required setting {key!r}")
    k = c.get("k", 1)
    return ProtocolConfig(
        d=c["d"],
        t=c["t"],
        n=c["n"],
        k=k,
        xs=c.get("xs"),
        active_set=c.get("active_set"),
        mode=c.get("mode") or _default_mode(k),
        seed=seed,
        backend=c.get("backend", "orbit"),
    )


def _golden_check(transcript, golden: dict) -> tuple[str, Any, Any] | None:
    d = transcript.config.d.d
    actual = {
        "shares": [transcript.shares[h][0] for h in sorted(transcript.shares)],
        "components": [transcript.components[h][0] for h in transcript.config.active_set],
        "dealer_exponent": transcript.channel_trace[0][0][0],
        "fourier_exponent": transcript.fourier_exponent_raw[0],
        "published_R": transcript.published_R[0],
        "recovered": transcript.recovered[transcript.config.active_set[0]][0],
    }
    if actual["fourier_exponent"] % d != actual["published_R"]:
        return ("fourier_exponent", actual["published_R"], actual["fourier_exponent"] % d)
    for key, expected in golden.items():
        if key not in actual:
            raise ConfigError(f"golden file names unknown field {key!r}")
        if actual[key] != expected:
            return key, expected, actual[key]
    return None


def run_golden_example():
    setup = GOLDEN_SETUP
    config = ProtocolConfig(
        d=setup["d"], t=setup["t"], n=setup["n"], k=setup["k"], xs=setup["xs"],
        active_set=setup["active_set"], mode=setup["mode"], seed=0,
    )
    randoms = {int(h): v for h, v in setup["randoms"].items()}
    return run_round(config, setup["secrets"], polynomials=setup["polynomials"], randoms=randoms)


def cmd_example(args) -> int:
    golden = dict(GOLDEN)
    if args.golden:
        try:
            golden = json.loads(Path(args.golden).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read golden file: {exc}") from exc
    tr = run_golden_example()
    doc = tr.to_dict()
    emit(doc, TRANSCRIPT_SCHEMA, args.out, args.json)
    if not args.json:
        print(f"(4,6) threshold over GF(23), active holders {list(tr.config.active_set)}")
        print(f"shares      {[tr.shares[h][0] for h in sorted(tr.shares)]}")
        print(f"components  {[tr.components[h][0] for h in tr.config.active_set]}")
        print(f"exponent    {tr.fourier_exponent_raw[0]} = {tr.fourier_exponent_raw[0] % 23} mod 23")
        print(f"R = {tr.published_R[0]}, S = {tr.recovered[tr.config.active_set[0]][0]}")
    mismatch = _golden_check(tr, golden)
    if mismatch:
        field, expected, got = mismatch
        print(f"golden mismatch in {field}: expected {expected}, got {got}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _merge(_load_config(args.config), args, ["d", "t", "n", "k", "mode", "backend", "seed", "out"])
    for key, attr in (("secrets", "secrets"), ("xs", "xs"), ("active_set", "active")):
        val = _int_list(getattr(args, attr))
        if val is not None:
            cfg[key] = val
    seed = _seed(cfg.get("seed"))
    config = _protocol_config(cfg, seed)
    secrets = cfg.get("secrets")
    if secrets is None:
        raise ConfigError("no secrets given")
    attack = None
    if "attack" in cfg:
        a = dict(cfg["attack"])
        attack = AttackScenario(AttackKind.parse(a.pop("kind")), **a)
    randoms = {int(h): v for h, v in cfg["randoms"].items()} if "randoms" in cfg else None
    tr = run_round(config, secrets, attack, polynomials=cfg.get("polynomials"), randoms=randoms)
    emit(tr.to_dict(), TRANSCRIPT_SCHEMA, cfg.get("out"), args.json)
    if not args.json:
        print(f"seed {seed}  mode {config.mode.value}  verdict {tr.verdict.value}")
        print(f"published R {tr.published_R}")
        for h in config.active_set:
            print(f"holder {h} recovered {tr.recovered[h]}")
        print(f"secrets {tr.secrets}")
    if attack is None and tr.verdict is Verdict.FAIL:
        return EXIT_FAIL
    return EXIT_OK


def cmd_attack(args) -> int:
    cfg = _merge(
        _load_config(args.config), args,
        ["d", "t", "n", "k", "seed", "trials", "engine", "out"],
    )
    active = _int_list(args.active)
    if active is not None:
        cfg["active_set"] = active
    xs = _int_list(args.xs)
    if xs is not None:
        cfg["xs"] = xs
    attack = dict(cfg.get("attack", {}))
    for key in ("kind", "actor", "delta", "hop"):
        val = getattr(args, key, None)
        if val is not None:
            attack[key] = val
    if args.exclude_true:
        attack["exclude_true"] = True
    if "kind" not in attack:
        raise ConfigError("attack kind is required")
    cfg.setdefault("k", 2)
    cfg["mode"] = Mode.VERIFIABLE.value
    seed = _seed(cfg.get("seed"))
    config = _protocol_config(cfg, seed)
    kind = AttackKind.parse(attack.pop("kind"))
    actor = attack.pop("actor", None)
    if isinstance(actor, str) and actor.isdigit():
        actor = int(actor)
    scenario = AttackScenario(kind, actor=actor, **attack)
    stats = estimate_detection_rate(
        scenario, config, cfg.get("trials", 10_000), config.rng(), cfg.get("engine", "auto")
    )
    doc = {
        "kind": "attack",
        "config": config.to_dict(),
        "attack": scenario.bind(config).to_dict(),
        "detection": stats.to_dict(),
        "seed": seed,
        "version": __version__,
    }
    emit(doc, REPORT_SCHEMA, cfg.get("out"), args.json)
    if not args.json:
        print(
            f"{kind.value}: detected {stats.detected}/{stats.trials} = {float(stats.rate):.5f} "
            f"(theory {float(stats.theoretical):.5f} +/- {stats.binomial_3sigma_halfwidth:.5f} at 3 sigma)"
        )
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = _merge(_load_config(args.config), args, ["d", "t", "n", "k", "out"])
    run_all = not (args.mutual_info or args.detection_rate or args.efficiency)
    doc: dict = {"kind": "analysis"}
    lines = []
    if args.mutual_info or run_all:
        if "d" not in cfg or "t" not in cfg:
            raise ConfigError("--mutual-info needs --d and --t")
        reports = mutual_information_table(cfg["d"], cfg["t"], include_published=args.include_published)
        doc["mutual_information"] = [r.to_dict() for r in reports]
        for r in reports:
            lines.append(
                f"known={r.known_shares}: H(S)={r.H_S:.6f} H(S|shares)={r.H_S_given_shares:.6f} "
                f"I={r.mutual_information:.6f} bits ({r.enumeration_size} cases)"
            )
    if args.detection_rate or run_all:
        if "d" not in cfg:
            raise ConfigError("--detection-rate needs --d")
        rate = theoretical_detection_rate(cfg["d"])
        doc["detection_rate"] = {"d": cfg["d"], "rate": f"{rate.numerator}/{rate.denominator}"}
        lines.append(f"detection rate at d={cfg['d']}: {rate}")
    if args.efficiency or run_all:
        k, n = cfg.get("k", 2), cfg.get("n", 1)
        eff = {
            "this_scheme": qubit_efficiency("this_scheme", k=k),
            "hbb": qubit_efficiency("hbb"),
            "schmid": qubit_efficiency("schmid"),
            "dicke": qubit_efficiency("dicke", n=n),
        }
        doc["efficiency"] = {
            "k": k, "n": n,
            "values": {key: f"{v.numerator}/{v.denominator}" for key, v in eff.items()},
            "table": COMPARISON_TABLE,
        }
        lines.append("qubit efficiency " + ", ".join(f"{key}={v}" for key, v in eff.items()))
    doc["seed"] = None
    doc["version"] = __version__
    emit(doc, REPORT_SCHEMA, cfg.get("out"), args.json)
    if not args.json:
        print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="efqss", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"efqss {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, protocol=True):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--out", help="write the JSON document here")
        p.add_argument("--json", action="store_true", help="print JSON to stdout")
        if protocol:
            p.add_argument("--d", type=int)
            p.add_argument("--t", type=int)
            p.add_argument("--n", type=int)
            p.add_argument("--k", type=int)
            p.add_argument("--xs", help="comma-separated evaluation points")
            p.add_argument("--active", help="comma-separated holder ids in communication order")
            p.add_argument("--seed", type=int)

    p = sub.add_parser("example", help="replay the (4,6) worked example over GF(23)")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.add_argument("--golden", help="JSON file of expected values to check against")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("run", help="run one honest (or configured) round")
    common(p)
    p.add_argument("--secrets", help="comma-separated secrets (k-1 in verifiable mode)")
    p.add_argument("--mode", choices=[m.value for m in Mode if m is not Mode.UNKNOWN_STATE])
    p.add_argument("--backend", choices=["orbit", "statevector"])
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("attack", help="Monte Carlo detection rate of a cheating scenario")
    common(p)
    p.add_argument("--kind", help="fake-measurement | fake-random | intercept-resend | structured-shift")
    p.add_argument("--actor")
    p.add_argument("--delta", type=int)
    p.add_argument("--hop", type=int)
    p.add_argument("--exclude-true", action="store_true")
    p.add_argument("--trials", type=int)
    p.add_argument("--engine", choices=["auto", "batch", "scalar"])
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("analyze", help="exact entropy and closed-form figures")
    common(p)
    p.add_argument("--mutual-info", action="store_true")
    p.add_argument("--include-published", action="store_true")
    p.add_argument("--detection-rate", action="store_true")
    p.add_argument("--efficiency", action="store_true")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, QSSError, jsonschema.ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
