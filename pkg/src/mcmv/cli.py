"""Batch front-end: read an instance file, run the pipelines, emit a report.

Config files are flat key-value text (one key per line, strings quoted,
lists bracketed); reports are structured text records with a stable field
order, optionally mirrored as a JSON tree.  Exit code 0 means every
requested check passed or produced its documented refusal; 1 flags a failed
check; 2 flags an invalid input with a machine-readable code.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import verify
from .classify import (
    CaseLabel,
    Kind,
    ValidationError,
    classify,
    fgi_index,
    in_sp_p2,
    q_class,
    validate,
    zce_decompose,
)
from .closure import closure_gens, conductor_gens, leading_slot_coverage
from .tower import Instance
from .zpoly import PolyParseError, parse, to_string

ALL_COMMANDS = ("classify", "closure", "conductor", "resolution", "mcm", "claims")
DEFAULT_COMMANDS = ("classify", "closure", "resolution")


class ConfigError(ValueError):
    def __init__(self, msg, code="CONFIG_ERROR"):
        super().__init__(msg)
        self.code = code


@dataclass
class JobConfig:
    p: int
    varnames: tuple[str, ...]
    f_text: str
    g_text: str
    commands: tuple[str, ...] = DEFAULT_COMMANDS
    oracle: Optional[tuple[int, int]] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if not self.varnames:
            raise ConfigError("vars must be nonempty")
        bad = [c for c in self.commands if c not in ALL_COMMANDS + ("all",)]
        if bad:
            raise ConfigError(f"unknown commands: {bad}")
        if "all" in self.commands:
            self.commands = ALL_COMMANDS


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith('"'):
        if not raw.endswith('"') or len(raw) < 2:
            raise ConfigError(f"unterminated string: {raw}")
        return raw[1:-1]
    if raw.startswith("["):
        if not raw.endswith("]"):
            raise ConfigError(f"unterminated list: {raw}")
        inner = raw[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(item) for item in inner.split(",")]
    return raw


def parse_config(text: str) -> JobConfig:
    fields: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, raw = line.partition("=")
        fields[key.strip()] = _parse_value(raw)
    known = {"p", "vars", "f", "g", "commands", "oracle", "seed"}
    unknown = set(fields) - known
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    for req in ("p", "vars", "f", "g"):
        if req not in fields:
            raise ConfigError(f"missing key {req!r}")
    kwargs = dict(
        p=int(fields["p"]),
        varnames=tuple(fields["vars"]),
        f_text=fields["f"],
        g_text=fields["g"],
    )
    if "commands" in fields:
        kwargs["commands"] = tuple(fields["commands"])
    if "oracle" in fields:
        k, n = fields["oracle"]
        kwargs["oracle"] = (int(k), int(n))
    if "seed" in fields:
        kwargs["seed"] = int(fields["seed"])
    return JobConfig(**kwargs)


EXAMPLE_CONFIGS = {
    "1": (
        "p = 3\n"
        "vars = [X, Y]\n"
        'f = "-5*X^3+9"\n'
        'g = "-2*Y^3+9"\n'
        "commands = [classify, closure, resolution]\n"
    ),
    "2": (
        "p = 3\n"
        "vars = [X, Y]\n"
        'f = "-2*X^6+9"\n'
        'g = "4*X^3*Y^3+9"\n'
        "commands = [classify, closure, resolution]\n"
    ),
}


# ----- report ------------------------------------------------------------------


@dataclass
class Report:
    tree: dict = field(default_factory=dict)
    exit_code: int = 0

    def section(self, name: str) -> dict:
        return self.tree.setdefault(name, {})

    def to_text(self) -> str:
        lines = ["mcmv report"]

        def emit(prefix, node):
            for key, val in node.items():
                if isinstance(val, dict):
                    lines.append(f"{prefix}{key}:")
                    emit(prefix + "  ", val)
                elif isinstance(val, (list, tuple)):
                    lines.append(f"{prefix}{key}: [{', '.join(str(v) for v in val)}]")
                else:
                    lines.append(f"{prefix}{key}: {val}")

        emit("", self.tree)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.tree, indent=2, default=str)


def _fmt_poly(inst: Instance, q) -> str:
    return f'"{to_string(q, inst.varnames)}"'


def run(config: JobConfig) -> Report:
    """Execute the requested commands in dependency order."""
    report = Report()
    t_start = time.monotonic()
    timings: dict[str, float] = {}

    sec = report.section("instance")
    sec["p"] = config.p
    sec["vars"] = list(config.varnames)
    sec["f"] = f'"{config.f_text}"'
    sec["g"] = f'"{config.g_text}"'
    if config.seed is not None:
        sec["seed"] = config.seed

    f = parse(config.f_text, config.varnames)
    g = parse(config.g_text, config.varnames)

    t0 = time.monotonic()
    inst = validate(config.p, f, g, config.varnames)
    case = classify(inst)
    timings["classify_s"] = time.monotonic() - t0

    sec["h1"] = _fmt_poly(inst, inst.h1)
    sec["h2"] = _fmt_poly(inst, inst.h2)
    sec["a"] = _fmt_poly(inst, inst.a)
    sec["b"] = _fmt_poly(inst, inst.b)

    queries: list = []
    with verify.record_memberships() as queries:
        _run_commands(report, inst, case, config, timings)

    if config.oracle is not None:
        k, cut = config.oracle
        t0 = time.monotonic()
        rep = verify.replay_against_oracle(queries, k=k, degree_cut=cut)
        timings["oracle_s"] = time.monotonic() - t0
        sec = report.section("oracle_consistency")
        sec["k"] = k
        sec["degree_cut"] = cut
        sec["checked"] = rep.checked
        sec["status"] = "ok" if rep.ok else "CONTRADICTION"
        if not rep.ok:
            sec["failures"] = rep.failures
            report.exit_code = max(report.exit_code, 1)

    stats = report.section("engine")
    stats["membership_queries"] = len(queries)
    timings["total_s"] = time.monotonic() - t_start
    report.section("timings").update(
        {k: f"{v:.3f}" for k, v in timings.items()}
    )
    return report


def _status(ok: bool) -> str:
    return "ok" if ok else "FAILED"


def _run_commands(report: Report, inst: Instance, case: CaseLabel,
                  config: JobConfig, timings: dict) -> None:
    if "classify" in config.commands:
        sec = report.section("classification")
        sec["label"] = str(case)
        sec["f_in_deeper_stratum"] = in_sp_p2(inst, "f")
        sec["g_in_deeper_stratum"] = in_sp_p2(inst, "g")
        if not in_sp_p2(inst, "f") and not in_sp_p2(inst, "g"):
            idx = fgi_index(inst)
            sec["fg_index"] = idx if idx is not None else "none"
            zce = zce_decompose(inst)
            sec["z"] = _fmt_poly(inst, zce.z)
            sec["c"] = _fmt_poly(inst, zce.c)
            sec["e"] = _fmt_poly(inst, zce.e)
            sec["q_class"] = q_class(inst).value

    gset = None
    if {"closure", "conductor", "resolution", "mcm", "claims"} & set(config.commands):
        gset = closure_gens(inst, case)

    if "closure" in config.commands:
        t0 = time.monotonic()
        sec = report.section("closure")
        sec["generators"] = len(gset.gens)
        gens_sec = sec.setdefault("generating_set", {})
        for label, x in zip(gset.provenance, gset.gens.gens):
            gens_sec[label] = x.render()
        sec["leading_slot_coverage"] = leading_slot_coverage(gset)
        rc = verify.verify_ring_closure(gset.gens)
        sec["ring_closure"] = _status(rc.ok)
        sec["products_checked"] = rc.checked
        if rc.failures:
            sec["ring_closure_failures"] = rc.failures
        fr = verify.verify_free(gset.gens)
        sec["minimal_generators"] = fr.nu
        sec["fraction_field_rank"] = fr.rank
        sec["s_free"] = fr.free
        expected_free = case.is_cm()
        ok = rc.ok and (fr.free == expected_free) and fr.rank == inst.dim
        sec["status"] = _status(ok)
        if not ok:
            report.exit_code = max(report.exit_code, 1)
        timings["closure_s"] = time.monotonic() - t0

    if "conductor" in config.commands:
        t0 = time.monotonic()
        sec = report.section("conductor")
        if case.kind in (Kind.CM_NotNormal_Both, Kind.CM_NotNormal_One):
            sec["status"] = "refused"
            sec["code"] = "NO_STATED_CONDUCTOR"
        else:
            cond = conductor_gens(inst, case)
            sec["ideal"] = cond.name
            sec["a_generators"] = [x.render() for x in cond.a_gens]
            rep = verify.verify_conductor(inst, case)
            sec["products_checked"] = rep.checked
            sec["status"] = _status(rep.ok)
            if rep.failures:
                sec["failures"] = rep.failures
            if not rep.ok:
                report.exit_code = max(report.exit_code, 1)
        timings["conductor_s"] = time.monotonic() - t0

    if "resolution" in config.commands:
        t0 = time.monotonic()
        sec = report.section("resolution")
        if case.has_epsilon():
            cert = verify.resolution(inst, case)
            sec["nu"] = cert.nu
            sec["pd"] = cert.pd
            if cert.psi is not None:
                sec["psi"] = [
                    f'"{to_string(q, inst.varnames)}"' for q in cert.psi
                ]
                sec["zero_block_start"] = cert.zero_block_start
                sec["zero_block"] = _status(cert.zero_block_ok)
                sec["entries_in_max_ideal"] = cert.entries_in_max_ideal
                sec["kernel_rank_one"] = cert.kernel_rank_one
                sec["order_direction"] = cert.order_direction
            ok = (cert.pd == 1 and cert.zero_block_ok and
                  bool(cert.kernel_rank_one)) or cert.pd == 0
        else:
            fr = verify.verify_free(gset.gens)
            sec["nu"] = fr.nu
            sec["pd"] = 0 if fr.free else "unknown"
            sec["note"] = "free closure: trivial resolution"
            ok = fr.free
        sec["status"] = _status(ok)
        if not ok:
            report.exit_code = max(report.exit_code, 1)
        timings["resolution_s"] = time.monotonic() - t0

    if "mcm" in config.commands:
        t0 = time.monotonic()
        sec = report.section("mcm")
        if case.kind is Kind.NotCM_GradeTwoOpen:
            sec["status"] = "refused"
            sec["code"] = "OPEN_CASE"
        else:
            try:
                cert = verify.mcm_certificate(inst, case)
            except (verify.IntersectionRankMismatch,
                    verify.StabilityFailure) as exc:
                sec["status"] = "FAILED"
                sec["error"] = str(exc)
                report.exit_code = max(report.exit_code, 1)
            else:
                sec["construction"] = cert.provenance["construction"]
                sec["basis_size"] = len(cert.basis)
                basis_sec = sec.setdefault("basis", {})
                for idx, b in enumerate(cert.basis):
                    basis_sec[f"m{idx}"] = b.render()
                sec["determinant_nonzero"] = cert.determinant_nonzero
                sec["in_f1"] = cert.in_f1
                sec["in_f2"] = cert.in_f2
                sec["stability_products"] = len(cert.stability)
                ok = (cert.determinant_nonzero and cert.in_f1 and cert.in_f2
                      and len(cert.basis) == inst.dim)
                sec["status"] = _status(ok)
                if not ok:
                    report.exit_code = max(report.exit_code, 1)
        timings["mcm_s"] = time.monotonic() - t0

    if "claims" in config.commands:
        t0 = time.monotonic()
        sec = report.section("claims")
        if case.kind is not Kind.NotCM_GradeThree:
            sec["status"] = "refused"
            sec["code"] = "NOT_GRADE_THREE"
        else:
            rep = verify.verify_theorem_claims(inst, case)
            sec["checked"] = rep.checked
            sec["status"] = _status(rep.ok)
            if rep.failures:
                sec["failures"] = rep.failures
            if not rep.ok:
                report.exit_code = max(report.exit_code, 1)
        timings["claims_s"] = time.monotonic() - t0


# ----- entry point ----------------------------------------------------------------


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mcmv",
        description="classify and certify integral closures of biradical "
                    "extensions over a p-local polynomial base",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a job described by a config file")
    runp.add_argument("config", help="path to the config file")
    runp.add_argument("--out", help="write the text report here")
    runp.add_argument("--json", dest="json_out", help="write the JSON tree here")
    runp.add_argument("--commands", nargs="+", help="override the command list")
    runp.add_argument("--oracle", help="k,N override for the truncation oracle")
    runp.add_argument("--seed", type=int, help="echoed into the report")

    exp = sub.add_parser("example", help="materialize a bundled example config")
    exp.add_argument("which", choices=["1", "2"])
    exp.add_argument("--out", help="target path (default example<N>.cfg)")

    args = parser.parse_args(argv)

    if args.command == "example":
        path = args.out or f"example{args.which}.cfg"
        with open(path, "w") as fh:
            fh.write(EXAMPLE_CONFIGS[args.which])
        print(path)
        return 0

    try:
        with open(args.config) as fh:
            config = parse_config(fh.read())
        if args.commands:
            config = JobConfig(
                p=config.p, varnames=config.varnames,
                f_text=config.f_text, g_text=config.g_text,
                commands=tuple(args.commands), oracle=config.oracle,
                seed=config.seed,
            )
        if args.oracle:
            k, n = args.oracle.split(",")
            config.oracle = (int(k), int(n))
        if args.seed is not None:
            config.seed = args.seed
        report = run(config)
    except ConfigError as exc:
        print(f"error {exc.code}: {exc}", file=sys.stderr)
        return 2
    except PolyParseError as exc:
        print(f"error PARSE_ERROR: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error {exc.code}: {exc}", file=sys.stderr)
        return 2

    text = report.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(report.to_json())
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
