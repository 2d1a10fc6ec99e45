"""
Batch runner over an instance matrix with golden-file comparison.

Golden files hold :func:`~qkm.rmatrix.oracle_r` output only; the half-twist
result is always compared live against the oracle, so a golden never
encodes the code path under test.  Reports are deterministic; wall-clock
timings live in a separate ``timings`` field.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .cartan import parse_datum
from .errors import GoldenMismatch, NotDominant, QKMError
from .irrep import build_irrep
from .report import Report
from .rmatrix import oracle_r
from .tensor import tensor_rep
from .verify import ALL_CHECKS, verify_suite

__all__ = ["InstanceSpec", "run_matrix", "run_instance", "default_matrix", "golden_dir", "load_specs"]

GOLDEN_ENV = "QKM_GOLDEN_DIR"


@dataclass
class InstanceSpec:
    datum: object
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    third: tuple[int, ...] | None = None
    depth: int | None = None
    checks: tuple[str, ...] = ALL_CHECKS
    golden: str | None = None
    name: str | None = None

    def __post_init__(self):
        self.lam = tuple(self.lam)
        self.mu = tuple(self.mu)
        self.third = None if self.third is None else tuple(self.third)
        self.checks = tuple(self.checks)
        for w in (self.lam, self.mu, self.third or ()):
            if any(c < 0 for c in w):
                raise NotDominant(f"weight {w} is not dominant")
        if self.depth is not None and self.depth < 0:
            raise ValueError("depth must be nonnegative")
        unknown = set(self.checks) - set(ALL_CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        d = self.datum if isinstance(self.datum, str) else json.dumps(self.datum)
        ws = [self.lam, self.mu] + ([self.third] if self.third else [])
        tail = "" if self.depth is None else f" depth {self.depth}"
        return f"{d} " + " x ".join("(" + ",".join(map(str, w)) + ")" for w in ws) + tail

    @classmethod
    def from_json(cls, obj: dict) -> "InstanceSpec":
        allowed = {"datum", "lambda", "mu", "third", "depth", "checks", "golden", "name"}
        extra = set(obj) - allowed
        if extra:
            raise ValueError(f"unknown instance fields: {sorted(extra)}")
        return cls(
            datum=obj["datum"],
            lam=obj["lambda"],
            mu=obj["mu"],
            third=obj.get("third"),
            depth=obj.get("depth"),
            checks=tuple(obj.get("checks", ALL_CHECKS)),
            golden=obj.get("golden"),
            name=obj.get("name"),
        )

    def to_json(self) -> dict:
        out = {"datum": self.datum, "lambda": list(self.lam), "mu": list(self.mu)}
        if self.third is not None:
            out["third"] = list(self.third)
        if self.depth is not None:
            out["depth"] = self.depth
        out["checks"] = list(self.checks)
        if self.golden is not None:
            out["golden"] = self.golden
        if self.name is not None:
            out["name"] = self.name
        return out


def load_specs(path) -> list[InstanceSpec]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise ValueError("a spec file holds a JSON array of instances")
    return [InstanceSpec.from_json(x) for x in data]


def golden_dir() -> Path | None:
    d = os.environ.get(GOLDEN_ENV)
    return Path(d) if d else None


def default_matrix() -> list[InstanceSpec]:
    """The acceptance instances: oracle pairs, axiom triples and the hyperbolic example."""
    pairs = [("A1", (1,), (1,)), ("A1", (2,), (1,)), ("A1", (2,), (2,)),
             ("A2", (1, 0), (1, 0)), ("A2", (1, 0), (0, 1)), ("B2", (1, 0), (1, 0))]
    pair_checks = ("intertwining", "oracle", "choice_independence", "theta_summands", "leading_term",
                   "find_highest")
    out = [InstanceSpec(d, l, m, checks=pair_checks, golden=_golden_name(d, l, m, None)) for d, l, m in pairs]
    out.append(InstanceSpec("A1", (1,), (1,), third=(2,), checks=ALL_CHECKS))
    out.append(InstanceSpec("A2", (1, 0), (0, 1), third=(1, 0), checks=ALL_CHECKS))
    out.append(InstanceSpec("[[2,-3],[-3,2]]", (1, 0), (1, 0), depth=4,
                            checks=("intertwining", "oracle", "choice_independence", "find_highest"),
                            golden=_golden_name("hyperbolic", (1, 0), (1, 0), 4)))
    return out


def _golden_name(d: str, lam, mu, depth) -> str:
    w = "_".join("-".join(map(str, x)) for x in (lam, mu))
    return f"oracle_{d}_{w}" + ("" if depth is None else f"_d{depth}") + ".json"


def _golden_compare(expected: dict, actual: dict) -> str | None:
    """First differing entry between two oracle exports, or None."""
    if expected.get("blocks") is None or actual.get("blocks") is None:
        return "malformed golden file"
    for key in ("datum", "lambda", "mu", "depth"):
        if expected.get(key) != actual.get(key):
            return f"{key}: expected {expected.get(key)!r}, got {actual.get(key)!r}"
    eb, ab = expected["blocks"], actual["blocks"]
    if len(eb) != len(ab):
        return f"block count: expected {len(eb)}, got {len(ab)}"
    for x, y in zip(eb, ab):
        if x["weight"] != y["weight"]:
            return f"block weight: expected {x['weight']}, got {y['weight']}"
        if x["basis"] != y["basis"]:
            return f"basis of block {x['weight']} differs"
        for r, (rx, ry) in enumerate(zip(x["matrix"], y["matrix"])):
            for c, (sx, sy) in enumerate(zip(rx, ry)):
                if sx != sy:
                    return f"block {x['weight']} entry ({r},{c}): expected {sx!r}, got {sy!r}"
        if len(x["matrix"]) != len(y["matrix"]):
            return f"block {x['weight']} shape differs"
    return None


def run_instance(spec: InstanceSpec, golden_root: str | None = None, write_golden: bool = False) -> dict:
    """Run one instance; returns its report entry plus elapsed seconds."""
    start = time.perf_counter()
    report = Report(instance=spec.label)
    try:
        cd = parse_datum(spec.datum)
        depth = spec.depth
        first = build_irrep(cd, spec.lam, depth)
        second = build_irrep(cd, spec.mu, depth)
        third = build_irrep(cd, spec.third, depth) if spec.third is not None else None
        report = verify_suite(first, second, third, checks=spec.checks, instance=spec.label)
        if spec.golden is not None:
            _golden_step(spec, first, second, golden_root, write_golden, report)
    except GoldenMismatch:
        raise
    except QKMError as exc:
        report.add("instance", [], "fail", f"{type(exc).__name__}: {exc}")
    entry = {
        "instance": spec.label,
        "spec": spec.to_json(),
        "ok": report.ok,
        "results": report.to_json(),
        "skipped_blocks": [r.to_json() for r in report.skipped],
    }
    return {"entry": entry, "seconds": time.perf_counter() - start}


def _golden_step(spec, first, second, golden_root, write_golden, report: Report) -> None:
    root = Path(golden_root) if golden_root else golden_dir()
    if root is None:
        report.skip("golden", [], f"no golden directory ({GOLDEN_ENV} unset)")
        return
    path = root / spec.golden
    T = tensor_rep(first, second)
    actual = oracle_r(T, tensor_rep(second, first)).to_json()
    if write_golden:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(actual, indent=1, sort_keys=True) + "\n")
        report.add("golden", [spec.golden], "pass", "written")
        return
    if not path.exists():
        report.skip("golden", [spec.golden], "golden file missing")
        return
    diff = _golden_compare(json.loads(path.read_text()), actual)
    if diff is not None:
        raise GoldenMismatch(f"{spec.golden}: {diff}")
    report.add("golden", [spec.golden], "pass")


def _run_packed(args):
    return run_instance(*args)


def run_matrix(specs: list[InstanceSpec], golden_root: str | None = None, jobs: int = 1,
               write_golden: bool = False) -> dict:
    """Conformance report over ``specs``, ordered by spec order whatever the completion order."""
    work = [(s, None if golden_root is None else str(golden_root), write_golden) for s in specs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_run_packed, work))
    else:
        outs = [_run_packed(w) for w in work]
    instances = [o["entry"] for o in outs]
    return {
        "ok": all(e["ok"] for e in instances),
        "instances": instances,
        "timings": {e["instance"]: round(o["seconds"], 3) for e, o in zip(instances, outs)},
    }


def report_json(report: dict, with_timings: bool = True) -> str:
    body = dict(report) if with_timings else {k: v for k, v in report.items() if k != "timings"}
    return json.dumps(body, indent=1, sort_keys=True)
