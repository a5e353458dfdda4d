"""Run every check over a zoo and assemble a deterministic JSON report."""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import checks, mutants
from .cache import digest_of
from .zoo import Budgets, _instance

INSTANCE_CHECKS = (
    ("lemma_rgamma_rhom", checks.check_lemma_rgamma_rhom),
    ("lemma_llambda", checks.check_lemma_llambda),
    ("theorem_main", checks.check_theorem_main),
    ("theorem_main2", checks.check_theorem_main2),
    ("cor_llambda_A", checks.check_cor_llambda_A),
    ("prop_eval_1", lambda z: checks.check_prop_eval(z, 1)),
    ("prop_eval_2", lambda z: checks.check_prop_eval(z, 2)),
    ("injdim_reduction", checks.check_injdim_reduction),
    ("flatdim_reduction", checks.check_flatdim_reduction),
    ("prop_adjunction", checks.check_prop_adjunction),
    ("hom_identity", checks.check_hom_identity),
    ("telescope_model", checks.check_telescope_model),
    ("classical_oracle", checks.check_classical_oracle),
    ("window_stability", checks.check_window_stability),
    ("snf_sample", checks.check_snf_sample),
)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    count: int = 60
    budgets: Budgets = field(default_factory=Budgets)
    module_theorems: bool = True
    only: tuple = ()  # restrict to these check names (empty: all)
    jobs: int = 1  # worker processes; does not affect the report

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "budgets": asdict(self.budgets),
            "module_theorems": self.module_theorems,
            "only": list(self.only),
        }


@dataclass
class SuiteResult:
    config: SuiteConfig
    reports: list

    @property
    def failed(self) -> bool:
        return any(r.verdict.kind == "fail" for r in self.reports)

    def summary(self) -> dict:
        out: dict = {}
        for r in self.reports:
            out.setdefault(r.name, Counter())[r.verdict.kind] += 1
        return {name: {k: c.get(k, 0) for k in ("pass", "fail", "skipped")} for name, c in out.items()}

    def to_json(self) -> dict:
        body = {
            "config": self.config.to_json(),
            "reports": [r.to_json() for r in self.reports],
            "summary": self.summary(),
        }
        body["digest"] = digest_of(body)
        return body

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"

    def describe(self) -> str:
        lines = []
        for name, c in self.summary().items():
            total = sum(c.values())
            lines.append(f"{name:20s} pass {c['pass']:3d}  fail {c['fail']:3d}  skipped {c['skipped']:3d}  / {total}")
        lines.append("FAIL" if self.failed else "OK")
        return "\n".join(lines)


def _instance_job(seed: int, index: int, budgets: Budgets, only: tuple, injected: tuple = ()) -> list:
    """Every selected check on instance ``index`` (one unit of the work queue)."""
    z = _instance(seed, index, budgets)
    selected = [fn for n, fn in INSTANCE_CHECKS if not only or n in only]
    if injected:
        with mutants.inject(*injected):
            return [fn(z) for fn in selected]
    return [fn(z) for fn in selected]


def run_suite(config: SuiteConfig | None = None, progress=None) -> SuiteResult:
    """All instance checks on ``generate_zoo(seed, count)``, then module-level checks.

    With ``jobs > 1`` instances are farmed out to worker processes; the
    reports are merged in instance order, so the output is unchanged.
    """
    config = config or SuiteConfig()
    only = tuple(config.only)
    reports = []
    if config.jobs > 1 and config.count > 1:
        injected = tuple(m for m in mutants.KNOWN if mutants.active(m))
        with ProcessPoolExecutor(config.jobs) as pool:
            futures = [pool.submit(_instance_job, config.seed, i, config.budgets, only, injected) for i in range(config.count)]
            for i, fut in enumerate(futures):
                reports.extend(fut.result())
                if progress:
                    progress(i)
    else:
        for i in range(config.count):
            reports.extend(_instance_job(config.seed, i, config.budgets, only))
            if progress:
                progress(i)
    if config.module_theorems and config.count > 0 and (not config.only or "module_theorems" in config.only):
        for R, a in checks.module_theorem_cases():
            reports.append(checks.check_module_theorems(R, a, config.budgets.cutoff, config.budgets.precision))
    return SuiteResult(config, reports)
