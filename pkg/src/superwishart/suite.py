"""Named verification tasks and the default grid.

A task is an identity id plus keyword parameters.  Running it yields one
:class:`VerificationReport`.  Tasks are plain data so they can be shipped to
worker processes, and results are sorted afterwards, so the output does not
depend on scheduling.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ensembles import WishartSpec
from .identities import checks
from .identities.symmetric import SymmetricPolynomial, partitions
from .integrator import QuadratureSpec, Superfunction, corollary2_check
from .report import VerificationReport, combine

IDENTITIES = (
    "bessel_eigen",
    "calibration",
    "circular",
    "constants",
    "corollary2",
    "duality",
    "equivalence61",
    "gaussian_vector",
    "ingham_siegel",
    "laguerre_selberg",
    "s_operator",
    "split",
    "theorem1",
    "theorem2",
    "theorem4",
)


@dataclass(frozen=True)
class Task:
    identity_id: str
    params: tuple = ()

    @classmethod
    def make(cls, identity_id: str, **params):
        if identity_id not in IDENTITIES:
            raise ValueError(f"unknown identity {identity_id!r}")
        return cls(identity_id, tuple(sorted(params.items())))

    @property
    def kwargs(self) -> dict:
        return dict(self.params)


def _spec(p, b=0):
    return WishartSpec(p["beta"], p["a"], p.get("b", b), p["c"], p["d"])


def _quad(p):
    return QuadratureSpec(
        scheme=p.get("scheme", "gauss_hermite_tensor"),
        nodes_per_dim=p.get("nodes"),
        mc_samples=p.get("samples", 200_000),
        seed=p.get("seed", 0),
        epsilon=p.get("eps", 1.0),
        wick_angle=p.get("psi", 0.0),
    )


def _tol(p, default):
    return p.get("tol") if p.get("tol") is not None else default


def _duality(p):
    return checks.duality_suite(_spec(p), p.get("m_max", 4), p.get("draws", 100), p.get("seed", 0), _tol(p, 1e-12))


def _calibration(p):
    return checks.calibration_check(WishartSpec(p["beta"], p["a"], 0, 0, p["d"]))


def _gaussian_vector(p):
    rep = checks.gaussian_vector_check(WishartSpec(p["beta"], p["a"], 0, p["c"], 0), p.get("seed", 0),
                                       tol=_tol(p, 1e-8))
    return rep


def _ingham(p):
    return checks.ingham_siegel_scalar(p["a"], p["rho"], tol=_tol(p, 1e-4))


def _circular(p):
    return checks.circular_selberg_check(p["d"], p["beta"], p["a"], p.get("nodes") or 256,
                                         p.get("form", "modulus"), _tol(p, 1e-10))


def _laguerre(p):
    return checks.laguerre_selberg_check(p["d"], p["beta_tilde"], p["xi"], tol=_tol(p, 1e-8))


def _bessel(p):
    rng = np.random.default_rng(p.get("seed", 0))
    d, bo = p["d"], p["beta_over"]
    parts = []
    for _ in range(p.get("draws", 20)):
        r = rng.uniform(-2, 2, d)
        s = rng.uniform(-2, 2, d)
        parts.append(checks.bessel_eigen_check(d, bo, r, s, p.get("tol")))
    out = combine("bessel_eigen", parts, label=parts[0].label, seed=p.get("seed", 0))
    out.d = d
    return out


def _equivalence(p):
    spec = _spec(p)
    parts = [
        checks.identity61_check(spec, SymmetricPolynomial.monomial(lam, spec.d), _tol(p, 1e-8))
        for deg in range(p.get("max_degree", 6) + 1)
        for lam in partitions(deg, spec.d)
    ]
    kind = "exact" if spec.beta in (1, 2) else "numeric"
    return combine("equivalence61", parts, label=f"{kind} monomials deg<={p.get('max_degree', 6)}", spec=spec)


def _constants(p):
    return checks.constants_check(_spec(p), _tol(p, 1e-12))


def _theorem1(p):
    F = Superfunction.named(p.get("F", "one"))
    return checks.theorem1_check(_spec(p), F, p.get("eps", 1.0), _quad(p), _tol(p, 2e-4))


def _theorem2(p):
    F = Superfunction.named(p.get("F", "one"))
    default = 2e-4 if p["beta"] in (1, 2) else 1e-3
    return checks.theorem2_check(_spec(p), F, p.get("eps", 1.0), _quad(p), _tol(p, default))


def _corollary2(p):
    F = Superfunction.named(p.get("F", "exp"))
    return corollary2_check(_spec(p), F, _quad(p), _tol(p, 1e-4))


def _theorem4(p):
    F = Superfunction.named(p.get("F", "one"))
    q = _quad({**p, "psi": p.get("psi", math.pi)})
    return checks.theorem4_check(_spec(p), p.get("e", 1), F, p.get("eps", 1.0), q.wick_angle, q, _tol(p, 1e-3))


def _s_operator(p):
    return checks.s_operator_check(p.get("draws", 100), p.get("seed", 0))


def _split(p):
    return checks.split_check(_spec(p), p.get("draws", 100), p.get("seed", 0))


RUNNERS = {
    "bessel_eigen": _bessel,
    "calibration": _calibration,
    "circular": _circular,
    "constants": _constants,
    "corollary2": _corollary2,
    "duality": _duality,
    "equivalence61": _equivalence,
    "gaussian_vector": _gaussian_vector,
    "ingham_siegel": _ingham,
    "laguerre_selberg": _laguerre,
    "s_operator": _s_operator,
    "split": _split,
    "theorem1": _theorem1,
    "theorem2": _theorem2,
    "theorem4": _theorem4,
}


def run_task(task: Task, timings: bool = False) -> VerificationReport:
    t0 = time.perf_counter()
    rep = RUNNERS[task.identity_id](task.kwargs)
    rep.identity_id = task.identity_id
    if rep.seed is None and "seed" in task.kwargs:
        rep.seed = task.kwargs["seed"]
    rep.runtime_ms = int(round(1000 * (time.perf_counter() - t0))) if timings else 0
    return rep


def _sort_key(rep: VerificationReport):
    spec = tuple(-1 if v is None else v for v in (rep.beta, rep.a, rep.b, rep.c, rep.d, rep.e))
    return rep.identity_id, spec, rep.label


def run_tasks(tasks, jobs: int = 1, timings: bool = False) -> list[VerificationReport]:
    tasks = list(tasks)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_task, tasks, itertools.repeat(timings)))
    else:
        reports = [run_task(t, timings) for t in tasks]
    return sorted(reports, key=_sort_key)


# default grid


def criterion_tasks(k: int, seed: int = 0) -> list[Task]:
    """Tasks for one numbered item of the acceptance grid."""
    T = Task.make
    if k == 1:
        return [
            T("duality", beta=beta, a=a, b=b, c=c, d=d, m_max=4, draws=100, seed=seed)
            for beta, a, c, b, d in itertools.product((1, 2, 4), (1, 2), (1, 2), (0, 1, 2), (0, 1, 2))
        ]
    if k == 2:
        return [T("calibration", beta=2, a=a, c=0, d=d) for a in (1, 2) for d in (1, 2)]
    if k == 3:
        return [T("gaussian_vector", beta=2, a=a, c=c, d=0, seed=seed) for a in (1, 2) for c in (1, 2)]
    if k == 4:
        return [T("ingham_siegel", a=a, rho=rho) for a in (1, 2, 3) for rho in (0.5, 1.0, 2.0, -1.0)]
    if k == 5:
        out = [
            T("circular", beta=beta, d=d, a=a, form="modulus")
            for beta in (1, 2, 4) for d in (1, 2) for a in range(1, 5)
        ]
        out += [T("circular", beta=beta, d=2, a=a, form="signed") for beta in (1, 2, 4) for a in range(1, 5)]
        return out
    if k == 6:
        return [
            T("laguerre_selberg", d=d, beta_tilde=bt, xi=xi)
            for d in (1, 2, 3) for bt in (1, 2, 4) for xi in (0, 1, 2)
        ]
    if k == 7:
        return [T("bessel_eigen", d=d, beta_over=bo, draws=20, seed=seed) for d in (1, 2) for bo in (1, 2, 4)]
    if k == 8:
        return [
            T("equivalence61", beta=beta, a=c + diff, c=c, d=d, max_degree=6)
            for beta in (1, 2, 4) for d in (1, 2) for c in (1, 2) for diff in (0, 1, 2, 3)
        ]
    if k == 9:
        return [
            T("constants", beta=beta, a=c + diff, c=c, d=d)
            for beta in (1, 2, 4) for d in (0, 1, 2) for c in (0, 1, 2) for diff in (0, 1, 2, 3)
        ]
    if k in (10, 11):
        ident = "theorem1" if k == 10 else "theorem2"
        out = [
            T(ident, beta=2, a=a, c=c, d=d, F=F, eps=1.0)
            for a, c, d in ((1, 1, 1), (2, 1, 1), (2, 2, 1)) for F in ("one", "str", "str2")
        ]
        if k == 11:
            out.append(T("theorem2", beta=4, a=1, c=1, d=1, F="one", eps=1.0, tol=1e-3))
        return out
    if k == 12:
        return [T("corollary2", beta=2, a=a, b=1, c=1, d=0, F="exp", eps=1.0) for a in (1, 2)]
    if k == 13:
        out = [T("s_operator", draws=100, seed=seed)]
        out += [
            T("split", beta=beta, a=a, b=b, c=c, d=d, draws=100, seed=seed)
            for beta in (1, 2, 4) for a, b, c, d in ((1, 1, 1, 1), (2, 1, 1, 1), (1, 2, 2, 1))
        ]
        return out
    if k == 14:
        return [T("theorem4", beta=2, a=1, b=0, c=2, d=1, e=1, F=F, eps=1.0, psi=math.pi) for F in ("one", "str")]
    raise ValueError(f"no grid item {k}")


GRID_ITEMS = tuple(range(1, 15))


def default_grid(seed: int = 0, only=None) -> list[Task]:
    tasks = []
    for k in GRID_ITEMS:
        tasks.extend(criterion_tasks(k, seed))
    if only is not None:
        tasks = [t for t in tasks if t.identity_id in set(only)]
    return tasks


__all__ = [
    "GRID_ITEMS",
    "IDENTITIES",
    "RUNNERS",
    "Task",
    "criterion_tasks",
    "default_grid",
    "run_task",
    "run_tasks",
]
