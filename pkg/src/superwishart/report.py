"""Verification records shared by the checks and the command line."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

ZERO_FLOOR = 1e-12

FIELDS = (
    "identity_id",
    "label",
    "beta",
    "a",
    "b",
    "c",
    "d",
    "e",
    "lhs_value",
    "rhs_value",
    "abs_error",
    "rel_error",
    "tolerance",
    "passed",
    "runtime_ms",
    "seed",
)


@dataclass
class VerificationReport:
    identity_id: str
    lhs_value: complex
    rhs_value: complex
    abs_error: float
    rel_error: float
    tolerance: float
    passed: bool
    beta: int | None = None
    a: int | None = None
    b: int | None = None
    c: int | None = None
    d: int | None = None
    e: int | None = None
    runtime_ms: int = 0
    seed: int | None = None
    label: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def compare(
        cls,
        identity_id: str,
        lhs,
        rhs,
        tolerance: float,
        *,
        spec=None,
        e=None,
        seed=None,
        label="",
        abs_error=None,
        rel_error=None,
        mode="either",
        details=None,
    ):
        """Build a report from two values.

        ``mode`` selects the pass rule: ``either`` (absolute or relative error
        within tolerance), ``abs`` or ``rel``.  In ``rel`` mode two values
        that are both below ZERO_FLOOR count as equal.
        """
        lhs, rhs = complex(lhs), complex(rhs)
        if abs_error is None:
            abs_error = abs(lhs - rhs)
        if rel_error is None:
            scale = abs(rhs)
            rel_error = abs_error / scale if scale > 0 else (0.0 if abs_error == 0 else math.inf)
        finite = all(math.isfinite(v) for v in (lhs.real, lhs.imag, rhs.real, rhs.imag, abs_error))
        if mode == "abs":
            ok = abs_error <= tolerance
        elif mode == "rel":
            # both sides at roundoff level: a relative error carries no information
            ok = rel_error <= tolerance or max(abs(lhs), abs(rhs)) <= ZERO_FLOOR
        else:
            ok = abs_error <= tolerance or rel_error <= tolerance
        kw = {}
        if spec is not None:
            kw = dict(beta=spec.beta, a=spec.a, b=spec.b, c=spec.c, d=spec.d)
        return cls(
            identity_id=identity_id,
            lhs_value=lhs,
            rhs_value=rhs,
            abs_error=float(abs_error),
            rel_error=float(rel_error),
            tolerance=float(tolerance),
            passed=bool(ok and finite),
            e=e,
            seed=seed,
            label=label,
            details=details or {},
            **kw,
        )

    def to_dict(self) -> dict:
        raw = asdict(self)
        out = {}
        for k in FIELDS:
            v = raw[k]
            if isinstance(v, complex):
                v = [_num(v.real), _num(v.imag)]
            elif isinstance(v, float):
                v = _num(v)
            out[k] = v
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tag = f"{self.identity_id}[{self.label}]" if self.label else self.identity_id
        return (
            f"{status} {tag}: lhs={_fmt(self.lhs_value)} rhs={_fmt(self.rhs_value)} "
            f"abs={self.abs_error:.3e} rel={self.rel_error:.3e} tol={self.tolerance:.1e}"
        )


def _num(x: float):
    if math.isfinite(x):
        return x
    return str(x)


def _fmt(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def combine(identity_id: str, reports, *, label="", spec=None, e=None, seed=None):
    """Collapse several sub-reports into the worst one, keeping its values."""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to combine")
    worst = max(reports, key=lambda r: (not r.passed, r.abs_error))
    out = VerificationReport(
        identity_id=identity_id,
        lhs_value=worst.lhs_value,
        rhs_value=worst.rhs_value,
        abs_error=worst.abs_error,
        rel_error=worst.rel_error,
        tolerance=worst.tolerance,
        passed=all(r.passed for r in reports),
        seed=seed,
        e=e,
        label=label or worst.label,
        details={"parts": len(reports), "failed": sum(not r.passed for r in reports)},
    )
    if spec is not None:
        out.beta, out.a, out.b, out.c, out.d = spec.beta, spec.a, spec.b, spec.c, spec.d
    return out
