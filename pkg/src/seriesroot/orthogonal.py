"""Staged construction of a sparse sequence a with sum_i a_i b_j^i = 0 for every row j.

Rows are satisfied one at a time.  The first stage pairs two columns so the
first target row vanishes.  Every later stage s computes the defect C of the
current partial sum on its row; when C is not negligible it appends s fresh
columns beyond the current support, solving for weights that cancel C while
leaving the earlier rows untouched.  Columns are scanned forward until the
local system is well conditioned and its contributions on the earlier rows
stay below 2^-(s-1).

Each column is rescaled by a power of two before the floating-point solves,
so the table may span far more than the double range; residuals are
recomputed in :class:`ExtScalar` at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .extscalar import ExtScalar, ZERO
from .polynomials import DensePoly
from .univar import (
    CoeffTable,
    ConstantScan,
    GrowthDiagnostics,
    ZERO_DERIV_TOL,
    choose_constant,
    growth_diagnostics,
    monic_normalize,
    shifted_iterate_table,
)

STAGE_TOL = 1e-10


@dataclass
class OrthogonalSolution:
    coefficients: dict[int, ExtScalar]
    rows: list[int]
    stages_completed: int
    stage_residuals: list[float]
    stage_indices: list[tuple[int, ...]]
    row_residuals: dict[int, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    complete: bool = True

    @property
    def support(self) -> list[int]:
        return sorted(i for i, a in self.coefficients.items() if not a.is_zero())

    def is_nonzero(self) -> bool:
        return bool(self.support)

    def as_dict(self) -> dict:
        return {
            "coefficients": {
                str(i): {"log2_mag": a.log2abs(), "arg": a.arg()}
                for i, a in sorted(self.coefficients.items())
            },
            "rows": self.rows,
            "stages_completed": self.stages_completed,
            "stage_residuals": self.stage_residuals,
            "stage_indices": [list(t) for t in self.stage_indices],
            "row_residuals": {str(j): r for j, r in sorted(self.row_residuals.items())},
            "warnings": self.warnings,
            "complete": self.complete,
        }


def row_residual(table: CoeffTable, coeffs: dict[int, ExtScalar], j: int) -> float:
    """|sum a_i b_j^i| / max |a_i b_j^i| evaluated in ExtScalar."""
    total = ZERO
    biggest = -math.inf
    for i in sorted(coeffs):
        term = coeffs[i] * table.b(j, i)
        if term.is_zero():
            continue
        total = total + term
        biggest = max(biggest, term.log2abs())
    if biggest == -math.inf:
        return 0.0
    if total.is_zero():
        return 0.0
    return 2.0 ** min(total.log2abs() - biggest, 1000.0)


def _normalized(table: CoeffTable, rows: list[int], cols: list[int]):
    """beta[r, c] = b_{rows[r]}^{cols[c]} * 2^-e_c and the exponents e_c."""
    beta = np.zeros((len(rows), len(cols)), dtype=complex)
    exps = []
    for c, i in enumerate(cols):
        entries = [table.b(j, i) for j in rows]
        live = [x.exponent for x in entries if not x.is_zero()]
        e = max(live) if live else 0
        exps.append(e)
        for r, x in enumerate(entries):
            if not x.is_zero():
                beta[r, c] = ExtScalar(x.mantissa, x.exponent - e).to_complex()
    return beta, exps


def _equilibrated_solve(M: np.ndarray, rhs: np.ndarray, max_cond: float):
    rs = np.abs(M).max(axis=1)
    if np.any(rs == 0):
        return None
    A = M / rs[:, None]
    cs = np.abs(A).max(axis=0)
    if np.any(cs == 0):
        return None
    A = A / cs[None, :]
    if np.linalg.cond(A) >= max_cond:
        return None
    y = np.linalg.solve(A, rhs / rs)
    return y / cs


def _dominance_warnings(table: CoeffTable, rows: list[int], last: int) -> list[str]:
    out = []
    for a, b in zip(rows, rows[1:]):
        lo, hi = table.b(a, last), table.b(b, last)
        if hi.is_zero() or (not lo.is_zero() and hi.log2abs() < lo.log2abs()):
            out.append(f"row {b} does not dominate row {a} at column {last}")
    return out


def orthogonal_solve(
    table: CoeffTable,
    J: int | None = None,
    stage_tol: float = STAGE_TOL,
    rows: list[int] | None = None,
) -> OrthogonalSolution:
    """Sparse a_i (i >= 1) with sum_i a_i b_j^i ~ 0 on the target rows.

    ``rows`` defaults to 1..J, the rows of the orthogonality statement; the
    pipeline passes 0..J.  Stages are counted by satisfied rows: stage 1 uses
    two columns and stage s >= 2 appends at most s columns.  An exhausted
    table yields a partial solution with ``complete = False``.
    """
    if J is None:
        J = table.J
    if rows is None:
        rows = list(range(1, J + 1))
    rows = list(rows)
    if not rows:
        raise PreconditionError("no target rows")
    if max(rows) > table.J or min(rows) < 0:
        raise PreconditionError(f"target rows must lie in 0..{table.J}")
    cols = list(range(1, table.I + 1))
    beta, exps = _normalized(table, rows, cols)
    max_cond = 1.0 / stage_tol
    w = np.zeros(len(cols), dtype=complex)
    stage_indices: list[tuple[int, ...]] = []
    stage_residuals: list[float] = []
    warnings = _dominance_warnings(table, rows, table.I)

    def finish(done: int, complete: bool) -> OrthogonalSolution:
        coeffs = {
            cols[c]: ExtScalar.coerce(complex(w[c])) * ExtScalar(1.0, -exps[c])
            for c in range(len(cols))
            if w[c] != 0
        }
        res = {j: row_residual(table, coeffs, j) for j in rows}
        return OrthogonalSolution(
            coeffs, rows, done, stage_residuals, stage_indices, res, warnings, complete
        )

    # stage 1: two columns on the first row
    live = [c for c in range(len(cols)) if beta[0, c] != 0]
    if len(live) < 2:
        if not live and len(cols) >= 1:
            w[0] = 1.0
            stage_indices.append((cols[0],))
            stage_residuals.append(0.0)
            done = 1
        else:
            warnings.append("table exhausted in the base step")
            return finish(0, False)
    else:
        c1, c2 = live[0], live[1]
        w[c1], w[c2] = beta[0, c2], -beta[0, c1]
        w /= abs(beta[0, c1] * beta[0, c2])
        stage_indices.append((cols[c1], cols[c2]))
        stage_residuals.append(_stage_defect(w, beta[0]))
        done = 1

    for s in range(2, len(rows) + 1):
        target = beta[s - 1]
        support = np.nonzero(w)[0]
        C = complex(np.dot(w, target))
        scale = float(np.abs(w * target).max())
        if scale == 0 or abs(C) <= stage_tol * scale:
            stage_indices.append(())
            stage_residuals.append(0.0 if scale == 0 else abs(C) / scale)
            done = s
            continue
        chosen = _search(beta, s, int(support.max()) + 1, C, max_cond, stage_tol)
        if chosen is None:
            warnings.append(f"table exhausted at stage {s}; increase the column count")
            return finish(done, False)
        idx, v = chosen
        w[list(idx)] = v
        stage_indices.append(tuple(cols[c] for c in idx))
        stage_residuals.append(_stage_defect(w, target))
        done = s
    return finish(done, True)


def _stage_defect(w: np.ndarray, row: np.ndarray) -> float:
    terms = w * row
    big = float(np.abs(terms).max())
    return 0.0 if big == 0 else abs(complex(terms.sum())) / big


def _search(beta: np.ndarray, s: int, start: int, C: complex, max_cond: float, stage_tol: float):
    """Fresh columns n_1 < ... < n_s from ``start`` solving the stage-s system."""
    ncols = beta.shape[1]
    bound = 2.0 ** -(s - 1)
    rhs = np.zeros(s, dtype=complex)
    rhs[-1] = -C
    sub = beta[:s]
    for first in range(start, ncols - s + 1):
        base = list(range(first, first + s - 1))
        block = sub[: s - 1][:, base]
        if block.size and _equilibrated_solve(block, np.zeros(s - 1, dtype=complex), max_cond) is None:
            continue
        for last in range(base[-1] + 1 if base else first, ncols):
            idx = base + [last]
            v = _equilibrated_solve(sub[:, idx], rhs, max_cond)
            if v is None or not np.all(np.isfinite(v)):
                continue
            contrib = np.abs(v[None, :] * sub[: s - 1][:, idx])
            if contrib.size and contrib.max() > bound:
                continue
            return idx, v
    return None


@dataclass
class SolveReport:
    gamma: complex
    center: complex
    center_original: complex
    monic: DensePoly
    scan: ConstantScan
    table: CoeffTable
    diagnostics: GrowthDiagnostics
    solution: OrthogonalSolution

    @property
    def row_residuals(self) -> dict[int, float]:
        return self.solution.row_residuals

    def as_dict(self) -> dict:
        return {
            "gamma": [self.gamma.real, self.gamma.imag],
            "center_monic": [self.center.real, self.center.imag],
            "center": [self.center_original.real, self.center_original.imag],
            "monic": [[c.real, c.imag] for c in self.monic.coeffs],
            "scan": self.scan.as_dict(),
            "diagnostics": self.diagnostics.as_dict(),
            "solution": self.solution.as_dict(),
            "max_row_residual": max(self.row_residuals.values(), default=0.0),
        }


def solve_about_c(
    f: DensePoly,
    J: int,
    I: int,
    R: float,
    trials: int = 64,
    scan_iters: int = 10,
    stage_tol: float = STAGE_TOL,
) -> SolveReport:
    """Coefficients a_i with sum_i a_i (g^i)_j = 0 for j = 0..J, g = f - c, f monic-normalized.

    The returned center refers to the monic conjugate; ``center_original`` is
    the matching center for f itself (c / gamma).
    """
    if f.degree < 2:
        raise PreconditionError("degree >= 2 required; linear maps are handled by the annihilator module")
    d1 = f.coeffs[1] if len(f.coeffs) > 1 else 0
    if abs(d1) <= ZERO_DERIV_TOL:
        raise PreconditionError("the construction requires f'(0) != 0")
    gamma, g = monic_normalize(f)
    c, scan = choose_constant(g, R, trials, min(scan_iters, I))
    table = shifted_iterate_table(g, c, J, I)
    diag = growth_diagnostics(table)
    sol = orthogonal_solve(table, J, stage_tol, rows=list(range(0, J + 1)))
    return SolveReport(gamma, c, c / gamma, g, scan, table, diag, sol)
