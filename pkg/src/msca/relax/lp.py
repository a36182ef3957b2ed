"""Dense linear programs and a two-phase tableau simplex.

The solver is meant for desk-scale models (a few thousand columns at most).
It uses Dantzig's largest-coefficient rule and falls back to Bland's rule
after a run of degenerate pivots, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SENSES = ("<=", ">=", "=")


@dataclass
class LinearProgram:
    """minimize ``c @ y + constant`` subject to ``A y (senses) b`` and per-column bounds.

    ``bounds[j]`` is ``(lo, hi)``; ``lo=None`` means unbounded below and
    ``hi=None`` unbounded above.  The default bound is ``(0, None)``.
    """

    c: np.ndarray
    A: np.ndarray
    senses: list[str]
    b: np.ndarray
    bounds: list[tuple[float | None, float | None]] = field(default_factory=list)
    names: list[str] = field(default_factory=list)
    constant: float = 0.0
    row_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        nv = self.c.shape[0]
        self.A = np.asarray(self.A, dtype=float).reshape(-1, nv)
        self.b = np.asarray(self.b, dtype=float)
        m = self.A.shape[0]
        if self.b.shape != (m,) or len(self.senses) != m:
            raise ValueError("row count mismatch between A, b and senses")
        if any(s not in SENSES for s in self.senses):
            raise ValueError(f"senses must be among {SENSES}")
        if not self.bounds:
            self.bounds = [(0.0, None)] * nv
        if not self.names:
            self.names = [f"y{j}" for j in range(nv)]
        if not self.row_names:
            self.row_names = [f"r{i}" for i in range(m)]
        if len(self.bounds) != nv or len(self.names) != nv:
            raise ValueError("column count mismatch")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.c))):
            raise ValueError("LP data must be finite")

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    def value(self, y) -> float:
        return float(self.c @ np.asarray(y, dtype=float) + self.constant)

    def max_violation(self, y) -> float:
        y = np.asarray(y, dtype=float)
        viol = 0.0
        lhs = self.A @ y
        for s, l, r in zip(self.senses, lhs, self.b):
            if s == "<=":
                viol = max(viol, l - r)
            elif s == ">=":
                viol = max(viol, r - l)
            else:
                viol = max(viol, abs(l - r))
        for (lo, hi), v in zip(self.bounds, y):
            if lo is not None:
                viol = max(viol, lo - v)
            if hi is not None:
                viol = max(viol, v - hi)
        return float(viol)

    def dump(self) -> str:
        """Plain-text tableau: one line per row, coefficients in column order."""

        def fmt(v):
            return repr(float(v))

        lines = [f"# lp-tableau v1 vars={self.num_vars} rows={self.num_rows}",
                 "columns " + " ".join(self.names),
                 "obj " + " ".join(fmt(v) for v in self.c) + f" | const {fmt(self.constant)}"]
        for name, row, s, rhs in zip(self.row_names, self.A, self.senses, self.b):
            lines.append(f"{name} " + " ".join(fmt(v) for v in row) + f" | {s} {fmt(rhs)}")
        for name, (lo, hi) in zip(self.names, self.bounds):
            lo_s = "-inf" if lo is None else fmt(lo)
            hi_s = "inf" if hi is None else fmt(hi)
            lines.append(f"bound {name} {lo_s} {hi_s}")
        return "\n".join(lines) + "\n"


def parse_dump(text: str) -> LinearProgram:
    """Inverse of ``LinearProgram.dump``."""
    names, c, constant = [], None, 0.0
    rows, senses, rhs, row_names, bounds = [], [], [], [], []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "columns":
            names = rest
        elif head == "obj":
            coeffs, tail = line[4:].split("|")
            c = [float(t) for t in coeffs.split()]
            constant = float(tail.split()[1])
        elif head == "bound":
            lo, hi = rest[1], rest[2]
            bounds.append((None if lo == "-inf" else float(lo), None if hi == "inf" else float(hi)))
        else:
            coeffs, tail = line[len(head):].split("|")
            rows.append([float(t) for t in coeffs.split()])
            s, r = tail.split()
            senses.append(s)
            rhs.append(float(r))
            row_names.append(head)
    A = np.array(rows, dtype=float).reshape(len(rows), len(c))
    return LinearProgram(np.array(c), A, senses, np.array(rhs), bounds, names, constant, row_names)


class LPBuilder:
    """Incremental construction of a ``LinearProgram`` by named columns."""

    def __init__(self):
        self._names: list[str] = []
        self._cost: list[float] = []
        self._bounds: list[tuple] = []
        self._rows: list[dict[int, float]] = []
        self._senses: list[str] = []
        self._rhs: list[float] = []
        self._row_names: list[str] = []
        self._index: dict[str, int] = {}
        self.constant = 0.0

    def add_var(self, name: str, cost: float = 0.0, lo: float | None = 0.0, hi: float | None = None) -> int:
        if name in self._index:
            raise ValueError(f"duplicate column {name}")
        j = len(self._names)
        self._names.append(name)
        self._cost.append(float(cost))
        self._bounds.append((lo, hi))
        self._index[name] = j
        return j

    def var(self, name: str) -> int:
        return self._index[name]

    def add_cost(self, j: int, amount: float):
        self._cost[j] += amount

    def add_row(self, coeffs: dict[int, float], sense: str, rhs: float, name: str | None = None):
        self._rows.append({j: float(a) for j, a in coeffs.items() if a != 0})
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        self._row_names.append(name or f"r{len(self._rows) - 1}")

    def build(self) -> LinearProgram:
        nv = len(self._names)
        A = np.zeros((len(self._rows), nv))
        for i, row in enumerate(self._rows):
            for j, a in row.items():
                A[i, j] += a
        return LinearProgram(np.array(self._cost), A, list(self._senses), np.array(self._rhs),
                             list(self._bounds), list(self._names), self.constant, list(self._row_names))


@dataclass
class LPSolution:
    status: str  # optimal | infeasible | unbounded | iteration-limit
    y: np.ndarray | None
    objective: float | None
    iterations: int


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int], tol: float):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.iterations = 0

    def pivot(self, r: int, j: int):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j
        self.iterations += 1

    def run(self, ncols: int, max_iter: int) -> str:
        """Minimize with the objective in the last row; columns >= ncols are never entered."""
        T, tol = self.T, self.tol
        degenerate = 0
        while True:
            if self.iterations >= max_iter:
                return "iteration-limit"
            d = T[-1, :ncols]
            candidates = np.flatnonzero(d < -tol)
            if candidates.size == 0:
                return "optimal"
            bland = degenerate >= 50
            j = int(candidates[0]) if bland else int(candidates[np.argmin(d[candidates])])
            col = T[:-1, j]
            rows = np.flatnonzero(col > tol)
            if rows.size == 0:
                return "unbounded"
            ratios = T[:-1, -1][rows] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, abs(best))]
            if bland:
                r = int(min(ties, key=lambda i: self.basis[i]))
            else:
                r = int(ties[np.argmax(col[ties])])
            degenerate = degenerate + 1 if best <= tol else 0
            self.pivot(r, j)


def simplex_solve(lp: LinearProgram, max_iter: int = 100_000, tol: float = 1e-9) -> LPSolution:
    """Solve ``lp`` to optimality; infeasible/unbounded outcomes come back as a status."""
    nv = lp.num_vars
    # column transforms: y_j = shift_j + sum of (sign * std column)
    col_map: list[list[tuple[int, float]]] = []
    shift = np.zeros(nv)
    ncols = 0
    extra_rows: list[tuple[dict[int, float], str, float]] = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is None:
            col_map.append([(ncols, 1.0), (ncols + 1, -1.0)])
            ncols += 2
            if hi is not None:
                extra_rows.append(({ncols - 2: 1.0, ncols - 1: -1.0}, "<=", hi))
        else:
            shift[j] = lo
            col_map.append([(ncols, 1.0)])
            ncols += 1
            if hi is not None:
                if hi < lo - tol:
                    return LPSolution("infeasible", None, None, 0)
                extra_rows.append(({ncols - 1: 1.0}, "<=", hi - lo))

    m0 = lp.num_rows
    m = m0 + len(extra_rows)
    A = np.zeros((m, ncols))
    b = np.zeros(m)
    senses = list(lp.senses) + [s for _, s, _ in extra_rows]
    b[:m0] = lp.b - lp.A @ shift
    for j, parts in enumerate(col_map):
        for col, sgn in parts:
            A[:m0, col] += sgn * lp.A[:, j]
    for r, (coeffs, _, rhs) in enumerate(extra_rows):
        for col, a in coeffs.items():
            A[m0 + r, col] = a
        b[m0 + r] = rhs
    c = np.zeros(ncols)
    for j, parts in enumerate(col_map):
        for col, sgn in parts:
            c[col] += sgn * lp.c[j]

    for i in range(m):
        if b[i] < 0:
            A[i] *= -1
            b[i] *= -1
            senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]

    n_slack = sum(1 for s in senses if s != "=")
    n_art = sum(1 for s in senses if s != "<=")
    total = ncols + n_slack + n_art
    T = np.zeros((m + 1, total + 1))
    T[:m, :ncols] = A
    T[:m, -1] = b
    basis = [0] * m
    s_col, a_col = ncols, ncols + n_slack
    art_rows = []
    for i, s in enumerate(senses):
        if s == "<=":
            T[i, s_col] = 1.0
            basis[i] = s_col
            s_col += 1
        else:
            if s == ">=":
                T[i, s_col] = -1.0
                s_col += 1
            T[i, a_col] = 1.0
            basis[i] = a_col
            art_rows.append(i)
            a_col += 1
    art_start = ncols + n_slack
    tab = _Tableau(T, basis, tol)

    if art_rows:
        T[-1, :] = 0.0
        T[-1, art_start:total] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        status = tab.run(total, max_iter)
        if status == "iteration-limit":
            return LPSolution(status, None, None, tab.iterations)
        if -T[-1, -1] > 1e-7 * max(1.0, np.abs(b).max(initial=0.0)):
            return LPSolution("infeasible", None, None, tab.iterations)
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(m):
            if tab.basis[i] >= art_start:
                nz = np.flatnonzero(np.abs(T[i, :art_start]) > tol)
                if nz.size:
                    tab.pivot(i, int(nz[0]))
                    keep.append(i)
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.delete(T, np.s_[art_start:total], axis=1)
        tab.T = T
        tab.basis = [tab.basis[i] for i in keep]
        total = art_start

    T = tab.T
    full_c = np.zeros(total)
    full_c[:ncols] = c
    T[-1, :] = 0.0
    T[-1, :total] = full_c
    for i, bj in enumerate(tab.basis):
        if full_c[bj] != 0.0:
            T[-1] -= full_c[bj] * T[i]
    status = tab.run(total, max_iter)
    if status != "optimal":
        return LPSolution(status, None, None, tab.iterations)

    z = np.zeros(total)
    for i, bj in enumerate(tab.basis):
        z[bj] = T[i, -1]
    y = shift.copy()
    for j, parts in enumerate(col_map):
        for col, sgn in parts:
            y[j] += sgn * z[col]
    return LPSolution("optimal", y, lp.value(y), tab.iterations)
