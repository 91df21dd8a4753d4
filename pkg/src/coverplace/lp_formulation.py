"""Linear program whose optimum is the optimal placement, and LP text I/O.

Variables are the n sorted positions followed by one epigraph variable
``w_A`` per non-empty active set A (bitmask order); each ``w_A`` is bounded
below by every term of the max defining C0(x_A).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .model import Cortes, FailureModel, Geometry, Independent, TooLarge

LP_LIMIT = 14

LE, GE, EQ = "<=", ">=", "="


@dataclass(frozen=True)
class Row:
    terms: tuple[tuple[int, float], ...]  # (variable index, coefficient), in render order
    rel: str
    rhs: float
    name: str = ""

    def value(self, y: np.ndarray) -> float:
        return math.fsum(c * y[j] for j, c in self.terms)

    def satisfied(self, y: np.ndarray, tol: float = 1e-9) -> bool:
        lhs = self.value(y)
        if self.rel == GE:
            return lhs >= self.rhs - tol
        if self.rel == LE:
            return lhs <= self.rhs + tol
        return abs(lhs - self.rhs) <= tol


@dataclass(frozen=True)
class LpProblem:
    """A minimisation LP: min c.y subject to rows and lo <= y <= hi."""

    objective: np.ndarray
    rows: tuple[Row, ...]
    lower: np.ndarray
    upper: np.ndarray
    var_names: tuple[str, ...]
    n_positions: int = 0
    masks: tuple[int, ...] = ()  # active-set bitmask of each w variable
    objective_constant: float = 0.0

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    def dense(self):
        """(A, senses, b) with A as a dense array, one row per constraint."""
        A = np.zeros((len(self.rows), self.num_vars))
        for r, row in enumerate(self.rows):
            for j, c in row.terms:
                A[r, j] += c
        return A, [row.rel for row in self.rows], np.array([row.rhs for row in self.rows])

    def is_feasible(self, y, tol: float = 1e-9) -> bool:
        y = np.asarray(y, dtype=float)
        if np.any(y < self.lower - tol) or np.any(y > self.upper + tol):
            return False
        return all(row.satisfied(y, tol) for row in self.rows)

    def structurally_equal(self, other: "LpProblem") -> bool:
        return (
            self.var_names == other.var_names
            and np.array_equal(self.objective, other.objective)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
            and [(r.terms, r.rel, r.rhs) for r in self.rows] == [(r.terms, r.rel, r.rhs) for r in other.rows]
        )


def _members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


def _row(terms, rel, rhs) -> Row:
    merged: dict[int, float] = {}
    for j, c in terms:
        merged[j] = merged.get(j, 0.0) + c
    return Row(tuple((j, c) for j, c in merged.items() if c != 0.0), rel, float(rhs))


def build_lp(
    n: int,
    model: FailureModel,
    geom: Geometry | str = Geometry.INTERVAL,
    prune_zero: bool = True,
) -> LpProblem:
    """Epigraph LP for the expected-cost minimisation.

    The optimal objective plus ``objective_constant`` (the all-failed mass)
    equals the optimal expected cost. With ``prune_zero`` active sets of zero
    probability (Cortes law, wrong cardinality) get no variable or rows.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > LP_LIMIT:
        raise TooLarge(f"the LP has 2^n - 1 epigraph variables; n <= {LP_LIMIT} required, got {n}")
    circle = Geometry.parse(geom) is Geometry.CIRCLE
    if isinstance(model, Cortes):
        model.cardinality_weights(n)
    weights = model.cardinality_weights(n)

    names = [f"x{i + 1}" for i in range(n)]
    obj = [0.0] * n
    masks = []
    rows: list[Row] = []
    for i in range(n - 1):
        rows.append(_row([(i + 1, 1.0), (i, -1.0)], GE, 0.0))
    for mask in range(1, 1 << n):
        members = _members(mask, n)
        prob = weights[len(members)]
        if prune_zero and prob == 0.0:
            continue
        w = len(names)
        names.append(f"w_{mask:x}")
        obj.append(float(prob))
        masks.append(mask)
        for a, b in zip(members, members[1:]):
            rows.append(_row([(w, 1.0), (b, -0.5), (a, 0.5)], GE, 0.0))
        first, last = members[0], members[-1]
        if circle:
            rows.append(_row([(w, 1.0), (last, 0.5), (first, -0.5)], GE, 0.5))
        else:
            rows.append(_row([(w, 1.0), (first, -1.0)], GE, 0.0))
            rows.append(_row([(w, 1.0), (last, 1.0)], GE, 1.0))
    nv = len(names)
    lower = np.zeros(nv)
    upper = np.full(nv, np.inf)
    upper[:n] = 1.0
    named = tuple(Row(r.terms, r.rel, r.rhs, f"c{k + 1}") for k, r in enumerate(rows))
    const = model.p**n if isinstance(model, Independent) else 0.0
    return LpProblem(np.array(obj), named, lower, upper, tuple(names), n, tuple(masks), const)


def lp_epigraph_point(lp: LpProblem, x, geom: Geometry | str = Geometry.INTERVAL) -> np.ndarray:
    """Extend sorted positions ``x`` with w_A := C0(x_A): a feasible point."""
    from .cost_exact import c0

    x = np.asarray(x, dtype=float)
    n = lp.n_positions
    y = np.zeros(lp.num_vars)
    y[:n] = x
    for j, mask in enumerate(lp.masks):
        y[n + j] = c0(x[_members(mask, n)], geom)
    return y


# --- LP text format -------------------------------------------------------

_TERMS_PER_LINE = 8


def _num(c: float) -> str:
    return format(c, ".17g")


def _render_terms(terms, names) -> list[str]:
    parts = []
    for k, (j, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = names[j] if mag == 1.0 else f"{_num(mag)} {names[j]}"
        if k == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f"{sign} {body}")
    return parts


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines = []
    for k in range(0, max(len(parts), 1), _TERMS_PER_LINE):
        chunk = " ".join(parts[k : k + _TERMS_PER_LINE])
        lines.append((head if k == 0 else "   ") + chunk)
    return lines


def _bound_text(name: str, lo: float, hi: float) -> str:
    if lo == -np.inf and hi == np.inf:
        return f" {name} free"
    lo_s = "-infinity" if lo == -np.inf else _num(lo)
    if hi == np.inf:
        return f" {name} >= {lo_s}"
    return f" {lo_s} <= {name} <= {_num(hi)}"


def export_lp_text(lp: LpProblem) -> str:
    """Render ``lp`` in CPLEX LP text format (deterministic, round-trippable)."""
    names = lp.var_names
    lines = ["\\ coverplace expected-cost LP", "Minimize"]
    obj_terms = [(j, float(c)) for j, c in enumerate(lp.objective) if c != 0.0]
    if not obj_terms:
        obj_terms = [(0, 0.0)]
        parts = [f"0 {names[0]}"]
    else:
        parts = _render_terms(obj_terms, names)
    lines += _wrap(" obj: ", parts)
    lines.append("Subject To")
    for k, row in enumerate(lp.rows):
        name = row.name or f"c{k + 1}"
        parts = _render_terms(row.terms, names) if row.terms else [f"0 {names[0]}"]
        parts = parts + [row.rel, _num(row.rhs)]
        lines += _wrap(f" {name}: ", parts)
    lines.append("Bounds")
    for j, name in enumerate(names):
        lines.append(_bound_text(name, float(lp.lower[j]), float(lp.upper[j])))
    lines.append("End")
    return "\n".join(lines) + "\n"


_LABEL = re.compile(r"(?:^|\s)([A-Za-z_][\w.]*):\s")


def _parse_expr(tokens: list[str], index: dict[str, int]):
    terms: list[tuple[int, float]] = []
    sign, coef = 1.0, None
    for tok in tokens:
        if tok in "+-":
            sign = -1.0 if tok == "-" else 1.0
            continue
        try:
            coef = float(tok)
            continue
        except ValueError:
            pass
        c = sign * (1.0 if coef is None else coef)
        terms.append((index[tok], c))
        sign, coef = 1.0, None
    return terms


def parse_lp_text(text: str) -> LpProblem:
    """Parse the subset of CPLEX LP format written by :func:`export_lp_text`."""
    sections: dict[str, list[str]] = {"Minimize": [], "Subject To": [], "Bounds": []}
    current = None
    for raw in text.splitlines():
        line = raw.rstrip()
        if not line or line.lstrip().startswith("\\"):
            continue
        key = line.strip()
        if key in sections:
            current = key
            continue
        if key == "End":
            break
        if current is None:
            raise ValueError(f"content outside a section: {line!r}")
        sections[current].append(line.strip())

    names: list[str] = []
    lower, upper = [], []
    for line in sections["Bounds"]:
        tok = line.split()
        if len(tok) == 2 and tok[1] == "free":
            names.append(tok[0]); lower.append(-np.inf); upper.append(np.inf)
        elif len(tok) == 3 and tok[1] == ">=":
            names.append(tok[0]); lower.append(_inf(tok[2])); upper.append(np.inf)
        elif len(tok) == 5 and tok[1] == "<=" and tok[3] == "<=":
            names.append(tok[2]); lower.append(_inf(tok[0])); upper.append(_inf(tok[4]))
        else:
            raise ValueError(f"unsupported bound line: {line!r}")
    index = {nm: j for j, nm in enumerate(names)}

    obj_text = " ".join(sections["Minimize"])
    obj_text = obj_text.split(":", 1)[1] if ":" in obj_text else obj_text
    obj = np.zeros(len(names))
    for j, c in _parse_expr(obj_text.split(), index):
        obj[j] += c

    body = " " + " ".join(sections["Subject To"]) + " "
    marks = list(_LABEL.finditer(body))
    rows = []
    for k, mark in enumerate(marks):
        end = marks[k + 1].start() if k + 1 < len(marks) else len(body)
        tokens = body[mark.end() : end].split()
        rel_at = next(i for i, t in enumerate(tokens) if t in (LE, GE, EQ, "=<", "=>"))
        rel = {"=<": LE, "=>": GE}.get(tokens[rel_at], tokens[rel_at])
        terms = [(j, c) for j, c in _parse_expr(tokens[:rel_at], index) if c != 0.0]
        rows.append(Row(tuple(terms), rel, float(tokens[rel_at + 1]), mark.group(1)))

    n_pos = sum(1 for nm in names if re.fullmatch(r"x\d+", nm))
    masks = tuple(int(nm[2:], 16) for nm in names if nm.startswith("w_"))
    return LpProblem(obj, tuple(rows), np.array(lower, dtype=float), np.array(upper, dtype=float), tuple(names), n_pos, masks)


def _inf(tok: str) -> float:
    t = tok.lower()
    if t in ("-inf", "-infinity"):
        return -np.inf
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return np.inf
    return float(tok)
