"""Exact sparse linear algebra over a prime field.

Only ranks are ever needed downstream; kernels are sized as
``n_cols - rank`` and never materialized.  The eliminator is a hybrid:
Markowitz-pivoted sparse elimination while the matrix stays sparse,
switching to dense row reduction once fill-in makes that cheaper.
"""
from __future__ import annotations

import heapq
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

DENSE_DIM_CUTOFF = 256
DENSE_FILL_CUTOFF = 0.20


class ResourceExceeded(RuntimeError):
    """A rank task would exceed the configured memory budget."""


@dataclass(frozen=True)
class PrimeModulus:
    """A prime p with 2 <= p < 2^31, so products fit one 64-bit reduction."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2 ** 31):
            raise ValueError(f"modulus {self.p} out of range")
        from sympy import isprime
        if not isprime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def inv(self, x: int) -> int:
        return pow(x, self.p - 2, self.p)


DEFAULT_PRIME = 40009


@dataclass
class SparseMatrixFp:
    """Column-major sparse matrix over the field with ``modulus.p`` elements.

    Within a column, row indices are strictly increasing and values are
    nonzero mod p.
    """

    n_rows: int
    n_cols: int
    columns: list[list[tuple[int, int]]]
    modulus: PrimeModulus

    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int, entries,
                     modulus: PrimeModulus) -> "SparseMatrixFp":
        p = modulus.p
        cols: list[list[tuple[int, int]]] = [[] for _ in range(n_cols)]
        for r, c, v in entries:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ValueError(f"entry ({r}, {c}) out of range")
            v %= p
            if v:
                cols[c].append((r, v))
        for col in cols:
            col.sort()
            for (r0, _), (r1, _) in zip(col, col[1:]):
                if r0 == r1:
                    raise ValueError(f"duplicate row {r0} within a column")
        return cls(n_rows, n_cols, cols, modulus)

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self.columns)

    def transpose(self) -> "SparseMatrixFp":
        entries = [(c, r, v)
                   for c, col in enumerate(self.columns) for r, v in col]
        return SparseMatrixFp.from_entries(self.n_cols, self.n_rows, entries,
                                           self.modulus)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for c, col in enumerate(self.columns):
            for r, v in col:
                a[r, c] = v
        return a


def dense_rank_mod(a: np.ndarray, p: int) -> int:
    """Row-reduction rank of an int64 array mod p."""
    a = np.ascontiguousarray(a % p, dtype=np.int64)
    n_rows, n_cols = a.shape
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = np.nonzero(a[r + 1:, c])[0]
        if below.size:
            idx = below + r + 1
            a[idx, c:] = (a[idx, c:] - a[idx, c][:, None] * a[r, c:]) % p
        r += 1
    return r


def _densify_bytes(n_rows: int, n_cols: int) -> int:
    return 8 * n_rows * n_cols


class _SparseEliminator:
    """Destructive Markowitz elimination with a densification escape hatch."""

    def __init__(self, m: SparseMatrixFp):
        self.p = m.modulus.p
        self.rows: dict[int, dict[int, int]] = {}
        self.col_rows: dict[int, set[int]] = {}
        for c, col in enumerate(m.columns):
            for r, v in col:
                self.rows.setdefault(r, {})[c] = v
                self.col_rows.setdefault(c, set()).add(r)
        self.nnz = m.nnz
        self.rank = 0
        self._heap = [(len(rs), c) for c, rs in self.col_rows.items()]
        heapq.heapify(self._heap)

    def _pick_pivot(self) -> tuple[int, int] | None:
        """Entry minimizing (row nnz - 1)(col nnz - 1) among light columns."""
        candidates: list[int] = []
        seen: set[int] = set()
        taken: list[tuple[int, int]] = []
        while self._heap and len(candidates) < 16:
            cnt, c = heapq.heappop(self._heap)
            rs = self.col_rows.get(c)
            if not rs or c in seen:
                continue
            if cnt != len(rs):
                heapq.heappush(self._heap, (len(rs), c))
                continue
            seen.add(c)
            candidates.append(c)
            taken.append((cnt, c))
        for item in taken:
            heapq.heappush(self._heap, item)
        if not candidates:
            return None
        best = None
        for c in candidates:
            col_cnt = len(self.col_rows[c])
            for r in self.col_rows[c]:
                score = (len(self.rows[r]) - 1) * (col_cnt - 1)
                if best is None or score < best[0]:
                    best = (score, r, c)
        assert best is not None
        return best[1], best[2]

    def _eliminate(self, pr: int, pc: int) -> None:
        p = self.p
        piv_row = self.rows.pop(pr)
        inv = pow(piv_row[pc], p - 2, p)
        for c in piv_row:
            self.col_rows[c].discard(pr)
        self.nnz -= len(piv_row)
        targets = list(self.col_rows.pop(pc))
        for r in targets:
            row = self.rows[r]
            factor = (row.pop(pc) * inv) % p
            self.nnz -= 1
            for c, v in piv_row.items():
                if c == pc:
                    continue
                new = (row.get(c, 0) - factor * v) % p
                if new:
                    if c not in row:
                        self.col_rows[c].add(r)
                        heapq.heappush(self._heap, (len(self.col_rows[c]), c))
                        self.nnz += 1
                    row[c] = new
                elif c in row:
                    del row[c]
                    self.col_rows[c].discard(r)
                    self.nnz -= 1
            if not row:
                del self.rows[r]
        self.rank += 1

    def _should_densify(self) -> bool:
        nr, nc = len(self.rows), len(self.col_rows)
        if nr == 0 or nc == 0:
            return False
        if min(nr, nc) < DENSE_DIM_CUTOFF:
            return True
        return self.nnz > DENSE_FILL_CUTOFF * nr * nc

    def run(self, memory_cap: int | None, allow_densify: bool = True) -> int:
        while self.rows:
            self.col_rows = {c: rs for c, rs in self.col_rows.items() if rs}
            if not self.col_rows:
                break
            if allow_densify and self._should_densify():
                nr, nc = len(self.rows), len(self.col_rows)
                need = _densify_bytes(nr, nc)
                if memory_cap is not None and need > memory_cap:
                    raise ResourceExceeded(
                        f"densifying a {nr}x{nc} block needs {need} bytes, "
                        f"cap is {memory_cap}")
                row_ids = {r: i for i, r in enumerate(self.rows)}
                col_ids = {c: i for i, c in enumerate(self.col_rows)}
                a = np.zeros((nr, nc), dtype=np.int64)
                for r, row in self.rows.items():
                    for c, v in row.items():
                        a[row_ids[r], col_ids[c]] = v
                return self.rank + dense_rank_mod(a, self.p)
            piv = self._pick_pivot()
            if piv is None:
                break
            self._eliminate(*piv)
        return self.rank


def rank(m: SparseMatrixFp, method: str = "auto",
         memory_cap: int | None = None, seed: int = 0) -> int:
    """Rank of m over its prime field.

    ``method`` is one of "auto" (hybrid sparse/dense), "dense",
    "sparse" (no dense escape), or "wiedemann" (probabilistic black-box
    audit backend: correct with high probability for large p).
    """
    if m.n_rows == 0 or m.n_cols == 0 or m.nnz == 0:
        return 0
    if method == "wiedemann":
        return _wiedemann_rank(m, seed)
    if method == "dense" or (method == "auto"
                             and min(m.n_rows, m.n_cols) < DENSE_DIM_CUTOFF):
        need = _densify_bytes(m.n_rows, m.n_cols)
        if memory_cap is not None and need > memory_cap:
            raise ResourceExceeded(
                f"dense {m.n_rows}x{m.n_cols} needs {need} bytes, "
                f"cap is {memory_cap}")
        return dense_rank_mod(m.to_dense(), m.modulus.p)
    if method == "sparse":
        return _SparseEliminator(m).run(memory_cap, allow_densify=False)
    if method != "auto":
        raise ValueError(f"unknown rank method {method!r}")
    return _SparseEliminator(m).run(memory_cap)


def _apply(m: SparseMatrixFp, vec: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros(m.n_rows, dtype=np.int64)
    for c, col in enumerate(m.columns):
        x = int(vec[c])
        if x == 0:
            continue
        for r, v in col:
            out[r] = (out[r] + v * x) % p
    return out


def _apply_t(m: SparseMatrixFp, vec: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros(m.n_cols, dtype=np.int64)
    for c, col in enumerate(m.columns):
        acc = 0
        for r, v in col:
            acc += v * int(vec[r])
        out[c] = acc % p
    return out


def _berlekamp_massey(seq: list[int], p: int) -> list[int]:
    """Minimal LFSR polynomial of the sequence, lowest degree first."""
    c = [1]
    b = [1]
    L, m, bb = 0, 1, 1
    for n, s in enumerate(seq):
        d = s
        for i in range(1, L + 1):
            d = (d + c[i] * seq[n - i]) % p
        if d == 0:
            m += 1
            continue
        coef = (d * pow(bb, p - 2, p)) % p
        t = list(c)
        c = c + [0] * (len(b) + m - len(c)) if len(b) + m > len(c) else c
        for i, bv in enumerate(b):
            c[i + m] = (c[i + m] - coef * bv) % p
        if 2 * L <= n:
            L = n + 1 - L
            b, bb, m = t, d, 1
        else:
            m += 1
    return c[:L + 1]


def _wiedemann_rank(m: SparseMatrixFp, seed: int, trials: int = 3) -> int:
    """Monte Carlo rank via the minimal polynomial of a preconditioned
    square black box; returns the maximum estimate over trials."""
    p = m.modulus.p
    rng = random.Random(seed)
    n = m.n_cols
    best = 0
    for _ in range(trials):
        d1 = np.array([rng.randrange(1, p) for _ in range(m.n_rows)],
                      dtype=np.int64)
        d2 = np.array([rng.randrange(1, p) for _ in range(n)], dtype=np.int64)
        u = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        v = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)

        def box(x: np.ndarray) -> np.ndarray:
            y = (x * d2) % p
            y = _apply(m, y, p)
            y = (y * d1) % p
            y = _apply_t(m, y, p)
            return (y * d2) % p

        seq = []
        w = v.copy()
        for _ in range(2 * n + 2):
            seq.append(int((u * w % p).sum() % p))
            w = box(w)
        minpoly = _berlekamp_massey(seq, p)
        deg = len(minpoly) - 1
        # reversed characteristic convention: constant term sits at index L
        drops_x = deg >= 1 and minpoly[deg] == 0
        est = deg - 1 if drops_x else deg
        best = max(best, est)
    return best


@dataclass(frozen=True)
class ComputeBudget:
    """Worker and memory limits for batched rank jobs."""

    max_workers: int = field(default_factory=lambda: int(
        os.environ.get("BETTI_WORKERS", "0")) or (os.cpu_count() or 1))
    memory_cap: int | None = None


@dataclass(frozen=True)
class RankOutcome:
    """Per-task result of rank_batch; failed tasks carry the error text."""

    rank: int | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _rank_task(args) -> tuple[int | None, str | None]:
    m, memory_cap = args
    try:
        return rank(m, memory_cap=memory_cap), None
    except ResourceExceeded as exc:
        return None, str(exc)


def rank_batch(tasks: list[SparseMatrixFp],
               budget: ComputeBudget | None = None) -> list[RankOutcome]:
    """Ranks in input order; a failed task is marked, the others finish."""
    budget = budget or ComputeBudget()
    args = [(m, budget.memory_cap) for m in tasks]
    if budget.max_workers <= 1 or len(tasks) <= 1:
        results = [_rank_task(a) for a in args]
    else:
        try:
            with ProcessPoolExecutor(max_workers=budget.max_workers) as pool:
                results = list(pool.map(_rank_task, args, chunksize=1))
        except (OSError, PermissionError):
            # sandboxes without process spawning fall back to serial
            results = [_rank_task(a) for a in args]
    return [RankOutcome(r, e) for r, e in results]


def dump_matrix(m: SparseMatrixFp, fh) -> None:
    """Plain text triplets: header "rows cols p", then "r c v", 0-indexed."""
    fh.write(f"{m.n_rows} {m.n_cols} {m.modulus.p}\n")
    for c, col in enumerate(m.columns):
        for r, v in col:
            fh.write(f"{r} {c} {v}\n")


def load_matrix(fh) -> SparseMatrixFp:
    header = fh.readline().split()
    n_rows, n_cols, p = (int(x) for x in header)
    entries = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        r, c, v = (int(x) for x in line.split())
        entries.append((r, c, v))
    return SparseMatrixFp.from_entries(n_rows, n_cols, entries, PrimeModulus(p))
