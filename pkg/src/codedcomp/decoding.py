"""Recovery rules: tolerance threshold, peeling decoder, exact-elimination oracle.

The peeling decoder is the workhorse for sparse binary codes: every incoming
task is immediately reduced by the already-recovered blocks, degree-one
residuals release new blocks, and releases cascade until no residual has
degree one.  An exact rational row-reduction oracle (``rref_recoverable``)
upper-bounds what any linear decoder could recover and is used to sanity-check
the peeling results.  Dense MDS groups and exact-sum schemes use counting
rules instead (``mcc_decode_values``, ``gc_aggregate``).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .blocks import CodedTask, ComputationAssignment

_ROUND_GUARD = 1e-9


def recovery_threshold(k_total: int, q: float) -> int:
    """Number of blocks that must be recovered under tolerance q.

    The target is ceil((1 - q) * k_total).  Products such as 0.85 * 40 fall
    a few ulps below their exact value, so results within 1e-9 of an integer
    are rounded to it before the ceiling is applied.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"tolerance must lie in [0, 1], got {q}")
    if k_total < 0:
        raise ValueError("k_total must be non-negative")
    value = (1.0 - q) * k_total
    nearest = round(value)
    if abs(value - nearest) < _ROUND_GUARD:
        return int(nearest)
    return int(math.ceil(value))


class _Residual:
    __slots__ = ("coeffs", "payload")

    def __init__(self, coeffs: dict[int, float], payload):
        self.coeffs = coeffs
        self.payload = payload


class PeelingDecoder:
    """Incremental peeling decoder over coded tasks.

    State is kept fully reduced: no stored residual ever references a
    recovered block.  Payloads are optional; when supplied they are combined
    along with the symbolic bookkeeping so recovered block values can be read
    back with :meth:`decode_values`.

    Attributes:
        k_total: number of distinct blocks in play.
        messages_ingested: count of tasks fed in.
        redundant_messages: tasks whose content was already implied by
            earlier ones (reduced to nothing).
    """

    def __init__(self, k_total: int):
        if k_total < 1:
            raise ValueError("k_total must be positive")
        self.k_total = k_total
        self._values: dict[int, np.ndarray | None] = {}
        self._pending: dict[int, _Residual] = {}
        self._by_block: dict[int, set[int]] = {}
        self._next_id = 0
        self.messages_ingested = 0
        self.redundant_messages = 0

    @property
    def recovered(self) -> set[int]:
        return set(self._values)

    @property
    def recovered_count(self) -> int:
        return len(self._values)

    @property
    def pending_count(self) -> int:
        return len(self._pending)

    def recovered_mask(self) -> np.ndarray:
        mask = np.zeros(self.k_total, dtype=bool)
        if self._values:
            mask[list(self._values)] = True
        return mask

    def meets_tolerance(self, q: float) -> bool:
        return self.recovered_count >= recovery_threshold(self.k_total, q)

    def ingest(self, task: CodedTask, payload=None) -> set[int]:
        """Feed one task (optionally with its computed value) into the decoder.

        Args:
            task: sparse combination of blocks.
            payload: optional numeric result of the task.

        Returns:
            The set of newly recovered block ids (possibly empty).
        """
        self.messages_ingested += 1
        coeffs = dict(zip(task.support, task.coefficients))
        if any(not 0 <= b < self.k_total for b in coeffs):
            raise ValueError(f"task support {task.support} outside [0, {self.k_total})")
        if payload is not None:
            payload = np.asarray(payload, dtype=float).copy()
        for b in list(coeffs):
            if b in self._values:
                c = coeffs.pop(b)
                if payload is not None:
                    known = self._values[b]
                    payload = None if known is None else payload - c * known
        if not coeffs:
            self.redundant_messages += 1
            return set()
        if len(coeffs) == 1:
            return self._release(coeffs, payload)
        rid = self._next_id
        self._next_id += 1
        self._pending[rid] = _Residual(coeffs, payload)
        for b in coeffs:
            self._by_block.setdefault(b, set()).add(rid)
        return set()

    def _release(self, coeffs: dict[int, float], payload) -> set[int]:
        (block, coef), = coeffs.items()
        stack = [(block, None if payload is None else payload / coef)]
        newly: set[int] = set()
        while stack:
            block, value = stack.pop()
            if block in self._values:
                self.redundant_messages += 1
                continue
            self._values[block] = value
            newly.add(block)
            for rid in self._by_block.pop(block, set()):
                res = self._pending[rid]
                coef = res.coeffs.pop(block)
                if res.payload is not None:
                    res.payload = None if value is None else res.payload - coef * value
                if len(res.coeffs) == 1:
                    del self._pending[rid]
                    (b2, c2), = res.coeffs.items()
                    self._by_block[b2].discard(rid)
                    if not self._by_block[b2]:
                        del self._by_block[b2]
                    stack.append((b2, None if res.payload is None else res.payload / c2))
        return newly

    def decode_values(self) -> dict[int, np.ndarray]:
        """Numeric values of every recovered block.

        Raises:
            ValueError: if any recovered block lacks a payload because some
                contributing task was ingested without one.
        """
        missing = [b for b, v in self._values.items() if v is None]
        if missing:
            raise ValueError(
                f"no payloads available for recovered blocks {sorted(missing)}"
            )
        return {b: v for b, v in self._values.items()}


def rref_recoverable(tasks: Iterable[CodedTask], k_total: int) -> set[int]:
    """Blocks recoverable by full Gaussian elimination over the rationals.

    Builds the coefficient matrix of the given tasks, reduces it to reduced
    row-echelon form with exact Fraction arithmetic, and returns the block
    ids whose rows end up as unit vectors.  This is the best any linear
    decoder can do, so the peeling result is always a subset.
    """
    rows: list[list[Fraction]] = []
    for task in tasks:
        row = [Fraction(0)] * k_total
        for b, c in zip(task.support, task.coefficients):
            if not 0 <= b < k_total:
                raise ValueError(f"block {b} outside [0, {k_total})")
            row[b] += Fraction(c)
        rows.append(row)
    pivot_row = 0
    pivots: list[int] = []
    for col in range(k_total):
        target = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                target = r
                break
        if target is None:
            continue
        rows[pivot_row], rows[target] = rows[target], rows[pivot_row]
        inv = Fraction(1) / rows[pivot_row][col]
        rows[pivot_row] = [x * inv for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    recoverable: set[int] = set()
    for r, col in enumerate(pivots):
        if sum(1 for x in rows[r] if x != 0) == 1:
            recoverable.add(col)
    return recoverable


def gc_aggregate(received_workers: Iterable[int], k: int, load: int) -> bool:
    """Whether an exact-sum scheme can reconstruct the full result.

    Any k - load + 1 complete workers suffice when each computes ``load``
    cyclic partial results.
    """
    if not 1 <= load <= k:
        raise ValueError(f"load must lie in [1, {k}], got {load}")
    return len(set(received_workers)) >= k - load + 1


def mcc_decode_values(
    assignment: ComputationAssignment,
    payloads: Mapping[int, Sequence[np.ndarray]],
) -> dict[int, np.ndarray]:
    """Recover all blocks of an MDS-coded assignment from complete workers.

    Args:
        assignment: assignment built by :func:`codedcomp.schemes.build_mcc`.
        payloads: worker id -> list of its task results, one per order.

    Returns:
        Block id -> value for every one of the k_total blocks.

    Raises:
        ValueError: if fewer than kbar complete workers are available.
    """
    kbar = assignment.kbar
    if kbar is None or assignment.eval_points is None:
        raise ValueError("assignment does not carry MDS decoding metadata")
    workers = sorted(payloads)
    if len(workers) < kbar:
        raise ValueError(f"need {kbar} complete workers, got {len(workers)}")
    workers = workers[:kbar]
    k = assignment.k_total
    if kbar == k:
        return {w: np.asarray(payloads[w][0], dtype=float) for w in workers}
    r = assignment.n_orders
    points = np.array([assignment.eval_points[w] for w in workers])
    vander = np.vander(points, kbar, increasing=True)
    values: dict[int, np.ndarray] = {}
    for g in range(r):
        rhs = np.stack([np.asarray(payloads[w][g], dtype=float).ravel() for w in workers])
        sol = np.linalg.solve(vander, rhs)
        shape = np.asarray(payloads[workers[0]][g]).shape
        for p in range(kbar):
            block = g + p * r
            if block < k:
                values[block] = sol[p].reshape(shape)
    return values
