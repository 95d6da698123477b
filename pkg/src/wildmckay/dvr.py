"""Linear algebra over the DVR K[[t]] with entries held as TruncSeries.

Everything works by pivoting on an entry of minimal valuation, which is
enough for elementary divisors, determinant valuations and saturated
kernels.  Rows (or columns) are stored sparsely; exact zeros are dropped.
"""

from __future__ import annotations

import math

from .errors import NonFreeDetected, PrecisionExhausted
from .series import TruncSeries


def _sparse_rows(matrix):
    return [{j: x for j, x in enumerate(row) if not (x.is_zero() and x.exact)}
            for row in matrix]


def _find_pivot(lines, live_keys):
    """Minimal-valuation entry among lines[i][k] for live i and k in live_keys.

    ``lines`` maps line index -> {key: entry}.  Returns (i, k, v) or None
    when everything left is exactly zero.
    """
    best = None
    unknown = math.inf
    for i, line in lines.items():
        for k, x in line.items():
            if k not in live_keys:
                continue
            if x.coeffs:
                v = x.val
                if best is None or v < best[2]:
                    best = (i, k, v)
            elif x.prec < unknown:
                unknown = x.prec
        if best is not None and best[2] == 0:
            break
    if best is None:
        if unknown != math.inf:
            raise PrecisionExhausted("remaining block is zero only to working precision")
        return None
    if unknown < best[2]:
        raise PrecisionExhausted("pivot valuation exceeds the precision of another entry")
    return best


def _axpy(target: dict, f: TruncSeries, source: dict, skip=None):
    """target -= f * source, entrywise on sparse dicts."""
    for k, x in source.items():
        if k == skip:
            continue
        y = f * x
        if k in target:
            z = target[k] - y
        else:
            z = -y
        if z.is_zero() and z.exact:
            target.pop(k, None)
        else:
            target[k] = z


def smith_valuations(matrix) -> list:
    """Valuations of the elementary divisors, sorted ascending.

    Exactly-zero leftovers (rank deficiency) contribute ``math.inf``.
    """
    rows = dict(enumerate(_sparse_rows(matrix)))
    if not rows:
        return []
    ncols = len(matrix[0])
    live = set(range(ncols))
    out = []
    while rows and live:
        piv = _find_pivot(rows, live)
        if piv is None:
            break
        i, j, v = piv
        prow = rows.pop(i)
        p = prow[j]
        live.discard(j)
        for r, row in rows.items():
            a = row.get(j)
            if a is None:
                continue
            _axpy(row, a / p, prow)
            row.pop(j, None)
        out.append(v)
    out.extend([math.inf] * min(len(rows), len(live)))
    return sorted(out)


def det_valuation(matrix) -> int:
    """Valuation of the determinant of a square matrix."""
    return sum(smith_valuations(matrix))


def saturated_kernel(matrix, ncols: int, expected_rank: int | None = None):
    """Free basis of the saturated kernel {x : A x = 0} in K[[t]]^ncols.

    Column elimination is mirrored on a unimodular matrix U; the columns of
    U that end up over zero columns of A U span the kernel and, being part
    of a basis, span a saturated submodule.  Returns column vectors as lists.
    """
    field = None
    for row in matrix:
        if row:
            field = row[0].field
            break
    if field is None:
        raise ValueError("empty matrix")
    nrows = len(matrix)
    # column c holds A-entries under keys 0..nrows-1 and U-entries under nrows+k
    cols = {c: {} for c in range(ncols)}
    for i, row in enumerate(matrix):
        for c, x in enumerate(row):
            if not (x.is_zero() and x.exact):
                cols[c][i] = x
    for c in range(ncols):
        cols[c][nrows + c] = TruncSeries.one(field)
    live_rows = set(range(nrows))
    while cols and live_rows:
        try:
            piv = _find_pivot(cols, live_rows)
        except PrecisionExhausted:
            break
        if piv is None:
            break
        j, i, _v = piv
        pcol = cols.pop(j)
        p = pcol[i]
        for c, col in cols.items():
            a = col.get(i)
            if a is None:
                continue
            _axpy(col, a / p, pcol)
            col.pop(i, None)
        live_rows.discard(i)
    kernel = []
    for c in sorted(cols):
        col = cols[c]
        vec = [col.get(nrows + k, TruncSeries.zero(field)) for k in range(ncols)]
        kernel.append(vec)
    if expected_rank is not None:
        if len(kernel) > expected_rank:
            raise PrecisionExhausted(
                f"kernel rank {len(kernel)} exceeds {expected_rank}: precision too low")
        if len(kernel) < expected_rank:
            raise NonFreeDetected(f"kernel rank {len(kernel)} below expected {expected_rank}")
    return kernel
