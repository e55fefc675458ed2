"""Fraction-free row reduction core, pure-Python reference implementation.

Rows are plain Python lists of ints.  A row collection in "integer RREF"
keeps every row primitive (gcd of the entries is 1, leading entry in the
pivot zone positive), pivot columns strictly increasing, and each pivot
column zero in every other row.  Scaling a row by a positive rational does
not change the span, so the fraction-free form converts to the usual
leading-1 echelon form only at API boundaries.

``npiv`` restricts pivot search to the leftmost ``npiv`` columns; columns to
the right ride along as an augmented zone (right-hand sides, coordinate
bookkeeping for expression tracking).

The compiled twin `_rowred_c.pyx` implements the same three functions; the
active implementation is chosen in `_backend`.
"""

from math import gcd

__all__ = ["normalize_row", "reduce_row", "insert_row"]


def normalize_row(v, npiv):
    """Make v primitive in place; return its pivot column or -1 if zero there.

    The sign is fixed so the leading entry of the pivot zone (or, failing
    that, of the augmented zone) is positive.
    """
    lead = -1
    n = len(v)
    for j in range(n):
        if v[j] != 0:
            lead = j
            break
    if lead < 0:
        return -1
    g = 0
    for j in range(lead, n):
        x = v[j]
        if x:
            g = gcd(g, x if x > 0 else -x)
            if g == 1:
                break
    if v[lead] < 0:
        g = -g
    if g != 1:
        for j in range(lead, n):
            v[j] //= g
    return lead if lead < npiv else -1


def reduce_row(rows, pivots, v, npiv):
    """Fully reduce v in place against an integer-RREF row collection.

    After the call, v has zero entries at every pivot column.  v is left
    primitive.  Returns the leading column of v inside the pivot zone, or
    -1 when the pivot zone of v is zero.
    """
    width = len(v)
    nrows = len(pivots)
    for r in range(nrows):
        c = pivots[r]
        vc = v[c]
        if vc == 0:
            continue
        row = rows[r]
        rc = row[c]
        for j in range(c, width):
            v[j] = rc * v[j] - vc * row[j]
        # entries left of c scale by rc
        if rc != 1:
            for j in range(c):
                v[j] = rc * v[j]
        normalize_row(v, npiv)
    return normalize_row(v, npiv)


def insert_row(rows, pivots, v, npiv):
    """Reduce v and insert it if independent, keeping reduced echelon form.

    Returns the insertion position, or -1 when v reduced to zero across the
    pivot zone (v itself keeps its reduced augmented zone so callers can
    read dependency coefficients).
    """
    lead = reduce_row(rows, pivots, v, npiv)
    if lead < 0:
        return -1
    lo, hi = 0, len(pivots)
    while lo < hi:
        mid = (lo + hi) // 2
        if pivots[mid] < lead:
            lo = mid + 1
        else:
            hi = mid
    rows.insert(lo, v)
    pivots.insert(lo, lead)
    width = len(v)
    vc = v[lead]
    nrows = len(rows)
    for r in range(nrows):
        if r == lo:
            continue
        row = rows[r]
        rc = row[lead]
        if rc == 0:
            continue
        for j in range(width):
            row[j] = vc * row[j] - rc * v[j]
        normalize_row(row, npiv)
    return lo
