# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Fraction-free row reduction core, compiled implementation.

Same contract and bit-identical results as `_rowred_py`: rows are Python
lists of ints kept primitive (gcd 1, positive leading entry in the pivot
zone), pivots strictly increasing, fully reduced.

The speedup comes from a C int64 fast path: row combinations run on
stack-local buffers while every entry fits below 2^31 (products then stay
below 2^63), normalizing lazily; any row that outgrows the window falls
back to exact Python-int arithmetic for that single operation.  Final
normalization is identical in both paths, so the stored data never depends
on which path ran.
"""

from cpython.list cimport PyList_GET_ITEM
from libc.stdlib cimport free, malloc

from math import gcd as _gcd

__all__ = ["normalize_row", "reduce_row", "insert_row"]

cdef long long FIT = (<long long> 1) << 31


cdef long long _gcd_ll(long long a, long long b) noexcept:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef bint _load(list v, long long* buf, Py_ssize_t n) except -1:
    """Copy into the C buffer; False when an entry falls outside int64."""
    cdef Py_ssize_t j
    cdef object x
    cdef long long val
    cdef int overflow
    for j in range(n):
        x = <object> PyList_GET_ITEM(v, j)
        try:
            val = x
        except OverflowError:
            return False
        buf[j] = val
    return True


cdef void _store(list v, long long* buf, Py_ssize_t n):
    cdef Py_ssize_t j
    for j in range(n):
        v[j] = buf[j]


cdef bint _fits(long long* buf, Py_ssize_t n) noexcept:
    cdef Py_ssize_t j
    for j in range(n):
        if buf[j] >= FIT or buf[j] <= -FIT:
            return False
    return True


cdef void _shrink(long long* buf, Py_ssize_t n) noexcept:
    """Divide the buffer by its content (gcd), keeping exactness."""
    cdef long long g = 0
    cdef Py_ssize_t j
    for j in range(n):
        if buf[j]:
            g = _gcd_ll(g, buf[j])
            if g == 1:
                return
    if g > 1:
        for j in range(n):
            buf[j] = buf[j] // g


cdef int _normalize_buf(long long* buf, Py_ssize_t n, Py_ssize_t npiv) noexcept:
    cdef Py_ssize_t lead = -1
    cdef Py_ssize_t j
    cdef long long g = 0
    for j in range(n):
        if buf[j]:
            lead = j
            break
    if lead < 0:
        return -1
    for j in range(lead, n):
        if buf[j]:
            g = _gcd_ll(g, buf[j])
            if g == 1:
                break
    if buf[lead] < 0:
        g = -g
    if g != 1:
        for j in range(lead, n):
            buf[j] = buf[j] // g
    if lead < npiv:
        return <int> lead
    return -1


# ---------------------------------------------------------------------------
# object-arithmetic twins (the exact _rowred_py algorithms)

cdef int _normalize_obj(list v, Py_ssize_t npiv):
    cdef Py_ssize_t n = len(v)
    cdef Py_ssize_t lead = -1
    cdef Py_ssize_t j
    cdef object x, g
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
            g = _gcd(g, x if x > 0 else -x)
            if g == 1:
                break
    if v[lead] < 0:
        g = -g
    if g != 1:
        for j in range(lead, n):
            v[j] = v[j] // g
    if lead < npiv:
        return <int> lead
    return -1


cdef void _combine_obj(list v, object rc, object vc, list row):
    cdef Py_ssize_t width = len(v)
    cdef Py_ssize_t j
    for j in range(width):
        v[j] = rc * v[j] - vc * row[j]


cpdef int normalize_row(list v, Py_ssize_t npiv):
    cdef Py_ssize_t n = len(v)
    cdef long long* buf = <long long*> malloc(n * sizeof(long long))
    cdef int lead
    if buf == NULL:
        return _normalize_obj(v, npiv)
    try:
        if not _load(v, buf, n):
            return _normalize_obj(v, npiv)
        lead = _normalize_buf(buf, n, npiv)
        _store(v, buf, n)
        return lead
    finally:
        free(buf)


cpdef int reduce_row(list rows, list pivots, list v, Py_ssize_t npiv):
    """Fully reduce v in place; bit-identical to the pure implementation."""
    cdef Py_ssize_t width = len(v)
    cdef Py_ssize_t nrows = len(pivots)
    cdef Py_ssize_t r, c, j
    cdef list row
    cdef long long* buf = <long long*> malloc(width * sizeof(long long))
    cdef long long* rbuf = <long long*> malloc(width * sizeof(long long))
    cdef long long vc, rc
    cdef bint fast
    cdef object vc_o, rc_o
    if buf == NULL or rbuf == NULL:
        if buf != NULL:
            free(buf)
        if rbuf != NULL:
            free(rbuf)
        return _reduce_obj(rows, pivots, v, npiv)
    try:
        fast = _load(v, buf, width)
        for r in range(nrows):
            c = <Py_ssize_t> pivots[r]
            row = <list> rows[r]
            if fast:
                vc = buf[c]
                if vc == 0:
                    continue
                if (vc >= FIT or vc <= -FIT) or not _fits(buf, width):
                    _shrink(buf, width)
                    vc = buf[c]
                if _fits(buf, width) and _load(row, rbuf, width) \
                        and _fits(rbuf, width):
                    rc = rbuf[c]
                    for j in range(width):
                        buf[j] = rc * buf[j] - vc * rbuf[j]
                    continue
                # fall out of the fast window: materialize and continue
                _store(v, buf, width)
                fast = False
            vc_o = v[c]
            if vc_o == 0:
                continue
            rc_o = row[c]
            _combine_obj(v, rc_o, vc_o, row)
            _normalize_obj(v, npiv)
        if fast:
            _normalize_buf(buf, width, npiv)
            _store(v, buf, width)
        return _normalize_obj(v, npiv) if not fast else \
            _lead_of(v, npiv)
    finally:
        free(buf)
        free(rbuf)


cdef int _lead_of(list v, Py_ssize_t npiv):
    cdef Py_ssize_t j
    for j in range(len(v)):
        if v[j] != 0:
            return <int> j if j < npiv else -1
    return -1


cdef int _reduce_obj(list rows, list pivots, list v, Py_ssize_t npiv):
    cdef Py_ssize_t nrows = len(pivots)
    cdef Py_ssize_t r, c
    cdef list row
    cdef object vc
    for r in range(nrows):
        c = <Py_ssize_t> pivots[r]
        vc = v[c]
        if vc == 0:
            continue
        row = <list> rows[r]
        _combine_obj(v, row[c], vc, row)
        _normalize_obj(v, npiv)
    return _normalize_obj(v, npiv)


cpdef int insert_row(list rows, list pivots, list v, Py_ssize_t npiv):
    cdef int lead = reduce_row(rows, pivots, v, npiv)
    if lead < 0:
        return -1
    cdef Py_ssize_t lo = 0, hi = len(pivots), mid
    while lo < hi:
        mid = (lo + hi) // 2
        if <int> pivots[mid] < lead:
            lo = mid + 1
        else:
            hi = mid
    rows.insert(lo, v)
    pivots.insert(lo, lead)
    cdef Py_ssize_t width = len(v)
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r, j
    cdef list row
    cdef object rc_o
    cdef long long* vbuf = <long long*> malloc(width * sizeof(long long))
    cdef long long* rbuf = <long long*> malloc(width * sizeof(long long))
    cdef bint v_fast
    cdef long long rc, vl
    try:
        v_fast = vbuf != NULL and rbuf != NULL and _load(v, vbuf, width) \
            and _fits(vbuf, width)
        vl = vbuf[lead] if v_fast else 0
        for r in range(nrows):
            if r == lo:
                continue
            row = <list> rows[r]
            if row[lead] == 0:
                continue
            if v_fast and _load(row, rbuf, width) and _fits(rbuf, width):
                rc = rbuf[lead]
                for j in range(width):
                    rbuf[j] = vl * rbuf[j] - rc * vbuf[j]
                _normalize_buf(rbuf, width, npiv)
                _store(row, rbuf, width)
            else:
                rc_o = row[lead]
                _combine_obj(row, v[lead], rc_o, v)
                _normalize_obj(row, npiv)
        return <int> lo
    finally:
        if vbuf != NULL:
            free(vbuf)
        if rbuf != NULL:
            free(rbuf)
