# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free elimination over Python integers."""


def eliminate(list rows, Py_ssize_t ncols):
    """Bareiss forward elimination, in place; see ``_bareiss_py.eliminate``."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return 0, []
    cdef Py_ssize_t width = len(<list>rows[0])
    cdef Py_ssize_t r = 0, col, i, j, best
    cdef Py_ssize_t size, best_size
    cdef list prow, row
    cdef object p, f, v, prev = 1
    cdef list pivots = []
    for col in range(ncols):
        if r == nrows:
            break
        best = -1
        best_size = 0
        for i in range(r, nrows):
            v = (<list>rows[i])[col]
            if v:
                size = abs(v).bit_length()
                if best < 0 or size < best_size:
                    best = i
                    best_size = size
        if best < 0:
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
        prow = <list>rows[r]
        p = prow[col]
        for i in range(r + 1, nrows):
            row = <list>rows[i]
            f = row[col]
            if f:
                for j in range(col + 1, width):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(col + 1, width):
                    row[j] = (p * row[j]) // prev
            row[col] = 0
        prev = p
        pivots.append(col)
        r += 1
    return r, pivots
