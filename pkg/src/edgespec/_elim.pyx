# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free elimination; same contract as ``_elim_py.echelon``."""


def echelon(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef list prow, row
    cdef object piv, prev = 1, a
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and (<list>rows[p])[c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = <list>rows[r]
        piv = prow[c]
        for i in range(r + 1, nrows):
            row = <list>rows[i]
            a = row[c]
            if a == 0:
                if piv != prev:
                    for j in range(c + 1, ncols):
                        if row[j]:
                            row[j] = row[j] * piv // prev
                continue
            for j in range(c + 1, ncols):
                row[j] = (piv * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots
