"""Pure-Python fraction-free elimination (fallback for the compiled kernel)."""


def echelon(rows, ncols):
    """Bareiss forward elimination of integer ``rows`` in place.

    Pivots are taken from the least row index at or below the current rank.
    Returns the pivot columns; rows past ``len(pivots)`` end up zero.
    """
    nrows = len(rows)
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and rows[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = rows[r]
        piv = prow[c]
        for i in range(r + 1, nrows):
            row = rows[i]
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
