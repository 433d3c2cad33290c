"""Pure-Python fraction-free elimination over the integers.

This is the fallback twin of the compiled kernel in ``_bareiss.pyx``; the
two must stay behaviourally identical (same pivot scan, same updates, same
results bit for bit).  One-step Bareiss keeps every intermediate entry an
integer, so ranks and kernels computed from the echelon form are exact.
"""


def row_echelon(rows, ncols):
    """Reduce ``rows`` (lists of ints, mutated in place) to row echelon form.

    Uses one-step Bareiss elimination: after processing pivot column c with
    pivot p, every remaining entry is updated to (p*a - head*b) // prev,
    where prev is the previous pivot (1 initially); all divisions are exact.
    Pivots are chosen as the first nonzero entry scanning down each column,
    so the result is deterministic.

    Returns (rank, pivot_columns).
    """
    nrows = len(rows)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][c]
        row_r = rows[r]
        for i in range(r + 1, nrows):
            row_i = rows[i]
            head = row_i[c]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - head * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return r, pivots
