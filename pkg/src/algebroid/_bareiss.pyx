# cython: language_level=3, boundscheck=False, wraparound=False
"""Fraction-free Bareiss elimination over Python integers (hot kernel).

Behaviourally identical to ``algebroid._pylinalg.row_echelon``: same pivot
scan, same updates, bit-identical results.  Entries are arbitrary-precision
Python ints; Cython removes the interpreter overhead of the triple loop.
"""


def row_echelon(list rows, Py_ssize_t ncols):
    """Reduce ``rows`` (lists of ints, mutated in place) to row echelon form.

    Returns (rank, pivot_columns); see the pure twin for the full contract.
    """
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r = 0
    cdef Py_ssize_t c, i, j, pivot_row
    cdef list row_i, row_r, pivots = []
    cdef object prev = 1
    cdef object piv, head

    for c in range(ncols):
        pivot_row = -1
        for i in range(r, nrows):
            if (<list>rows[i])[c] != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = (<list>rows[r])[c]
        row_r = <list>rows[r]
        for i in range(r + 1, nrows):
            row_i = <list>rows[i]
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
