"""Pure-Python fraction-free elimination (fallback for the compiled kernel)."""


def eliminate(rows, ncols):
    """Bareiss forward elimination, in place, on a list of integer rows.

    Only the first `ncols` columns are used for pivots; trailing columns
    (right-hand sides) are carried along.  Returns ``(rank, pivot_columns)``;
    afterwards ``rows[:rank]`` is an integer row echelon form.
    """
    nrows = len(rows)
    if nrows == 0:
        return 0, []
    width = len(rows[0])
    prev = 1
    r = 0
    pivots = []
    for col in range(ncols):
        if r == nrows:
            break
        best = -1
        best_size = 0
        for i in range(r, nrows):
            v = rows[i][col]
            if v:
                size = abs(v).bit_length()
                if best < 0 or size < best_size:
                    best = i
                    best_size = size
        if best < 0:
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        p = prow[col]
        for i in range(r + 1, nrows):
            row = rows[i]
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
