"""Smith normal form of integer matrices, exact arithmetic.

Classic pivot-and-reduce elimination over Z with Python integers; returns
the invariant factors d_1 | d_2 | ... (nonnegative, padded with zeros up
to min(rows, cols)).
"""


def smith_normal_form(matrix):
    """Invariant factors of an integer matrix (list of rows).

    Returns a list of length min(rows, cols) with d_1 | d_2 | ... ;
    trailing zeros correspond to rank deficiency.
    """
    a = [[int(x) for x in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    k = min(rows, cols)
    diag = []
    t = 0
    while t < k:
        # locate the smallest-magnitude nonzero entry in the remaining block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        # clear row and column t by division with remainder, restarting
        # whenever a smaller residue appears
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    for j in range(t, cols):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    for i in range(t, rows):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for i in range(t, rows):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
                        dirty = True
                        break
            if not dirty:
                break
        diag.append(abs(a[t][t]))
        t += 1
    while len(diag) < k:
        diag.append(0)
    # enforce the divisibility chain d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            x, y = diag[i], diag[i + 1]
            if x and (y % x != 0 if y else False):
                import math

                g = math.gcd(x, y)
                lcm = x * y // g
                diag[i], diag[i + 1] = g, lcm
                changed = True
            elif x == 0 and y != 0:
                diag[i], diag[i + 1] = y, x
                changed = True
    return diag
