"""Integer linear algebra on lists of Python ints (exact, big-integer safe).

Matrices are lists of rows.  The workhorse is a column-style Hermite
reduction ``A U = H`` with ``U`` unimodular, which gives rank, particular
solutions and kernel bases of integer systems.
"""


def xgcd(a, b):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def column_hermite(A, ncols=None):
    """Return (H, U, pivots) with A U = H in column echelon form.

    ``pivots[j]`` is the row holding the positive pivot of column j; columns
    past ``len(pivots)`` of H are zero and the matching columns of U span the
    integer kernel of A.  Entries left of each pivot are reduced into
    ``[0, pivot)``, so H is the Hermite normal form of the column lattice.
    """
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    H = [list(map(int, row)) for row in A]
    U = identity(n)

    def colop(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for M in (H, U):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    pivots = []
    k = 0
    for r in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            x, y = H[r][k], H[r][j]
            if y == 0:
                continue
            g, s, t = xgcd(x, y)
            colop(k, j, s, t, -y // g, x // g)
        if H[r][k] == 0:
            continue
        if H[r][k] < 0:
            colop(k, k, -1, 0, -1, 0)
        piv = H[r][k]
        for j in range(k):
            f = H[r][j] // piv
            if f:
                for M in (H, U):
                    for row in M:
                        row[j] -= f * row[k]
        pivots.append(r)
        k += 1
    return H, U, pivots


def rank(A):
    if not A or not A[0]:
        return 0
    return len(column_hermite(A)[2])


def kernel_basis(A, ncols=None):
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return identity(n)
    _, U, piv = column_hermite(A)
    return [[U[i][j] for i in range(n)] for j in range(len(piv), n)]


def solve(A, b, ncols=None):
    """Integer solution of A x = b.

    Returns ``(x0, kernel)`` where every solution is x0 plus an integer
    combination of the kernel vectors, or ``None`` when no integer solution
    exists.
    """
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [0] * n, identity(n)
    H, U, piv = column_hermite(A)
    y = [0] * n
    for j, r in enumerate(piv):
        acc = b[r] - sum(H[r][l] * y[l] for l in range(j))
        q, rem = divmod(acc, H[r][j])
        if rem:
            return None
        y[j] = q
    if matvec(H, y) != list(b):
        return None
    x0 = matvec(U, y)
    kernel = [[U[i][j] for i in range(n)] for j in range(len(piv), n)]
    return x0, kernel


def solve_mixed(A, b, moduli):
    """Solve A x = b where row i holds modulo ``moduli[i]`` (0 means exactly).

    Congruence rows get a slack column ``m_i e_i``; the slack coordinates are
    dropped from the answer.  Kernel vectors are projected the same way, so
    they generate (possibly redundantly) the solution lattice.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    slack = [i for i in range(m) if moduli[i]]
    ext = [list(A[i]) + [moduli[i] if i == s else 0 for s in slack] for i in range(m)]
    sol = solve(ext, b, ncols=n + len(slack))
    if sol is None:
        return None
    x0, kernel = sol
    proj = [v[:n] for v in kernel]
    proj = [v for v in proj if any(v)]
    return x0[:n], proj


def row_hermite(rows, ncols=None):
    """Hermite basis (nonzero rows) of the lattice spanned by ``rows``."""
    if not rows:
        return []
    H, _, piv = column_hermite(transpose(rows), ncols=len(rows))
    cols = transpose(H)
    return [cols[j] for j in range(len(piv))]
