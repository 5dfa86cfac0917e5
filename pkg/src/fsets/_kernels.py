"""Hot loops for dense polynomial arithmetic over F_p.

Every kernel exists twice: a numba ``@njit`` version and a pure numpy
version with identical semantics.  The numba path is used unless the
environment variable ``FSETS_DISABLE_NUMBA`` is set to a truthy value (or
numba fails to import).  Both sets stay importable so tests and the
benchmark can compare them directly.

Conventions: coefficient arrays are ``int64``, lowest degree first, reduced
into ``[0, p)`` and trimmed (no trailing zeros; the zero polynomial is the
empty array).  ``p`` must be below 2**16 so that accumulating products in
int64 cannot overflow.
"""

import os

import numpy as np

_FLAG = os.environ.get("FSETS_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

MAX_PRIME = 1 << 16
EMPTY = np.zeros(0, dtype=np.int64)


def _modinv_py(a, p):
    return pow(int(a), -1, int(p))


# ---------------------------------------------------------------------------
# numpy reference implementations


def np_trim(a):
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return EMPTY
    return a[: nz[-1] + 1]


def np_mul(a, b, p):
    if a.size == 0 or b.size == 0:
        return EMPTY
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    nza = np.flatnonzero(a)
    if nza.size * 8 < a.size:
        # sparse outer operand (Frobenius-stretched polynomials)
        out = np.zeros(a.size + b.size - 1, dtype=np.int64)
        for i in nza:
            out[i : i + b.size] += a[i] * b
            out[i : i + b.size] %= p
        return out
    return np.convolve(a, b) % p


def np_divmod(a, b, p):
    db = b.size - 1
    if a.size - 1 < db:
        return EMPTY, a.copy()
    inv = _modinv_py(b[-1], p)
    r = a.copy()
    q = np.zeros(a.size - db, dtype=np.int64)
    nzb = np.flatnonzero(b)
    for k in range(a.size - 1 - db, -1, -1):
        c = (int(r[k + db]) * inv) % p
        if c:
            q[k] = c
            idx = nzb + k
            r[idx] = (r[idx] - c * b[nzb]) % p
    return np_trim(q), np_trim(r[:db])


def np_gcd(a, b, p):
    x, y = np_trim(a % p), np_trim(b % p)
    while y.size:
        x, y = y, np_divmod(x, y, p)[1]
    if x.size == 0:
        return EMPTY
    return (x * _modinv_py(x[-1], p)) % p


def np_count_points_prime(a4, a6, q):
    """#E(F_q) for prime q via Euler's criterion on every x (vectorized)."""
    x = np.arange(q, dtype=np.int64)
    f = (((x * x) % q) * x + a4 * x + a6) % q
    e = (q - 1) // 2
    base = f.copy()
    acc = np.ones_like(f)
    while e:
        if e & 1:
            acc = (acc * base) % q
        base = (base * base) % q
        e >>= 1
    zero = f == 0
    square = (acc == 1) & ~zero
    return 1 + int(zero.sum()) + 2 * int(square.sum())


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_modinv(a, p):
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            qt = r // new_r
            t, new_t = new_t, t - qt * new_t
            r, new_r = new_r, r - qt * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True, nogil=True)
    def _nb_deg(a):
        d = a.size - 1
        while d >= 0 and a[d] == 0:
            d -= 1
        return d

    @njit(cache=True, nogil=True)
    def nb_mul(a, b, p):
        n = a.size
        m = b.size
        if n == 0 or m == 0:
            return np.zeros(0, np.int64)
        out = np.zeros(n + m - 1, np.int64)
        # outer loop over the sparser operand; zero rows are skipped
        nza = 0
        for i in range(n):
            if a[i] != 0:
                nza += 1
        nzb = 0
        for j in range(m):
            if b[j] != 0:
                nzb += 1
        if nza > nzb:
            a, b = b, a
            n, m = m, n
        idx = np.empty(m, np.int64)
        k = 0
        for j in range(m):
            if b[j] != 0:
                idx[k] = j
                k += 1
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for jj in range(k):
                j = idx[jj]
                out[i + j] += ai * b[j]
        for i in range(out.size):
            out[i] %= p
        return out

    # Division and gcd reduce lazily: entries stay nonnegative and grow by
    # less than p^2 per elimination step, so with p < 2^16 an int64 cell
    # cannot overflow before the next full reduction (at most one per
    # division, i.e. after at most deg(a) steps).

    @njit(cache=True, nogil=True)
    def nb_divmod(a, b, p):
        db = _nb_deg(b)
        da = _nb_deg(a)
        if da < db:
            return np.zeros(0, np.int64), a[: da + 1].copy()
        inv = _nb_modinv(b[db], p)
        r = a[: da + 1].copy()
        q = np.zeros(da - db + 1, np.int64)
        idx = np.empty(db + 1, np.int64)
        k = 0
        for j in range(db + 1):
            if b[j] != 0:
                idx[k] = j
                k += 1
        dense = k * 4 > db
        for s in range(da - db, -1, -1):
            c = ((r[s + db] % p) * inv) % p
            if c != 0:
                q[s] = c
                cc = p - c
                if dense:
                    for j in range(db + 1):
                        r[s + j] += cc * b[j]
                else:
                    for jj in range(k):
                        j = idx[jj]
                        r[s + j] += cc * b[j]
        for i in range(db):
            r[i] %= p
        dr = _nb_deg(r[:db])
        return q[: _nb_deg(q) + 1], r[: dr + 1].copy()

    @njit(cache=True, nogil=True)
    def nb_gcd(a, b, p):
        x = a.copy()
        y = b.copy()
        dx = _nb_deg(x)
        dy = _nb_deg(y)
        while dy >= 0:
            inv = _nb_modinv(y[dy], p)
            while dx >= dy:
                c = ((x[dx] % p) * inv) % p
                if c != 0:
                    cc = p - c
                    shift = dx - dy
                    for j in range(dy + 1):
                        x[shift + j] += cc * y[j]
                x[dx] = 0
                dx -= 1
                while dx >= 0 and x[dx] % p == 0:
                    x[dx] = 0
                    dx -= 1
            for i in range(dx + 1):
                x[i] %= p
            x, y = y, x
            dx, dy = dy, dx
        if dx < 0:
            return np.zeros(0, np.int64)
        inv = _nb_modinv(x[dx], p)
        out = np.empty(dx + 1, np.int64)
        for i in range(dx + 1):
            out[i] = (x[i] * inv) % p
        return out

    @njit(cache=True, nogil=True)
    def nb_count_points_prime(a4, a6, q):
        e = (q - 1) // 2
        total = 1
        for x in range(q):
            f = ((x * x % q) * x + a4 * x + a6) % q
            if f == 0:
                total += 1
                continue
            acc = 1
            base = f
            k = e
            while k:
                if k & 1:
                    acc = acc * base % q
                base = base * base % q
                k >>= 1
            if acc == 1:
                total += 2
        return total


# Above this operand length a float FFT beats the quadratic loops.  It is
# exact while every coefficient of the integer product stays far below
# 2**52; the bound used leaves more than ten bits for rounding error.
FFT_MIN = 256
FFT_MAX_COEFF = 1 << 36


def fft_usable(a, b, p):
    n = min(a.size, b.size)
    return n >= FFT_MIN and (p - 1) * (p - 1) * n <= FFT_MAX_COEFF


def fft_mul(a, b, p):
    size = a.size + b.size - 1
    L = 1 << (size - 1).bit_length()
    prod = np.fft.irfft(np.fft.rfft(a, L) * np.fft.rfft(b, L), L)[:size]
    return np.rint(prod).astype(np.int64) % p


def _with_fft(mul):
    def poly_mul(a, b, p):
        if fft_usable(a, b, p):
            return fft_mul(a, b, p)
        return mul(a, b, p)

    poly_mul.__name__ = mul.__name__ + "_fft"
    return poly_mul


NUMBA_ACTIVE = HAVE_NUMBA and NUMBA_REQUESTED

if NUMBA_ACTIVE:
    poly_mul, poly_divmod, poly_gcd, count_points_prime = (
        nb_mul,
        nb_divmod,
        nb_gcd,
        nb_count_points_prime,
    )
else:
    poly_mul, poly_divmod, poly_gcd, count_points_prime = (
        np_mul,
        np_divmod,
        np_gcd,
        np_count_points_prime,
    )
poly_mul = _with_fft(poly_mul)


def _warm_up():
    # The first call into numba pays for runtime start-up and loading the
    # cached machine code (about half a second).  Paying it at import keeps
    # that one-time cost out of the first arithmetic operation.
    a = np.array([1, 2, 1], dtype=np.int64)
    b = np.array([1, 1], dtype=np.int64)
    nb_mul(a, b, 5)
    nb_divmod(a, b, 5)
    nb_gcd(a, b, 5)


if NUMBA_ACTIVE:
    _warm_up()


def backend():
    return "numba" if NUMBA_ACTIVE else "numpy"


def implementations():
    """Both kernel sets keyed by backend name (numba missing when unavailable)."""
    impls = {"numpy": dict(mul=np_mul, divmod=np_divmod, gcd=np_gcd, count=np_count_points_prime)}
    if HAVE_NUMBA:
        impls["numba"] = dict(mul=nb_mul, divmod=nb_divmod, gcd=nb_gcd, count=nb_count_points_prime)
    return impls
