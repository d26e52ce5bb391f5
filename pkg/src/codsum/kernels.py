"""Hot numeric kernels with two interchangeable backends.

The loop-bound inner kernels (modular Gaussian elimination, Hessenberg
characteristic polynomials, wheel-sieve segment crossing, compensated
per-prime accumulation) exist twice: a numba ``@njit`` build and a pure
numpy build.  Selection happens once at import via the environment variable
``CODSUM_BACKEND``:

* ``numba``  - require numba, fail loudly if it cannot be imported
* ``numpy``  - vectorized numpy fallback, no JIT anywhere
* unset/auto - numba when importable, else numpy

Both builds are exact (int64 modular arithmetic, no floats in linear
algebra) and produce identical outputs; ``fastmath`` stays off so the
floating-point accumulators are bit-reproducible.  ``benchmarks/`` times
one against the other.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_VAR = "CODSUM_BACKEND"


# ---------------------------------------------------------------------------
# numpy implementations


def _np_rref_mod(a: np.ndarray, ell: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``a`` over F_ell.

    Returns (R, pivots); R has its rank nonzero rows first, pivot columns
    ascending, pivot entries 1 and zeros elsewhere in pivot columns.
    """
    r = np.array(a, dtype=np.int64, copy=True) % ell
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(r[row:, col])
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            r[[row, i]] = r[[i, row]]
        inv = pow(int(r[row, col]), ell - 2, ell)
        r[row] = r[row] * inv % ell
        coef = r[:, col].copy()
        coef[row] = 0
        hit = np.flatnonzero(coef)
        if hit.size:
            r[hit] = (r[hit] - np.outer(coef[hit], r[row])) % ell
        pivots.append(col)
        row += 1
    return r, np.asarray(pivots, dtype=np.int64)


def _np_hessenberg_charpoly(a: np.ndarray, ell: int) -> np.ndarray:
    """Monic characteristic polynomial of ``a`` over F_ell.

    Coefficient array c of length n+1 with c[i] the coefficient of x**i.
    Reduces to upper Hessenberg form by a similarity transform, then runs
    the leading-principal-minor recurrence.
    """
    h = np.array(a, dtype=np.int64, copy=True) % ell
    n = h.shape[0]
    for j in range(n - 2):
        nz = np.flatnonzero(h[j + 1 :, j])
        if nz.size == 0:
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            h[[j + 1, i]] = h[[i, j + 1]]
            h[:, [j + 1, i]] = h[:, [i, j + 1]]
        inv = pow(int(h[j + 1, j]), ell - 2, ell)
        f = h[j + 2 :, j] * inv % ell
        hit = np.flatnonzero(f)
        if hit.size:
            rows = j + 2 + hit
            h[rows] = (h[rows] - np.outer(f[hit], h[j + 1])) % ell
            h[:, j + 1] = (h[:, j + 1] + h[:, rows] @ f[hit]) % ell
    # det(xI_k - H_k) by expansion along the last column
    p = np.zeros((n + 1, n + 1), dtype=np.int64)
    p[0, 0] = 1
    for k in range(1, n + 1):
        d = int(h[k - 1, k - 1])
        p[k, 1 : k + 1] = p[k - 1, :k]
        p[k, :k] = (p[k, :k] - d * p[k - 1, :k]) % ell
        if k >= 2:
            w = np.zeros(k - 1, dtype=np.int64)
            run = int(h[k - 1, k - 2])
            for i in range(k - 2, -1, -1):
                w[i] = h[i, k - 1] * run % ell
                if i > 0:
                    run = run * int(h[i, i - 1]) % ell
            p[k, : k - 1] = (p[k, : k - 1] - w @ p[: k - 1, : k - 1]) % ell
    return p[n, : n + 1].copy()


def _np_poly_roots_mod(coeffs: np.ndarray, ell: int) -> np.ndarray:
    """Ascending roots in F_ell of the polynomial with coefficient array coeffs."""
    coeffs = np.asarray(coeffs, dtype=np.int64) % ell
    roots = []
    chunk = 1 << 20
    for lo in range(0, ell, chunk):
        xs = np.arange(lo, min(lo + chunk, ell), dtype=np.int64)
        acc = np.full(xs.shape, int(coeffs[-1]), dtype=np.int64)
        for c in coeffs[-2::-1]:
            acc = (acc * xs + int(c)) % ell
        roots.extend(xs[acc == 0].tolist())
    return np.asarray(roots, dtype=np.int64)


def _np_wheel_segment(
    k0: int,
    k1: int,
    bp: np.ndarray,
    c1: np.ndarray,
    c5: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Sieve one wheel segment: tracks 6k+1 and 6k+5 for k in [k0, k1).

    bp holds the base primes >= 5; c1/c5 the residues c with 6c+r ≡ 0 mod p.
    Crossing starts at p*p; smaller composites are handled by smaller primes.
    """
    width = k1 - k0
    m1 = np.ones(width, dtype=np.bool_)
    m5 = np.ones(width, dtype=np.bool_)
    hi1 = 6 * (k1 - 1) + 1
    hi5 = 6 * (k1 - 1) + 5
    for idx in range(bp.shape[0]):
        p = int(bp[idx])
        pp = p * p
        if pp > hi5:
            break
        for r, c, mask, hi in ((1, int(c1[idx]), m1, hi1), (5, int(c5[idx]), m5, hi5)):
            if pp > hi:
                continue
            kmin = max(k0, -(-(pp - r) // 6))
            start = kmin + (c - kmin) % p
            if start < k1:
                mask[start - k0 :: p] = False
    return m1, m5


def _np_fold_terms(
    primes: np.ndarray,
    lr_hi: float,
    lr_lo: float,
    rs_hi: float,
    rs_lo: float,
) -> tuple[float, float, float, float]:
    """Fold ratio-term logs and reciprocals of ``primes`` (ascending) into
    two Neumaier-compensated accumulators.  Order is strictly per prime so
    that any split into contiguous runs reproduces identical bits.
    """
    log1p = math.log1p
    for p in primes.tolist():
        inv = 1.0 / p
        inv2 = inv * inv
        inv5 = inv2 * inv2 * inv
        inv6 = inv5 * inv
        term = (log1p(inv6) + log1p(inv)) - (log1p(inv2) + log1p(inv5))
        t = lr_hi + term
        if abs(lr_hi) >= abs(term):
            lr_lo += (lr_hi - t) + term
        else:
            lr_lo += (term - t) + lr_hi
        lr_hi = t
        t = rs_hi + inv
        if abs(rs_hi) >= abs(inv):
            rs_lo += (rs_hi - t) + inv
        else:
            rs_lo += (inv - t) + rs_hi
        rs_hi = t
    return lr_hi, lr_lo, rs_hi, rs_lo


_NUMPY_IMPL = {
    "rref_mod": _np_rref_mod,
    "hessenberg_charpoly": _np_hessenberg_charpoly,
    "poly_roots_mod": _np_poly_roots_mod,
    "wheel_segment": _np_wheel_segment,
    "fold_terms": _np_fold_terms,
}


# ---------------------------------------------------------------------------
# numba implementations

_NUMBA_IMPL: dict | None = None
_NUMBA_ERROR: str | None = None


def _build_numba_impl() -> dict:
    from numba import njit

    @njit(cache=True)
    def _pow_mod(base, exp, ell):  # pragma: no cover - executed by numba
        b = base % ell
        r = np.int64(1)
        e = exp
        while e > 0:
            if e & 1:
                r = r * b % ell
            b = b * b % ell
            e >>= 1
        return r

    @njit(cache=True)
    def nb_rref_mod(a, ell):  # pragma: no cover - executed by numba
        r = a % ell
        nrows, ncols = r.shape
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        row = 0
        for col in range(ncols):
            if row == nrows:
                break
            sel = -1
            for i in range(row, nrows):
                if r[i, col] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != row:
                for j in range(ncols):
                    tmp = r[row, j]
                    r[row, j] = r[sel, j]
                    r[sel, j] = tmp
            inv = _pow_mod(r[row, col], ell - 2, ell)
            for j in range(ncols):
                r[row, j] = r[row, j] * inv % ell
            for i in range(nrows):
                if i == row:
                    continue
                f = r[i, col]
                if f != 0:
                    nf = ell - f
                    for j in range(ncols):
                        r[i, j] = (r[i, j] + nf * r[row, j]) % ell
            pivots[row] = col
            row += 1
        return r, pivots[:row].copy()

    @njit(cache=True)
    def nb_hessenberg_charpoly(a, ell):  # pragma: no cover - executed by numba
        h = a % ell
        n = h.shape[0]
        for j in range(n - 2):
            sel = -1
            for i in range(j + 1, n):
                if h[i, j] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != j + 1:
                for col in range(n):
                    tmp = h[j + 1, col]
                    h[j + 1, col] = h[sel, col]
                    h[sel, col] = tmp
                for row_i in range(n):
                    tmp = h[row_i, j + 1]
                    h[row_i, j + 1] = h[row_i, sel]
                    h[row_i, sel] = tmp
            inv = _pow_mod(h[j + 1, j], ell - 2, ell)
            for i in range(j + 2, n):
                f = h[i, j] * inv % ell
                if f == 0:
                    continue
                nf = ell - f
                for col in range(n):
                    h[i, col] = (h[i, col] + nf * h[j + 1, col]) % ell
                for row_i in range(n):
                    h[row_i, j + 1] = (h[row_i, j + 1] + f * h[row_i, i]) % ell
        p = np.zeros((n + 1, n + 1), dtype=np.int64)
        p[0, 0] = 1
        for k in range(1, n + 1):
            d = h[k - 1, k - 1]
            for j in range(k, 0, -1):
                p[k, j] = p[k - 1, j - 1]
            for j in range(k):
                p[k, j] = (p[k, j] - d * p[k - 1, j]) % ell
            if k >= 2:
                run = h[k - 1, k - 2]
                for i in range(k - 2, -1, -1):
                    w = h[i, k - 1] * run % ell
                    if w != 0:
                        for j in range(i + 1):
                            p[k, j] = (p[k, j] - w * p[i, j]) % ell
                    if i > 0:
                        run = run * h[i, i - 1] % ell
        out = np.empty(n + 1, dtype=np.int64)
        for j in range(n + 1):
            out[j] = p[n, j] % ell
        return out

    @njit(cache=True)
    def nb_poly_roots_mod(coeffs, ell):  # pragma: no cover - executed by numba
        deg = coeffs.shape[0] - 1
        cs = coeffs % ell
        roots = np.empty(deg, dtype=np.int64)
        found = 0
        for x in range(ell):
            acc = cs[deg]
            for j in range(deg - 1, -1, -1):
                acc = (acc * x + cs[j]) % ell
            if acc == 0:
                roots[found] = x
                found += 1
                if found == deg:
                    break
        return roots[:found].copy()

    @njit(cache=True)
    def nb_wheel_segment(k0, k1, bp, c1, c5):  # pragma: no cover
        width = k1 - k0
        m1 = np.ones(width, dtype=np.bool_)
        m5 = np.ones(width, dtype=np.bool_)
        hi1 = 6 * (k1 - 1) + 1
        hi5 = 6 * (k1 - 1) + 5
        for idx in range(bp.shape[0]):
            p = bp[idx]
            pp = p * p
            if pp > hi5:
                break
            if pp <= hi1:
                kmin = (pp - 1 + 5) // 6
                if kmin < k0:
                    kmin = k0
                start = kmin + (c1[idx] - kmin) % p
                for k in range(start - k0, width, p):
                    m1[k] = False
            kmin = (pp - 5 + 5) // 6
            if kmin < k0:
                kmin = k0
            start = kmin + (c5[idx] - kmin) % p
            for k in range(start - k0, width, p):
                m5[k] = False
        return m1, m5

    @njit(cache=True)
    def nb_fold_terms(primes, lr_hi, lr_lo, rs_hi, rs_lo):  # pragma: no cover
        for i in range(primes.shape[0]):
            p = primes[i]
            inv = 1.0 / p
            inv2 = inv * inv
            inv5 = inv2 * inv2 * inv
            inv6 = inv5 * inv
            term = (math.log1p(inv6) + math.log1p(inv)) - (
                math.log1p(inv2) + math.log1p(inv5)
            )
            t = lr_hi + term
            if abs(lr_hi) >= abs(term):
                lr_lo += (lr_hi - t) + term
            else:
                lr_lo += (term - t) + lr_hi
            lr_hi = t
            t = rs_hi + inv
            if abs(rs_hi) >= abs(inv):
                rs_lo += (rs_hi - t) + inv
            else:
                rs_lo += (inv - t) + rs_hi
            rs_hi = t
        return lr_hi, lr_lo, rs_hi, rs_lo

    def _rref_wrap(a, ell):
        return nb_rref_mod(np.array(a, dtype=np.int64, copy=True), ell)

    def _hess_wrap(a, ell):
        return nb_hessenberg_charpoly(np.array(a, dtype=np.int64, copy=True), ell)

    def _roots_wrap(coeffs, ell):
        return nb_poly_roots_mod(np.asarray(coeffs, dtype=np.int64), ell)

    def _wheel_wrap(k0, k1, bp, c1, c5):
        return nb_wheel_segment(np.int64(k0), np.int64(k1), bp, c1, c5)

    def _fold_wrap(primes, lr_hi, lr_lo, rs_hi, rs_lo):
        return nb_fold_terms(primes, lr_hi, lr_lo, rs_hi, rs_lo)

    return {
        "rref_mod": _rref_wrap,
        "hessenberg_charpoly": _hess_wrap,
        "poly_roots_mod": _roots_wrap,
        "wheel_segment": _wheel_wrap,
        "fold_terms": _fold_wrap,
    }


def numba_impl() -> dict | None:
    """The numba kernel set, or None when numba is unavailable."""
    global _NUMBA_IMPL, _NUMBA_ERROR
    if _NUMBA_IMPL is None and _NUMBA_ERROR is None:
        try:
            _NUMBA_IMPL = _build_numba_impl()
        except ImportError as exc:  # numba missing: numpy fallback only
            _NUMBA_ERROR = str(exc)
    return _NUMBA_IMPL


def numpy_impl() -> dict:
    return dict(_NUMPY_IMPL)


def _select_backend() -> tuple[str, dict]:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy", numpy_impl()
    impl = numba_impl()
    if impl is not None:
        return "numba", dict(impl)
    if choice == "numba":
        raise ImportError(f"{_ENV_VAR}=numba but numba import failed: {_NUMBA_ERROR}")
    return "numpy", numpy_impl()


BACKEND, _ACTIVE = _select_backend()


def set_backend(name: str) -> str:
    """Switch kernel backend at runtime (used by benchmarks and tests).

    Returns the backend actually installed.
    """
    global BACKEND, _ACTIVE
    if name == "numpy":
        BACKEND, _ACTIVE = "numpy", numpy_impl()
    elif name == "numba":
        impl = numba_impl()
        if impl is None:
            raise ImportError(f"numba backend unavailable: {_NUMBA_ERROR}")
        BACKEND, _ACTIVE = "numba", dict(impl)
    else:
        raise ValueError(f"unknown backend {name!r}")
    return BACKEND


# ---------------------------------------------------------------------------
# dispatching entry points used by the rest of the package


def rref_mod(a: np.ndarray, ell: int) -> tuple[np.ndarray, np.ndarray]:
    return _ACTIVE["rref_mod"](a, ell)


def hessenberg_charpoly(a: np.ndarray, ell: int) -> np.ndarray:
    return _ACTIVE["hessenberg_charpoly"](a, ell)


def poly_roots_mod(coeffs: np.ndarray, ell: int) -> np.ndarray:
    return _ACTIVE["poly_roots_mod"](coeffs, ell)


def wheel_segment(k0, k1, bp, c1, c5):
    return _ACTIVE["wheel_segment"](k0, k1, bp, c1, c5)


def fold_terms(primes, lr_hi, lr_lo, rs_hi, rs_lo):
    return _ACTIVE["fold_terms"](primes, lr_hi, lr_lo, rs_hi, rs_lo)


# ---------------------------------------------------------------------------
# shared helpers (plain numpy on every backend)


def mod_matmul(a: np.ndarray, b: np.ndarray, ell: int) -> np.ndarray:
    """a @ b mod ell with an int64 overflow guard."""
    inner = a.shape[-1]
    if inner and (ell - 1) * (ell - 1) * inner >= (1 << 62):
        raise OverflowError(f"modulus {ell} too large for int64 accumulation")
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % ell


def nullspace_mod(a: np.ndarray, ell: int) -> np.ndarray:
    """Canonical basis (rows) of the right nullspace of ``a`` over F_ell."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    r, piv = rref_mod(a, ell)
    pivset = set(int(c) for c in piv)
    free = [c for c in range(n) if c not in pivset]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, p in enumerate(piv):
            basis[i, int(p)] = (-int(r[j, f])) % ell
    return basis


def solve_unique_mod(a: np.ndarray, b: np.ndarray, ell: int) -> np.ndarray:
    """Solve a @ x = b over F_ell for invertible square a."""
    n = a.shape[0]
    aug = np.concatenate([a % ell, b.reshape(n, 1) % ell], axis=1)
    r, piv = rref_mod(aug, ell)
    if len(piv) != n or int(piv[-1]) == n:
        raise np.linalg.LinAlgError("matrix is singular mod ell")
    return r[:n, n].copy()
