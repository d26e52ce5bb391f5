"""The brute-force character oracle.

``enumerate_group`` expands a permutation group spec into elements,
conjugacy classes, power maps and an exponent.  ``dixon_table`` computes the
exact character table by the modular eigenvector method: the transposed
class-algebra matrices share a common row eigenbasis over F_ell, found by
iterative eigenspace splitting; degrees come from the orthogonality
relation, and per-class eigenvalue multiplicities come from discrete
Fourier inversion over roots of unity in F_ell.  Every group-theoretic
output is an exact integer; floats appear only in the redundant
orthogonality sanity check.

Determinism: elements are enumerated breadth-first in generator order,
class matrices are processed in ascending (class size, class index) order,
eigenvalues ascending, subspace bases kept in reduced row echelon form, and
characters finally sorted by (degree, lexicographic multiplicity vectors).
Two runs on the same spec give byte-identical tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .arith import factorize, is_prime, sqrt_mod
from .errors import OracleError, SizeGuardError
from .groups import Permutation, PermutationGroupSpec, size_guard


@dataclass(frozen=True)
class ConjugacyClass:
    rep: int
    members: tuple[int, ...]
    size: int
    rep_order: int


class GroupData:
    """A fully enumerated finite permutation group."""

    def __init__(self, spec: PermutationGroupSpec, elements: list[Permutation]):
        if not elements or not elements[0].is_identity():
            raise ValueError("element list must start with the identity")
        self.spec = spec
        self.elements = elements
        self.order = len(elements)
        self._index = {g.key(): i for i, g in enumerate(elements)}
        self.inverse = [self._index[g.inverse().key()] for g in elements]
        self._build_classes()
        self._build_power_maps()

    # -- multiplication oracle ------------------------------------------------

    def mult(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j]."""
        prod = self.elements[i].images[self.elements[j].images]
        return self._index[prod.tobytes()]

    # -- structure ------------------------------------------------------------

    def _build_classes(self) -> None:
        gens = [self._index[g.key()] for g in self.spec.generators]
        inv_gens = [self.inverse[g] for g in gens]
        class_of = np.full(self.order, -1, dtype=np.int64)
        classes: list[ConjugacyClass] = []
        for start in range(self.order):
            if class_of[start] >= 0:
                continue
            ci = len(classes)
            orbit = [start]
            class_of[start] = ci
            queue = [start]
            while queue:
                x = queue.pop()
                for g, gi in zip(gens, inv_gens):
                    y = self.mult(gi, self.mult(x, g))
                    if class_of[y] < 0:
                        class_of[y] = ci
                        orbit.append(y)
                        queue.append(y)
            orbit.sort()
            classes.append(
                ConjugacyClass(
                    rep=start,
                    members=tuple(orbit),
                    size=len(orbit),
                    rep_order=self.elements[start].order(),
                )
            )
        self.classes = classes
        self.class_of = class_of
        self.exponent = 1
        for c in classes:
            self.exponent = self.exponent * c.rep_order // math.gcd(
                self.exponent, c.rep_order
            )

    def _build_power_maps(self) -> None:
        # power_maps[c][t] = class of rep(c)**t for 0 <= t < rep_order(c)
        maps: list[tuple[int, ...]] = []
        for c in self.classes:
            seq = [0]  # t = 0: the identity class
            cur = 0
            for _ in range(c.rep_order - 1):
                cur = self.mult(cur, c.rep)
                seq.append(int(self.class_of[cur]))
            maps.append(tuple(seq))
        self.power_maps = maps
        self.class_inverse = [
            m[-1] if len(m) > 1 else m[0] for m in self.power_maps
        ]

    # -- derived quantities ---------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def is_abelian(self) -> bool:
        return self.k == self.order

    def class_sizes(self) -> list[int]:
        return [c.size for c in self.classes]

    def element_order_sum(self) -> int:
        return sum(c.size * c.rep_order for c in self.classes)

    def sylow_is_normal(self, p: int) -> bool:
        """Exact normality test: the Sylow p-subgroup is normal iff the
        number of elements of p-power order equals the full p-part of |G|."""
        pa = 1
        n = self.order
        while n % p == 0:
            pa *= p
            n //= p
        if pa == 1:
            raise ValueError(f"{p} does not divide the group order {self.order}")
        count = sum(
            c.size
            for c in self.classes
            if c.rep_order == 1 or self._is_p_power(c.rep_order, p)
        )
        return count == pa

    @staticmethod
    def _is_p_power(n: int, p: int) -> bool:
        while n % p == 0:
            n //= p
        return n == 1


def enumerate_group(spec: PermutationGroupSpec) -> GroupData:
    """Breadth-first closure of the generators under composition."""
    guard = size_guard()
    ident = Permutation.identity(spec.degree)
    elements = [ident]
    index = {ident.key()}
    frontier = [ident]
    while frontier:
        nxt = []
        for cur in frontier:
            for g in spec.generators:
                w = cur.compose(g)
                if w.key() not in index:
                    if len(elements) >= guard:
                        raise SizeGuardError(
                            f"{spec.name}: closure exceeds size guard {guard}"
                        )
                    index.add(w.key())
                    elements.append(w)
                    nxt.append(w)
        frontier = nxt
    data = GroupData(spec, elements)
    if spec.expected_order is not None and data.order != spec.expected_order:
        raise OracleError(
            f"{spec.name}: enumerated order {data.order} != expected "
            f"{spec.expected_order}"
        )
    return data


# ---------------------------------------------------------------------------
# Dixon table


def _dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime ell = 1 mod exponent with ell**2 > 4 * exponent**2 * order.

    The size bound makes degree and multiplicity lifts unique; ell never
    divides |G| (so class sizes are invertible mod ell).
    """
    e = exponent
    bound = 4 * e * e * order
    m = 1
    while True:
        ell = m * e + 1
        if ell * ell > bound and order % ell != 0 and is_prime(ell):
            if ell >= (1 << 31):
                raise OracleError(
                    f"no usable modulus below 2**31 for order={order} exponent={e}"
                )
            return ell
        m += 1


def _unity_root(ell: int, e: int) -> int:
    """Canonical element of multiplicative order e in F_ell (e divides ell-1)."""
    if e == 1:
        return 1
    qs = [p for p, _ in factorize(e).factors]
    g = 2
    while True:
        z = pow(g, (ell - 1) // e, ell)
        if z != 1 and all(pow(z, e // q, ell) != 1 for q in qs):
            return z
        g += 1


def _class_matrix_transposed(g: GroupData, ci: int, ell: int) -> np.ndarray:
    """Transpose of the class-algebra matrix of class ci, reduced mod ell.

    M[j, k] counts pairs (x, y) with x in class ci, y in class j, x*y = z_k
    for the fixed representative z_k; the common row eigenvectors of the
    transposes carry the values |C_j| chi(g_j) / chi(1).
    """
    k = g.k
    m = np.zeros((k, k), dtype=np.int64)
    reps = [c.rep for c in g.classes]
    for x in g.classes[ci].members:
        xi = g.inverse[x]
        for kk, z in enumerate(reps):
            y = g.mult(xi, z)
            m[g.class_of[y], kk] += 1
    return m.T % ell


def _krylov_split(r: np.ndarray, ell: int):
    """Try to diagonalize the restriction r via a cyclic vector.

    Builds the Krylov row sequence of e_0; when it has full rank the minimal
    polynomial equals the characteristic polynomial, and if that polynomial
    has all-distinct roots each eigenrow is a polynomial in r applied to
    e_0 (synthetic division), giving the whole eigenbasis in O(d**3).
    Returns (eigenvalues, eigenrows) or None when e_0 is not cyclic.
    """
    d = r.shape[0]
    krylov = np.zeros((d + 1, d), dtype=np.int64)
    krylov[0, 0] = 1
    echelon = np.zeros((d, d), dtype=np.int64)  # rref accumulator
    piv_cols = np.full(d, -1, dtype=np.int64)  # pivot col of each echelon row
    col_to_row = {}
    for j in range(d + 1):
        if j > 0:
            krylov[j] = kernels.mod_matmul(krylov[j - 1], r, ell)
        if j == d:
            break
        v = krylov[j].copy()
        if col_to_row:
            cols = np.fromiter(col_to_row.keys(), dtype=np.int64)
            rows = np.fromiter(col_to_row.values(), dtype=np.int64)
            coef = v[cols]
            v = (v - coef @ echelon[rows]) % ell
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return None  # dependence before full rank: e_0 is not cyclic
        lead = int(nz[0])
        v = v * pow(int(v[lead]), ell - 2, ell) % ell
        if col_to_row:
            coef = echelon[rows, lead]
            hit = np.flatnonzero(coef)
            if hit.size:
                echelon[rows[hit]] = (
                    echelon[rows[hit]] - np.outer(coef[hit], v)
                ) % ell
        echelon[j] = v
        piv_cols[j] = lead
        col_to_row[lead] = j
    # minimal polynomial: krylov[d] = sum c_j krylov[j]
    coeffs = kernels.solve_unique_mod(krylov[:d].T, krylov[d], ell)
    minpoly = np.empty(d + 1, dtype=np.int64)
    minpoly[d] = 1
    minpoly[:d] = (-coeffs) % ell
    roots = kernels.poly_roots_mod(minpoly, ell)
    if roots.shape[0] != d:
        return None  # repeated eigenvalues inside this subspace
    q = np.empty((d, d), dtype=np.int64)
    for i, lam in enumerate(roots.tolist()):
        q[i, d - 1] = 1
        for j in range(d - 2, -1, -1):
            q[i, j] = (minpoly[j + 1] + lam * q[i, j + 1]) % ell
    eigrows = kernels.mod_matmul(q, krylov[:d], ell)
    return roots, eigrows


def _normalize_rows(rows: np.ndarray, ell: int) -> np.ndarray:
    out = rows % ell
    for i in range(out.shape[0]):
        nz = np.flatnonzero(out[i])
        if nz.size == 0:
            raise OracleError("zero eigenvector produced during splitting")
        out[i] = out[i] * pow(int(out[i][nz[0]]), ell - 2, ell) % ell
    return out


def _split_eigenspaces(g: GroupData, ell: int) -> np.ndarray:
    """Common row eigenbasis of all transposed class matrices over F_ell."""
    k = g.k
    order_key = sorted(range(1, k), key=lambda c: (g.classes[c].size, c))
    spaces: list[tuple[np.ndarray, np.ndarray]] = [
        (np.eye(k, dtype=np.int64), np.arange(k, dtype=np.int64))
    ]
    for ci in order_key:
        if all(s.shape[0] == 1 for s, _ in spaces):
            break
        a = _class_matrix_transposed(g, ci, ell)
        new_spaces: list[tuple[np.ndarray, np.ndarray]] = []
        for s, piv in spaces:
            d = s.shape[0]
            if d == 1:
                new_spaces.append((s, piv))
                continue
            restr = kernels.mod_matmul(s, a[:, piv], ell)
            fast = _krylov_split(restr, ell)
            if fast is not None:
                _, eigrows = fast
                glob = _normalize_rows(kernels.mod_matmul(eigrows, s, ell), ell)
                for i in range(d):
                    row = glob[i : i + 1]
                    lead = int(np.flatnonzero(row[0])[0])
                    new_spaces.append((row, np.array([lead], dtype=np.int64)))
            else:
                charpoly = kernels.hessenberg_charpoly(restr, ell)
                roots = kernels.poly_roots_mod(charpoly, ell)
                covered = 0
                for lam in roots.tolist():
                    shifted = (restr - lam * np.eye(d, dtype=np.int64)) % ell
                    basis = kernels.nullspace_mod(shifted.T, ell)
                    if basis.shape[0] == 0:
                        continue
                    child = kernels.mod_matmul(basis, s, ell)
                    child_r, child_piv = kernels.rref_mod(child, ell)
                    dim = child_piv.shape[0]
                    new_spaces.append((child_r[:dim], child_piv))
                    covered += dim
                if covered != d:
                    raise OracleError(
                        "eigenspace splitting lost dimensions "
                        f"({covered} of {d} recovered)"
                    )
        spaces = new_spaces
    if any(s.shape[0] != 1 for s, _ in spaces):
        raise OracleError("class matrices failed to separate all characters")
    rows = np.vstack([s for s, _ in spaces])
    # Character theory: the identity coordinate |C_0| chi(1)/chi(1) = 1 never
    # vanishes, so every normalized row has leading entry 1 at column 0.
    if not (rows[:, 0] == 1).all():
        raise OracleError("eigenvector with vanishing identity coordinate")
    return rows


class CharacterTable:
    """Exact character data: degrees plus per-(character, class) eigenvalue
    multiplicities, with the heavy multiplicity vectors materialized lazily
    per class (kernel detection only needs the eigenvalue-1 component)."""

    def __init__(
        self,
        group: GroupData,
        ell: int,
        unity_root: int,
        degrees: np.ndarray,
        values: np.ndarray,
    ):
        self.group = group
        self.ell = ell
        self.unity_root = unity_root  # fixed element of order exponent(G)
        self.degrees = degrees  # int64, ascending with the final sort
        self.values = values  # k x k modular character values
        self._mult_cache: dict[int, np.ndarray] = {}

    @property
    def k(self) -> int:
        return self.group.k

    def _dft_inverse(self, d: int) -> np.ndarray:
        """Matrix W with W[t, m] = z_d**(-t m), z_d of order d."""
        ell = self.ell
        zd = pow(self.unity_root, self.group.exponent // d, ell)
        zinv = pow(zd, ell - 2, ell)
        pows = np.empty(d, dtype=np.int64)
        acc = 1
        for a in range(d):
            pows[a] = acc
            acc = acc * zinv % ell
        t = np.arange(d, dtype=np.int64)
        return pows[np.outer(t, t) % d]

    def mults_for_class(self, c: int) -> np.ndarray:
        """k x d array: row chi holds the multiplicities of the d-th roots of
        unity among the eigenvalues of chi's representation at class c."""
        cached = self._mult_cache.get(c)
        if cached is not None:
            return cached
        g = self.group
        d = g.classes[c].rep_order
        ell = self.ell
        pm = np.asarray(g.power_maps[c], dtype=np.int64)
        vals = self.values[:, pm]
        w = self._dft_inverse(d)
        inv_d = pow(d, ell - 2, ell)
        mults = kernels.mod_matmul(vals, w, ell) * inv_d % ell
        if (mults > self.degrees[:, None]).any():
            raise OracleError(f"multiplicity lift exceeds degree at class {c}")
        if not (mults.sum(axis=1) == self.degrees).all():
            raise OracleError(f"multiplicities at class {c} do not sum to degrees")
        mults.setflags(write=False)
        self._mult_cache[c] = mults
        return mults

    def mult(self, chi: int, c: int) -> tuple[int, ...]:
        """Eigenvalue multiplicity vector of character chi at class c."""
        return tuple(int(v) for v in self.mults_for_class(c)[chi])

    def eigenvalue_one_counts(self) -> np.ndarray:
        """k x k array of the multiplicity of eigenvalue 1 per (chi, class)."""
        g = self.group
        ell = self.ell
        out = np.empty((self.k, self.k), dtype=np.int64)
        for c in range(self.k):
            d = g.classes[c].rep_order
            pm = np.asarray(g.power_maps[c], dtype=np.int64)
            inv_d = pow(d, ell - 2, ell)
            out[:, c] = self.values[:, pm].sum(axis=1) % ell * inv_d % ell
        if (out > self.degrees[:, None]).any():
            raise OracleError("eigenvalue-1 multiplicity exceeds a degree")
        return out

    def complex_values(self) -> np.ndarray:
        """Float reconstruction of the character values (sanity checks only)."""
        g = self.group
        out = np.zeros((self.k, self.k), dtype=np.complex128)
        for c in range(self.k):
            d = g.classes[c].rep_order
            mults = self.mults_for_class(c)
            roots = np.exp(2j * np.pi * np.arange(d) / d)
            out[:, c] = mults @ roots
        return out

    def row_orthogonality_error(self) -> float:
        """Max deviation of the Hermitian character inner products from
        the identity matrix, in double precision."""
        g = self.group
        v = self.complex_values()
        weights = np.asarray(g.class_sizes(), dtype=np.float64)
        gram = (v * weights) @ v.conj().T / g.order
        return float(np.abs(gram - np.eye(self.k)).max())

    def to_json_dict(self) -> dict:
        return {
            "order": self.group.order,
            "k": self.k,
            "modulus": self.ell,
            "degrees": [int(d) for d in self.degrees],
            "class_sizes": self.group.class_sizes(),
            "class_orders": [c.rep_order for c in self.group.classes],
            "mults": [
                [[int(x) for x in row] for row in self.mults_for_class(c)]
                for c in range(self.k)
            ],
        }


def dixon_table(g: GroupData) -> CharacterTable:
    """Exact character table of an enumerated group."""
    k = g.k
    n = g.order
    ell = _dixon_prime(n, g.exponent)
    z = _unity_root(ell, g.exponent)
    rows = _split_eigenspaces(g, ell)

    sizes = np.asarray(g.class_sizes(), dtype=np.int64)
    inv_sizes = np.asarray(
        [pow(int(s), ell - 2, ell) for s in sizes], dtype=np.int64
    )
    inv_cls = np.asarray(g.class_inverse, dtype=np.int64)
    # orthogonality: chi(1)**2 = |G| / sum_j u_j u_{j^-1} / |C_j|
    s_vals = (rows * rows[:, inv_cls] % ell * inv_sizes[None, :] % ell).sum(
        axis=1
    ) % ell
    sqrt_bound = math.isqrt(n)
    degrees = np.empty(k, dtype=np.int64)
    for i in range(k):
        s = int(s_vals[i])
        if s == 0:
            raise OracleError("degenerate norm in degree recovery")
        deg_sq = n * pow(s, ell - 2, ell) % ell
        root = sqrt_mod(deg_sq, ell)
        deg = min(root, ell - root)
        if not (1 <= deg <= sqrt_bound):
            raise OracleError(f"degree lift {deg} outside [1, sqrt(|G|)]")
        degrees[i] = deg
    if int((degrees * degrees).sum()) != n:
        raise OracleError("degree squares do not sum to the group order")

    values = rows * degrees[:, None] % ell * inv_sizes[None, :] % ell
    table = CharacterTable(g, ell, z, degrees, values)

    # canonical order: by degree, then lexicographically by the concatenated
    # multiplicity vectors (classes ascending)
    def sort_key(i: int):
        return (int(degrees[i]),)

    order = sorted(range(k), key=sort_key)
    order = _refine_by_mults(table, order)
    perm = np.asarray(order, dtype=np.int64)
    return CharacterTable(g, ell, z, degrees[perm], values[perm])


def _refine_by_mults(table: CharacterTable, order: list[int]) -> list[int]:
    """Stable-sort character indices by (degree, mult vectors lexicographic)."""
    import functools

    degrees = table.degrees

    def cmp(a: int, b: int) -> int:
        if degrees[a] != degrees[b]:
            return -1 if degrees[a] < degrees[b] else 1
        for c in range(table.k):
            mc = table.mults_for_class(c)
            ra, rb = mc[a], mc[b]
            if not np.array_equal(ra, rb):
                diff = np.flatnonzero(ra != rb)[0]
                return -1 if ra[diff] < rb[diff] else 1
        return 0

    return sorted(order, key=functools.cmp_to_key(cmp))


# ---------------------------------------------------------------------------
# codegree report


@dataclass(frozen=True)
class CodegreeReport:
    name: str
    order: int
    k: int
    exponent: int
    degrees: tuple[int, ...]
    kernel_sizes: tuple[int, ...]
    codegrees: tuple[int, ...]
    sc: int
    t: int

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "k": self.k,
            "exponent": self.exponent,
            "degrees": list(self.degrees),
            "codegrees": list(self.codegrees),
            "kernel_sizes": list(self.kernel_sizes),
            "Sc": self.sc,
            "T": self.t,
        }


def codegree_report(g: GroupData, table: CharacterTable) -> CodegreeReport:
    """Degrees, kernels, codegrees and the aggregates S_c, T, k.

    The kernel of chi is the union of classes where the eigenvalue-1
    multiplicity equals the degree (all eigenvalues 1, i.e. chi(g) = chi(1)
    exactly); no floating point is involved anywhere.
    """
    if table.group is not g:
        raise ValueError("table does not belong to this group")
    a0 = table.eigenvalue_one_counts()
    sizes = np.asarray(g.class_sizes(), dtype=np.int64)
    in_kernel = a0 == table.degrees[:, None]
    kernel_sizes = in_kernel @ sizes
    codegrees = []
    for i in range(table.k):
        ks = int(kernel_sizes[i])
        deg = int(table.degrees[i])
        if g.order % ks != 0:
            raise OracleError(f"kernel size {ks} does not divide |G| = {g.order}")
        idx = g.order // ks
        if idx % deg != 0:
            raise OracleError(
                f"codegree not integral: |G:ker| = {idx}, degree = {deg}"
            )
        codegrees.append(idx // deg)
    if sum(1 for c in codegrees if c == 1) != 1:
        raise OracleError("expected exactly one character of codegree 1")
    return CodegreeReport(
        name=g.spec.name,
        order=g.order,
        k=table.k,
        exponent=g.exponent,
        degrees=tuple(int(d) for d in table.degrees),
        kernel_sizes=tuple(int(s) for s in kernel_sizes),
        codegrees=tuple(codegrees),
        sc=sum(codegrees),
        t=int(table.degrees.sum()),
    )


def oracle_report(spec: PermutationGroupSpec) -> CodegreeReport:
    """Convenience: enumerate, build the table, and report in one step."""
    g = enumerate_group(spec)
    return codegree_report(g, dixon_table(g))


# ---------------------------------------------------------------------------
# class-count checks


@dataclass(frozen=True)
class ClassCountCheck:
    name: str
    group: str
    applicable: bool
    passed: bool | None
    lhs: str
    rhs: str
    note: str

    def to_json_dict(self) -> dict:
        return {
            "check": self.name,
            "group": self.group,
            "applicable": self.applicable,
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "note": self.note,
        }


def class_count_checks(g: GroupData) -> list[ClassCountCheck]:
    """Class-number inequalities against the group order.

    * nonabelian p-groups: k(G) < (p+1)/p**2 * |G|
    * every prime p with a non-normal Sylow p-subgroup: k(G)/|G| <= 1/p
      (normality decided exactly by counting elements of p-power order)
    """
    results: list[ClassCountCheck] = []
    name = g.spec.name
    factors = factorize(g.order).factors
    k = g.k

    if len(factors) == 1 and not g.is_abelian:
        p = factors[0][0]
        bound = Fraction(p + 1, p * p) * g.order
        results.append(
            ClassCountCheck(
                name="pgroup_class_bound",
                group=name,
                applicable=True,
                passed=Fraction(k) < bound,
                lhs=str(k),
                rhs=str(bound),
                note=f"nonabelian {p}-group",
            )
        )
    else:
        reason = "abelian" if g.is_abelian else "order not a prime power"
        results.append(
            ClassCountCheck(
                name="pgroup_class_bound",
                group=name,
                applicable=False,
                passed=None,
                lhs="",
                rhs="",
                note=f"skipped: {reason}",
            )
        )

    for p, _ in factors:
        if g.sylow_is_normal(p):
            results.append(
                ClassCountCheck(
                    name="nonnormal_sylow_ratio",
                    group=name,
                    applicable=False,
                    passed=None,
                    lhs="",
                    rhs="",
                    note=f"skipped: Sylow {p}-subgroup is normal",
                )
            )
            continue
        ratio = Fraction(k, g.order)
        results.append(
            ClassCountCheck(
                name="nonnormal_sylow_ratio",
                group=name,
                applicable=True,
                passed=ratio <= Fraction(1, p),
                lhs=str(ratio),
                rhs=f"1/{p}",
                note=f"non-normal Sylow {p}-subgroup",
            )
        )
    return results
