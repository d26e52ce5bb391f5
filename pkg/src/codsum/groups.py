"""Construction of the group families as explicit faithful permutation groups.

Families covered: cyclic groups, abelian groups from prime-power cyclic
factors, coprime metacyclic semidirect products C_n : C_m, the order-3
fixed-point-free extensions of products of prime planes, direct products,
and a fixed library of small p-groups.  Permutations are 0-based dense
int64 arrays; composition is a single fancy-indexing pass.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .arith import factorize, is_prime, multiplicative_order
from .errors import SizeGuardError, SpecError

DEFAULT_SIZE_GUARD = 20000
_GUARD_ENV = "CODSUM_SIZE_GUARD"


def size_guard() -> int:
    """Maximum group order the enumeration oracle will accept."""
    raw = os.environ.get(_GUARD_ENV)
    if raw is None:
        return DEFAULT_SIZE_GUARD
    try:
        value = int(raw)
    except ValueError as exc:
        raise SpecError(f"{_GUARD_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise SpecError(f"{_GUARD_ENV} must be positive, got {value}")
    return value


def _check_guard(expected_order: int | None, what: str) -> None:
    guard = size_guard()
    if expected_order is not None and expected_order > guard:
        raise SizeGuardError(
            f"{what}: expected order {expected_order} exceeds size guard {guard}"
        )


class Permutation:
    """A permutation of {0, ..., degree-1} stored as a dense image array."""

    __slots__ = ("images", "_key")

    def __init__(self, images) -> None:
        arr = np.asarray(images, dtype=np.int64)
        if arr.ndim != 1:
            raise SpecError("permutation images must be one-dimensional")
        n = arr.shape[0]
        seen = np.zeros(n, dtype=np.bool_)
        if n and (arr.min() < 0 or arr.max() >= n):
            raise SpecError("permutation images out of range")
        seen[arr] = True
        if not seen.all():
            raise SpecError("permutation images are not a bijection")
        arr.setflags(write=False)
        self.images = arr
        self._key = arr.tobytes()

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(np.arange(degree, dtype=np.int64))

    @property
    def degree(self) -> int:
        return self.images.shape[0]

    def compose(self, other: "Permutation") -> "Permutation":
        """self * other: apply ``other`` first, then ``self``."""
        return Permutation(self.images[other.images])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.degree, dtype=np.int64)
        return Permutation(inv)

    def order(self) -> int:
        """Multiplicative order: lcm of cycle lengths."""
        seen = np.zeros(self.degree, dtype=np.bool_)
        result = 1
        for start in range(self.degree):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = int(self.images[j])
                length += 1
            result = result * length // math.gcd(result, length)
        return result

    def is_identity(self) -> bool:
        return bool((self.images == np.arange(self.degree)).all())

    def key(self) -> bytes:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Permutation({self.images.tolist()})"


@dataclass(frozen=True)
class PermutationGroupSpec:
    degree: int
    generators: tuple[Permutation, ...]
    name: str
    expected_order: int | None = None

    def __post_init__(self) -> None:
        if not self.generators:
            raise SpecError("a group spec needs at least one generator")
        for g in self.generators:
            if g.degree != self.degree:
                raise SpecError(
                    f"generator degree {g.degree} != spec degree {self.degree}"
                )
        _check_guard(self.expected_order, self.name)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "generators": [g.images.tolist() for g in self.generators],
            "expected_order": self.expected_order,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PermutationGroupSpec":
        try:
            gens = tuple(Permutation(imgs) for imgs in data["generators"])
            return cls(
                degree=int(data["degree"]),
                generators=gens,
                name=str(data.get("name", "group")),
                expected_order=(
                    None
                    if data.get("expected_order") is None
                    else int(data["expected_order"])
                ),
            )
        except KeyError as exc:
            raise SpecError(f"group spec JSON missing field {exc}") from exc


def save_spec(spec: PermutationGroupSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_json_dict(), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_spec(path: str) -> PermutationGroupSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return PermutationGroupSpec.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class AbelianGroupSpec:
    """An abelian group as a multiset of prime-power cyclic factors."""

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        for q in self.factors:
            if q < 2:
                raise SpecError(f"factor {q} is not a prime power >= 2")
            if len(factorize(q).factors) != 1:
                raise SpecError(f"factor {q} is not a prime power")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    def prime_exponents(self) -> dict[int, list[int]]:
        """Per prime p, the descending list of exponents a with p**a a factor."""
        out: dict[int, list[int]] = {}
        for q in self.factors:
            ((p, a),) = factorize(q).factors
            out.setdefault(p, []).append(a)
        for exps in out.values():
            exps.sort(reverse=True)
        return out

    @property
    def is_cyclic(self) -> bool:
        primes = [factorize(q).factors[0][0] for q in self.factors]
        return len(primes) == len(set(primes))

    def label(self) -> str:
        return "C1" if not self.factors else "x".join(f"C{q}" for q in self.factors)


@dataclass(frozen=True)
class MetacyclicSpec:
    """Parameters of the coprime semidirect product C_n : C_m with x -> x**r."""

    n: int
    m: int
    r: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise SpecError("n and m must be positive")
        if math.gcd(self.n, self.m) != 1:
            raise SpecError(f"gcd(n, m) must be 1, got n={self.n} m={self.m}")
        if not (0 <= self.r < self.n):
            raise SpecError(f"r must lie in [0, n), got r={self.r} n={self.n}")
        if math.gcd(self.r, self.n) != 1:
            raise SpecError(f"gcd(r, n) must be 1, got r={self.r} n={self.n}")
        if pow(self.r, self.m, self.n) != 1 % self.n:
            raise SpecError(f"r**m != 1 mod n for (n={self.n}, m={self.m}, r={self.r})")

    @property
    def order(self) -> int:
        return self.n * self.m

    @property
    def nontrivial_action(self) -> bool:
        return self.n > 1 and self.r != 1

    @property
    def is_frobenius(self) -> bool:
        """True when the complement acts fixed-point-freely with full order m."""
        if self.n <= 1 or self.m <= 1:
            return False
        if multiplicative_order(self.r, self.n) != self.m:
            return False
        return all(
            math.gcd((pow(self.r, j, self.n) - 1) % self.n, self.n) == 1
            for j in range(1, self.m)
        )

    def label(self) -> str:
        return f"C{self.n}:C{self.m}(r={self.r})"


@dataclass(frozen=True)
class CounterexampleSpec:
    """Prime list for the order-3 extension of a product of prime planes.

    Every prime must be congruent to 2 mod 3, so that the plane action of
    the order-3 element has no nonzero fixed vectors and no cube roots of
    unity exist mod p.  The group has order 3 * prod(p**2).
    """

    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.primes)) != len(self.primes):
            raise SpecError(f"duplicate primes in {self.primes}")
        for p in self.primes:
            if not is_prime(p):
                raise SpecError(f"{p} is not prime")
            if p % 3 != 2:
                raise SpecError(f"{p} is not congruent to 2 mod 3")
        object.__setattr__(self, "primes", tuple(sorted(self.primes)))

    @property
    def order(self) -> int:
        return 3 * math.prod(p * p for p in self.primes)

    def label(self) -> str:
        return "CE[" + ",".join(str(p) for p in self.primes) + "]"


# ---------------------------------------------------------------------------
# builders


def build_cyclic(n: int) -> PermutationGroupSpec:
    """C_n as a single n-cycle on n points."""
    if n < 1:
        raise SpecError(f"cyclic order must be >= 1, got {n}")
    _check_guard(n, f"C{n}")
    images = (np.arange(n, dtype=np.int64) + 1) % n
    return PermutationGroupSpec(
        degree=n, generators=(Permutation(images),), name=f"C{n}", expected_order=n
    )


def build_abelian(spec: AbelianGroupSpec) -> PermutationGroupSpec:
    """One disjoint cycle per factor; degree is the sum of the factors."""
    if not spec.factors:
        return build_cyclic(1)
    _check_guard(spec.order, spec.label())
    degree = sum(spec.factors)
    gens = []
    offset = 0
    for q in spec.factors:
        images = np.arange(degree, dtype=np.int64)
        images[offset : offset + q] = offset + (np.arange(q) + 1) % q
        gens.append(Permutation(images))
        offset += q
    return PermutationGroupSpec(
        degree=degree,
        generators=tuple(gens),
        name=spec.label(),
        expected_order=spec.order,
    )


def build_metacyclic(spec: MetacyclicSpec) -> PermutationGroupSpec:
    """C_n : C_m on n + m points.

    Generator x shifts the first block; generator y multiplies the first
    block by r and shifts the second block, so the action is faithful for
    every valid spec (the marker block keeps powers of y distinct even when
    the action on C_n is not).
    """
    n, m, r = spec.n, spec.m, spec.r
    _check_guard(spec.order, spec.label())
    degree = n + m
    x = np.arange(degree, dtype=np.int64)
    x[:n] = (np.arange(n) + 1) % n
    y = np.arange(degree, dtype=np.int64)
    y[:n] = (np.arange(n) * r) % n
    y[n:] = n + (np.arange(m) + 1) % m
    return PermutationGroupSpec(
        degree=degree,
        generators=(Permutation(x), Permutation(y)),
        name=spec.label(),
        expected_order=spec.order,
    )


def build_counterexample(spec: CounterexampleSpec) -> PermutationGroupSpec:
    """The order-3 fixed-point-free extension acting on prime planes.

    Per prime p: two translations of the plane F_p x F_p, plus one global
    order-3 generator acting on each plane as (u, v) -> (-v, u - v) (the
    companion matrix of x**2 + x + 1) and as a 3-cycle on a marker block.
    """
    _check_guard(spec.order, spec.label())
    sizes = [p * p for p in spec.primes]
    degree = sum(sizes) + 3
    gens: list[Permutation] = []
    c = np.arange(degree, dtype=np.int64)
    offset = 0
    for p, sz in zip(spec.primes, sizes):
        u, v = np.divmod(np.arange(sz, dtype=np.int64), p)
        t1 = np.arange(degree, dtype=np.int64)
        t1[offset : offset + sz] = offset + ((u + 1) % p) * p + v
        t2 = np.arange(degree, dtype=np.int64)
        t2[offset : offset + sz] = offset + u * p + (v + 1) % p
        gens.append(Permutation(t1))
        gens.append(Permutation(t2))
        c[offset : offset + sz] = offset + ((-v) % p) * p + (u - v) % p
        offset += sz
    c[offset:] = offset + (np.arange(3) + 1) % 3
    gens.append(Permutation(c))
    return PermutationGroupSpec(
        degree=degree,
        generators=tuple(gens),
        name=spec.label(),
        expected_order=spec.order,
    )


def build_direct_product(
    g1: PermutationGroupSpec, g2: PermutationGroupSpec
) -> PermutationGroupSpec:
    """Disjoint-union action of g1 x g2 on degree1 + degree2 points."""
    degree = g1.degree + g2.degree
    expected = None
    if g1.expected_order is not None and g2.expected_order is not None:
        expected = g1.expected_order * g2.expected_order
    _check_guard(expected, f"{g1.name}x{g2.name}")
    gens = []
    for g in g1.generators:
        images = np.arange(degree, dtype=np.int64)
        images[: g1.degree] = g.images
        gens.append(Permutation(images))
    for g in g2.generators:
        images = np.arange(degree, dtype=np.int64)
        images[g1.degree :] = g1.degree + g.images
        gens.append(Permutation(images))
    return PermutationGroupSpec(
        degree=degree,
        generators=tuple(gens),
        name=f"{g1.name}x{g2.name}",
        expected_order=expected,
    )


def semidirect_exists(p: int, q: int, n: int) -> bool:
    """Whether C_p**n admits a faithful-kernel semidirect action by C_q.

    True exactly when q divides p**m - 1 for some m <= n.
    """
    if not is_prime(p) or not is_prime(q):
        raise SpecError(f"p and q must be prime, got p={p} q={q}")
    if p == q:
        raise SpecError("p and q must be distinct primes")
    if n < 1:
        raise SpecError(f"n must be >= 1, got {n}")
    return any(pow(p, m, q) == 1 for m in range(1, n + 1))


def _quaternion_generators() -> tuple[Permutation, Permutation]:
    # Regular action on [1, -1, i, -i, j, -j, k, -k]: left multiplication
    # by i and by j (i*k = -j, hence 6 -> 5 and 7 -> 4).
    left_i = Permutation([2, 3, 1, 0, 6, 7, 5, 4])
    left_j = Permutation([4, 5, 7, 6, 1, 0, 2, 3])
    return left_i, left_j


def _heisenberg_generators() -> tuple[Permutation, Permutation]:
    # Upper unitriangular 3x3 over F_3 acting on column vectors (x, y, z),
    # point index x + 3y + 9z.  X adds y to x; Y adds z to y.
    idx = np.arange(27, dtype=np.int64)
    x, rest = idx % 3, idx // 3
    y, z = rest % 3, rest // 3
    gx = Permutation((x + y) % 3 + 3 * y + 9 * z)
    gy = Permutation(x + 3 * ((y + z) % 3) + 9 * z)
    return gx, gy


def _dihedral8() -> PermutationGroupSpec:
    # Square symmetries: rotation and a diagonal reflection.
    rot = Permutation([1, 2, 3, 0])
    flip = Permutation([0, 3, 2, 1])
    return PermutationGroupSpec(4, (rot, flip), "D8", expected_order=8)


def pgroup_library() -> list[PermutationGroupSpec]:
    """Fixed corpus of small p-groups used by the verification suites."""
    q_i, q_j = _quaternion_generators()
    h_x, h_y = _heisenberg_generators()
    return [
        build_cyclic(4),
        build_cyclic(8),
        build_abelian(AbelianGroupSpec((2, 2))),
        build_abelian(AbelianGroupSpec((2, 4))),
        build_abelian(AbelianGroupSpec((2, 2, 2))),
        _dihedral8(),
        PermutationGroupSpec(8, (q_i, q_j), "Q8", expected_order=8),
        build_cyclic(9),
        build_abelian(AbelianGroupSpec((3, 3))),
        PermutationGroupSpec(27, (h_x, h_y), "Heis27", expected_order=27),
        build_cyclic(27),
    ]
