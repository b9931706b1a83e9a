"""Hadamard matrices and the digit-flip permutation families built from them.

Row ``k`` of a normalized Hadamard matrix of order ``p`` defines a
permutation of ``1..m^(p-1)``: write ``i - 1`` in base ``m`` (little-endian,
``p - 1`` digits) and replace digit ``a`` by ``m - 1 - digit`` wherever the
row has a ``-1`` in column ``a``.  Any two such permutations have few
distinct sums over pairs of adjacent path indices, which is what makes them
useful as per-block vertex orders in product layouts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from stacklab._text import FormatError
from stacklab.layouts import PreconditionError, StackLayout, VertexOrder

__all__ = [
    "ORDER4_EXAMPLE",
    "HadamardMatrix",
    "PermutationFamily",
    "SumSetAnalysis",
    "UnsupportedOrderError",
    "format_hadamard",
    "format_permutation",
    "lcs",
    "normalize_last_column",
    "paley",
    "parse_hadamard",
    "parse_permutation",
    "path_layout_under_permutation",
    "path_stack_assignment",
    "permutation_family",
    "sum_set",
    "sum_set_bound",
    "sylvester",
    "validate_hadamard",
]


class UnsupportedOrderError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.int64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise FormatError("a Hadamard matrix must be square")
        if not np.all(np.abs(entries) == 1):
            raise FormatError("Hadamard entries must be +1 or -1")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def order(self) -> int:
        return int(self.entries.shape[0])

    def row(self, k: int) -> np.ndarray:
        """Row ``k`` (1-based)."""
        return self.entries[k - 1]

    def __eq__(self, other):
        return isinstance(other, HadamardMatrix) and np.array_equal(self.entries, other.entries)

    __hash__ = None


ORDER4_EXAMPLE = HadamardMatrix(
    [[+1, +1, +1, +1], [-1, -1, +1, +1], [-1, +1, -1, +1], [+1, -1, -1, +1]]
)


def sylvester(p: int) -> HadamardMatrix:
    if p < 1 or p & (p - 1):
        raise UnsupportedOrderError(f"Sylvester construction needs a power of two, got {p}")
    h = np.ones((1, 1), dtype=np.int64)
    base = np.array([[1, 1], [1, -1]], dtype=np.int64)
    while h.shape[0] < p:
        h = np.kron(base, h)
    return HadamardMatrix(h)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def paley(q: int) -> HadamardMatrix:
    """Order ``q + 1`` matrix from quadratic residues modulo a prime ``q = 3 (mod 4)``."""
    if q % 4 != 3:
        raise UnsupportedOrderError(f"Paley construction needs q = 3 (mod 4), got {q}")
    if not _is_prime(q):
        raise UnsupportedOrderError(f"only prime q is supported, got {q}")
    residues = np.zeros(q, dtype=bool)
    residues[(np.arange(1, q) ** 2) % q] = True
    chi = np.where(residues, 1, -1)
    chi[0] = 0
    idx = np.arange(q)
    jacobsthal = chi[(idx[None, :] - idx[:, None]) % q]
    skew = np.zeros((q + 1, q + 1), dtype=np.int64)
    skew[0, 1:] = 1
    skew[1:, 0] = -1
    skew[1:, 1:] = jacobsthal
    return HadamardMatrix(skew + np.eye(q + 1, dtype=np.int64))


def validate_hadamard(h: HadamardMatrix) -> bool:
    """True iff every pair of distinct rows differs in exactly ``p/2`` places."""
    p = h.order
    if p == 1:
        return True
    if p % 2:
        return False
    gram = h.entries @ h.entries.T
    return bool(np.array_equal(gram, p * np.eye(p, dtype=np.int64)))


def normalize_last_column(h: HadamardMatrix) -> HadamardMatrix:
    """Negate every row ending in -1."""
    sign = h.entries[:, -1:]
    return HadamardMatrix(h.entries * sign)


@dataclass(frozen=True, eq=False)
class PermutationFamily:
    """``perms[k-1, i-1] = pi_k(i)`` for ``k = 1..p`` over ``1..n``, ``n = m^(p-1)``."""

    source: HadamardMatrix
    m: int
    perms: np.ndarray
    inverses: np.ndarray

    @property
    def p(self) -> int:
        return self.source.order

    @property
    def n(self) -> int:
        return int(self.perms.shape[1])

    def perm(self, k: int) -> np.ndarray:
        return self.perms[k - 1]

    def inverse(self, k: int) -> np.ndarray:
        return self.inverses[k - 1]


def _digits(n: int, m: int, width: int) -> np.ndarray:
    """``digits[i-1, a]`` is digit ``a`` of ``i - 1`` in base ``m``."""
    i = np.arange(n, dtype=np.int64)
    return np.stack([(i // m**a) % m for a in range(width)], axis=1) if width else np.zeros((n, 0), np.int64)


def permutation_family(h: HadamardMatrix, m: int) -> PermutationFamily:
    if not validate_hadamard(h):
        raise PreconditionError("matrix is not Hadamard")
    if np.any(h.entries[:, -1] != 1):
        raise PreconditionError("matrix must be normalized so its last column is all +1")
    if m < 1:
        raise ValueError("base m must be at least 1")
    p = h.order
    width = p - 1
    n = m**width
    digits = _digits(n, m, width)
    weights = m ** np.arange(width, dtype=np.int64)
    perms = np.empty((p, n), dtype=np.int64)
    inverses = np.empty((p, n), dtype=np.int64)
    for k in range(p):
        flip = h.entries[k, :width] == -1
        dk = np.where(flip[None, :], m - 1 - digits, digits)
        perms[k] = 1 + dk @ weights
        if not np.array_equal(np.sort(perms[k]), np.arange(1, n + 1)):
            raise AssertionError(f"pi_{k + 1} is not a bijection")
        inverses[k, perms[k] - 1] = np.arange(1, n + 1)
    perms.setflags(write=False)
    inverses.setflags(write=False)
    return PermutationFamily(h, m, perms, inverses)


def sum_set_bound(p: int, m: int) -> int:
    """``(2p - 1) m^(p/2 - 1)``, the guaranteed cap on distinct adjacent sums."""
    return (2 * p - 1) * m ** (p // 2 - 1)


@dataclass
class SumSetAnalysis:
    pair: tuple[int, int]
    values: frozenset[int]
    diagonal_values: frozenset[int]
    agree_positions: tuple[int, ...]
    differ_positions: tuple[int, ...]
    # one (i, j) per distinct vector of per-digit sums
    digit_sum_witnesses: dict[tuple[int, ...], tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.values)

    # the sets of digit positions where the two rows agree / differ
    @property
    def A_plus(self) -> tuple[int, ...]:
        return self.agree_positions

    @property
    def A_minus(self) -> tuple[int, ...]:
        return self.differ_positions


def sum_set(family: PermutationFamily, k: int, l: int) -> SumSetAnalysis:
    """Distinct values of ``pi_k(i) + pi_l(j)`` over ``|i - j| <= 1``."""
    if k == l:
        raise ValueError("sum_set needs two distinct permutation indices")
    p, m, n = family.p, family.m, family.n
    width = p - 1
    hk, hl = family.source.row(k)[:width], family.source.row(l)[:width]
    agree = tuple(int(a) for a in np.flatnonzero(hk == hl))
    differ = tuple(int(a) for a in np.flatnonzero(hk != hl))
    i = np.concatenate([np.arange(1, n + 1), np.arange(1, n), np.arange(2, n + 1)])
    j = np.concatenate([np.arange(1, n + 1), np.arange(2, n + 1), np.arange(1, n)])
    pk, pl = family.perm(k), family.perm(l)
    sums = pk[i - 1] + pl[j - 1]
    digits_k = _digits(n, m, width)
    flip_k = hk == -1
    flip_l = hl == -1
    dk = np.where(flip_k[None, :], m - 1 - digits_k, digits_k)
    dl = np.where(flip_l[None, :], m - 1 - digits_k, digits_k)
    tau = dk[i - 1] + dl[j - 1]
    witnesses: dict[tuple[int, ...], tuple[int, int]] = {}
    _, first = np.unique(tau, axis=0, return_index=True)
    for t in first:
        witnesses[tuple(int(x) for x in tau[t])] = (int(i[t]), int(j[t]))
    return SumSetAnalysis(
        pair=(k, l),
        values=frozenset(int(v) for v in np.unique(sums)),
        diagonal_values=frozenset(int(v) for v in np.unique(pk + pl)),
        agree_positions=agree,
        differ_positions=differ,
        digit_sum_witnesses=witnesses,
    )


def path_stack_assignment(n: int, m: int, p: int) -> np.ndarray:
    """Stack of path edge ``i(i+1)`` for ``i = 1..n-1`` (at most ``2p - 3`` stacks).

    Edges inside a base-``m`` block share stack 1.  An edge where ``i`` is
    divisible by exactly ``m^a`` goes to stack ``2a`` or ``2a + 1`` by the
    parity of ``i / m^a``.
    """
    i = np.arange(1, n, dtype=np.int64)
    out = np.ones(i.size, dtype=np.int64)
    if m == 1:
        return out
    for a in range(1, p - 1):
        step = m**a
        hit = (i % step == 0) & (i % (step * m) != 0)
        odd = (i // step) % 2 == 1
        out[hit] = np.where(odd[hit], 2 * a, 2 * a + 1)
    return out


def path_layout_under_permutation(family: PermutationFamily, k: int) -> StackLayout:
    """Stack layout of the path ``1..n`` in the order ``pi_k^{-1}(1..n)``."""
    n, m, p = family.n, family.m, family.p
    order = VertexOrder(family.inverse(k))
    if n == 1:
        return StackLayout(order, np.zeros((0, 2), np.int64), np.zeros(0, np.int64), 0)
    i = np.arange(1, n, dtype=np.int64)
    edges = np.column_stack((i, i + 1))
    return StackLayout(order, edges, path_stack_assignment(n, m, p), max(1, 2 * p - 3))


def lcs(family: PermutationFamily, k: int, l: int) -> int:
    """Longest common subsequence of the value sequences of ``pi_k`` and ``pi_l``."""
    a, b = family.perm(k), family.perm(l)
    prev = np.zeros(b.size + 1, dtype=np.uint64)
    for x in a:
        cand = prev.copy()
        cand[1:] = np.maximum(prev[1:], prev[:-1] + (b == x))
        prev = np.maximum.accumulate(cand)
    return int(prev[-1])


# ------------------------------------------------------------- text format

def format_hadamard(h: HadamardMatrix) -> str:
    rows = ["".join("+" if x > 0 else "-" for x in r) for r in h.entries]
    return f"hadamard {h.order}\n" + "\n".join(rows) + "\n"


def parse_hadamard(text: str) -> HadamardMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0].split()[0] != "hadamard" or len(lines[0].split()) != 2:
        raise FormatError("expected 'hadamard <p>' header")
    p = int(lines[0].split()[1])
    rows = lines[1:]
    if len(rows) != p or any(len(r) != p or set(r) - {"+", "-"} for r in rows):
        raise FormatError(f"expected {p} rows of {p} '+'/'-' characters")
    return HadamardMatrix([[1 if c == "+" else -1 for c in r] for r in rows])


def format_permutation(perm) -> str:
    perm = np.asarray(perm, dtype=np.int64)
    return f"perm {perm.size}\n" + " ".join(map(str, perm.tolist())) + "\n"


def parse_permutation(text: str) -> np.ndarray:
    tokens = " ".join(ln.split("#", 1)[0] for ln in text.splitlines()).split()
    if len(tokens) < 2 or tokens[0] != "perm":
        raise FormatError("expected 'perm <n>' header")
    n = int(tokens[1])
    values = np.array([int(t) for t in tokens[2:]], dtype=np.int64)
    if values.size != n or not np.array_equal(np.sort(values), np.arange(1, n + 1)):
        raise FormatError(f"expected a permutation of 1..{n}")
    return values
