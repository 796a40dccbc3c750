"""Hermitian-inner-product linear codes over GF(4).

A code is held as its reduced-echelon generator matrix with a fixed
column order, so equality of row spaces is plain tuple comparison and
deduplication pipelines get constant-time code equality.

Includes the standard length-18 material: the counting formula for the
number of distinct Hermitian self-dual codes, the weight-enumerator
identity that pins the full distribution from A4 and A6, the extremal
code built from cyclic shifts, and the eleven tabulated codes derived
from it (plus conjugation, which supplies the two extra codes used by
the Hadamard-matrix pipeline).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import gf4
from .gf4 import (
    GF4Matrix,
    GF4Vector,
    rref_rows,
    vec_conj,
    vec_mul,
    vec_scale,
    vec_sum,
    vec_weight,
)

MAX_ENUM_DIM = 12


class RankDeficientError(ValueError):
    """A code file whose listed generators are linearly dependent."""


def hermitian_inner_bits(x: int, y: int, n: int) -> int:
    """sum_i x_i * y_i^2 on packed vectors."""
    return vec_sum(vec_mul(x, vec_conj(y, n), n), n)


def hermitian_inner(x: GF4Vector, y: GF4Vector) -> int:
    """Hermitian inner product; linear in x, conjugate-linear in y."""
    if x.n != y.n:
        raise ValueError("length mismatch")
    return hermitian_inner_bits(x.bits, y.bits, x.n)


class LinearCode:
    """A linear code over GF(4), stored as rref generator rows.

    ``LinearCode(n, rows)`` normalizes the given packed rows; use
    ``from_vectors``/``from_matrix`` for friendlier constructors.  The
    zero-dimensional code of any length and the length-0 identity element
    for direct sums are both representable.
    """

    __slots__ = ("n", "rows", "_wd", "_cert")

    def __init__(self, n: int, rows=()):
        n = int(n)
        if n < 0 or n > gf4.MAX_LEN:
            raise ValueError(f"code length must be in 0..{gf4.MAX_LEN}")
        rows = list(rows)
        if n == 0:
            if rows:
                raise ValueError("length-0 code cannot have generators")
            red = []
        else:
            red, _ = rref_rows(rows, n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(red))
        object.__setattr__(self, "_wd", None)
        object.__setattr__(self, "_cert", None)

    def __setattr__(self, *a):
        raise AttributeError("LinearCode is immutable")

    @classmethod
    def from_vectors(cls, vecs) -> "LinearCode":
        vecs = list(vecs)
        return cls(vecs[0].n, (v.bits for v in vecs))

    @classmethod
    def from_matrix(cls, m: GF4Matrix) -> "LinearCode":
        return cls(m.ncols, m.rows)

    @property
    def k(self) -> int:
        return len(self.rows)

    def generator_matrix(self) -> GF4Matrix:
        return GF4Matrix(self.n, self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearCode) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __contains__(self, v) -> bool:
        bits = v.bits if isinstance(v, GF4Vector) else int(v)
        red, piv = self.rows, self._pivots()
        return gf4.reduce_against(bits, list(red), piv, self.n) == 0

    def _pivots(self) -> list[int]:
        piv = []
        for r in self.rows:
            c = 0
            while (r >> (2 * c)) & 3 == 0:
                c += 1
            piv.append(c)
        return piv

    def codewords(self) -> np.ndarray:
        """All 4^k codewords as a (4^k, n) uint8 array (k <= 12 enforced)."""
        if self.k > MAX_ENUM_DIM:
            raise ValueError(f"codeword enumeration needs k <= {MAX_ENUM_DIM}, got k={self.k}")
        return gf4.enumerate_span(list(self.rows), self.n)

    def __repr__(self) -> str:
        return f"LinearCode(n={self.n}, k={self.k})"

    def __str__(self) -> str:
        return str(self.generator_matrix())


@dataclass(frozen=True)
class WeightDistribution:
    """Codeword counts by weight: counts[w] = number of words of weight w."""

    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, w: int) -> int:
        return self.counts[w]

    def minimum_weight(self) -> int:
        for w in range(1, len(self.counts)):
            if self.counts[w]:
                return w
        raise ValueError("zero code has no nonzero codeword")

    def total(self) -> int:
        return sum(self.counts)


def weight_distribution(c: LinearCode) -> WeightDistribution:
    """Exact counts by full codeword enumeration (cached on the code)."""
    if c._wd is not None:
        return c._wd
    if c.k > MAX_ENUM_DIM:
        raise ValueError(f"weight distribution needs k <= {MAX_ENUM_DIM}, got k={c.k}")
    counts = np.zeros(c.n + 1, dtype=np.int64)
    # enumerate in blocks of at most 4^9 words to bound memory at k=12
    head = min(c.k, 9)
    base = gf4.enumerate_span(list(c.rows[:head]), c.n) if c.n else np.zeros((1, 0), np.uint8)
    tail = list(c.rows[head:])
    tail_words = gf4.enumerate_span(tail, c.n) if tail else np.zeros((1, c.n), np.uint8)
    for off in tail_words:
        block = base ^ off
        w = np.count_nonzero(block, axis=1)
        counts += np.bincount(w, minlength=c.n + 1)
    wd = WeightDistribution(tuple(int(x) for x in counts))
    object.__setattr__(c, "_wd", wd)
    return wd


def minimum_weight(c: LinearCode) -> int:
    return weight_distribution(c).minimum_weight()


def hermitian_dual(c: LinearCode) -> LinearCode:
    """The code of vectors Hermitian-orthogonal to every codeword."""
    if c.k == 0:
        return LinearCode(c.n, [1 << (2 * i) for i in range(c.n)])
    conj_gens = GF4Matrix(c.n, (vec_conj(r, c.n) for r in c.rows))
    return LinearCode.from_matrix(gf4.kernel(conj_gens))


def is_self_dual(c: LinearCode) -> bool:
    """k = n/2 and all generator pairs Hermitian-orthogonal."""
    if c.n == 0 or 2 * c.k != c.n:
        return False
    for i, ri in enumerate(c.rows):
        for rj in c.rows[i:]:
            if hermitian_inner_bits(ri, rj, c.n):
                return False
    return True


def is_self_orthogonal(c: LinearCode) -> bool:
    for i, ri in enumerate(c.rows):
        for rj in c.rows[i:]:
            if hermitian_inner_bits(ri, rj, c.n):
                return False
    return True


def conjugate_code(c: LinearCode) -> LinearCode:
    """The image of the code under entrywise squaring."""
    return LinearCode(c.n, (vec_conj(r, c.n) for r in c.rows))


def intersect(a: LinearCode, b: LinearCode) -> LinearCode:
    """Row-space intersection (Zassenhaus on the doubled coordinates)."""
    if a.n != b.n:
        raise ValueError("length mismatch")
    n = a.n
    if 2 * n > gf4.MAX_LEN:
        raise ValueError("intersection supported only up to length 32")
    shift = 2 * n
    stacked = [r | (r << shift) for r in a.rows] + [r for r in b.rows]
    red, _ = rref_rows(stacked, 2 * n)
    mask = (1 << shift) - 1
    out = []
    for r in red:
        if r & mask == 0:
            out.append(r >> shift)
    return LinearCode(n, out)


def direct_sum(a: LinearCode, b: LinearCode) -> LinearCode:
    """Coordinate-disjoint sum; self-dual iff both summands are."""
    if a.n == 0:
        return b
    if b.n == 0:
        return a
    shift = 2 * a.n
    rows = list(a.rows) + [r << shift for r in b.rows]
    return LinearCode(a.n + b.n, rows)


def count_self_dual(n: int) -> int:
    """Number of distinct Hermitian self-dual codes of even length n."""
    if n % 2 or n < 2:
        raise ValueError("self-dual codes exist only for even n >= 2")
    out = 1
    for i in range(n // 2):
        out *= 2 ** (2 * i + 1) + 1
    return out


# weight enumerator of a length-18 Hermitian self-dual code with d >= 4,
# as polynomial coefficients in (1, A4, A6) per even weight 8..18
_WE18 = {
    8: (2754, 27, -6),
    10: (18360, -106, 15),
    12: (77112, 119, -20),
    14: (110160, -12, 15),
    16: (50949, -51, -6),
    18: (2808, 22, 1),
}


def predicted_weight_enumerator(a4: int, a6: int) -> WeightDistribution:
    """Full length-18 distribution from A4 and A6; errors on impossible pairs."""
    counts = [0] * 19
    counts[0] = 1
    counts[4] = a4
    counts[6] = a6
    for w, (c0, c4, c6) in _WE18.items():
        v = c0 + c4 * a4 + c6 * a6
        if v < 0:
            raise ValueError(f"impossible (A4, A6) = ({a4}, {a6}): A{w} = {v} < 0")
        counts[w] = v
    if a4 < 0 or a6 < 0:
        raise ValueError("negative inputs")
    return WeightDistribution(tuple(counts))


# -- named constructions ----------------------------------------------------

_S18_CYCLE = "wWwwwWWWWWWwwwWw"  # coordinates 2..17 of the shift template


def build_s18() -> LinearCode:
    """The extremal self-dual [18, 9, 8] code from cyclic shifts.

    Rows are the 17 cyclic shifts of a fixed weight-17 template over the
    first 17 coordinates, each completed by a final 1.  Rank 9 and
    self-duality are asserted at construction.
    """
    template = [1] + [gf4.char_to_elem(ch) for ch in _S18_CYCLE]
    assert len(template) == 17
    rows = []
    for s in range(17):
        shifted = template[-s:] + template[:-s] if s else list(template)
        rows.append(GF4Vector.from_entries(shifted + [1]).bits)
    code = LinearCode(18, rows)
    if code.k != 9:
        raise AssertionError(f"shift construction has rank {code.k}, expected 9")
    if not is_self_dual(code):
        raise AssertionError("shift construction is not self-dual")
    return code


#: length-18 self-dual codes C_i derived from the extremal code:
#: i -> (dim of the intersection with it, defining vectors)
TABLE_EX: dict[int, tuple[int, tuple[str, ...]]] = {
    10: (8, ("111w11111WWWwWWW00",)),
    14: (8, ("1111111111Ww000000",)),
    15: (8, ("1w11111111wW0W01ww",)),
    17: (8, ("1111111110w0wWwwww",)),
    30: (8, ("111111111ww0W00000",)),
    38: (7, ("11111111100WwWwwww", "1w1111111001W0W0WW")),
    40: (7, ("1111111111ww11w111", "w11111111WwwW0w0w1")),
    83: (7, ("111111111000W1w000", "w111111110WWw0wW1w")),
    120: (7, ("111111111100www111", "w1111111111w001W1w")),
    147: (7, ("1111111111WW0wWw10", "w11111111WW1W011W0")),
    190: (6, ("1111111110W00WW000", "w111111110WWWW1000", "1w11111110100WW10W")),
}

_TABLE_EX_SHA256 = "de561622ff990f6f4ac1d77c05d0e91fa11a864b0697528fdd38340ccc690c4f"


def _table_checksum() -> str:
    blob = ";".join(
        f"{i}:{dim}:{','.join(vs)}" for i, (dim, vs) in sorted(TABLE_EX.items())
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def build_table_ex_code(i: int) -> LinearCode:
    """Construct tabulated code i from the extremal code and its vectors.

    The result is the span of (S ∩ <v_1..v_m>_perp) and the v_j, where S
    is the extremal code; it is checked self-dual with the tabulated
    intersection dimension.
    """
    if i not in TABLE_EX:
        raise KeyError(f"unknown table index {i}; known: {sorted(TABLE_EX)}")
    if _table_checksum() != _TABLE_EX_SHA256:
        raise AssertionError("embedded table data corrupted")
    dim, vec_strs = TABLE_EX[i]
    s18 = build_s18()
    vecs = [GF4Vector.from_string(s) for s in vec_strs]
    vspan = LinearCode.from_vectors(vecs)
    vperp = hermitian_dual(vspan)
    core = intersect(s18, vperp)
    code = LinearCode(18, list(core.rows) + [v.bits for v in vecs])
    if code.k != 9 or not is_self_dual(code):
        raise AssertionError(f"table code {i} failed self-duality")
    inter_dim = intersect(s18, code).k
    if inter_dim != dim:
        raise AssertionError(f"table code {i}: intersection dim {inter_dim} != {dim}")
    return code


# -- file format -------------------------------------------------------------


def code_to_text(c: LinearCode) -> str:
    lines = [f"GF4 n={c.n} k={c.k}"]
    lines += [str(GF4Vector(c.n, r)) for r in c.rows]
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> LinearCode:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("GF4 "):
        raise ValueError("missing 'GF4 n=<n> k=<k>' header")
    try:
        fields = dict(tok.split("=") for tok in lines[0].split()[1:])
        n, k = int(fields["n"]), int(fields["k"])
    except (ValueError, KeyError):
        raise ValueError(f"bad header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != k:
        raise ValueError(f"expected {k} generator rows, got {len(body)}")
    rows = []
    for ln in body:
        v = GF4Vector.from_string(ln)
        if v.n != n:
            raise ValueError(f"row length {v.n} != n={n}")
        rows.append(v.bits)
    code = LinearCode(n, rows)
    if code.k != k:
        raise RankDeficientError(f"generators span only {code.k} < k={k} dimensions")
    return code
