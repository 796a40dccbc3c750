"""Arithmetic and dense linear algebra over the field with four elements.

Elements of GF(4) = {0, 1, w, W} (W = w^2 = w + 1) are encoded in two bits::

    00 = 0,  01 = 1,  10 = w,  11 = W

so that an element value 2a + b stands for a*w + b with a, b in GF(2).
Addition is XOR.  Vectors of length <= 64 are packed two bits per
coordinate into a single Python int, coordinate i at bits (2i+1, 2i),
which keeps row operations in the elimination hot loops allocation-free.

The text alphabet for elements is ``0 1 w W``; matrices render one row
per line.  This encoding is shared by every file format in the package.
"""

from __future__ import annotations

import numpy as np

ZERO, ONE, OMEGA, OMEGA_BAR = 0, 1, 2, 3

#: multiplication table, MUL[a][b] = a*b
MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)

#: multiplicative inverses (index 0 unused)
INV = (0, 1, 3, 2)

#: conjugation x -> x^2 (swaps w and W)
CONJ = (0, 1, 3, 2)

ELEM_CHARS = "01wW"
_CHAR_TO_ELEM = {c: i for i, c in enumerate(ELEM_CHARS)}

MAX_LEN = 64

# numpy lookup tables for vectorized codeword sweeps
MUL_TABLE = np.array(MUL, dtype=np.uint8)
CONJ_TABLE = np.array(CONJ, dtype=np.uint8)
SCALE_TABLES = np.array([[MUL[s][x] for x in range(4)] for s in range(4)], dtype=np.uint8)


def gf4_mul(a: int, b: int) -> int:
    """Product of two field elements (2-bit codes)."""
    return MUL[a][b]


def gf4_add(a: int, b: int) -> int:
    return a ^ b


def gf4_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("inverse of 0 in GF(4)")
    return INV[a]


def gf4_conj(a: int) -> int:
    """Conjugation x -> x^2; fixes 0 and 1, swaps w and W."""
    return CONJ[a]


def elem_to_char(a: int) -> str:
    return ELEM_CHARS[a]


def char_to_elem(c: str) -> int:
    try:
        return _CHAR_TO_ELEM[c]
    except KeyError:
        raise ValueError(f"not a GF(4) symbol: {c!r} (expected one of '0 1 w W')") from None


def _lo_mask(n: int) -> int:
    # 0b0101...01 with n pairs
    return (4**n - 1) // 3


def pack(entries) -> int:
    """Pack an iterable of 2-bit element codes into an int, entry i at bits 2i."""
    v = 0
    for i, e in enumerate(entries):
        if not 0 <= e <= 3:
            raise ValueError(f"entry {e!r} is not a GF(4) code")
        v |= e << (2 * i)
    return v


def unpack(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (2 * i)) & 3 for i in range(n))


def vec_get(v: int, i: int) -> int:
    return (v >> (2 * i)) & 3


def vec_set(v: int, i: int, e: int) -> int:
    return (v & ~(3 << (2 * i))) | (e << (2 * i))


def vec_scale(v: int, s: int, n: int) -> int:
    """Multiply a packed vector by the scalar s."""
    if s == 0:
        return 0
    if s == 1:
        return v
    lo = _lo_mask(n)
    a = (v >> 1) & lo
    b = v & lo
    if s == OMEGA:
        return ((a ^ b) << 1) | a
    return (b << 1) | (a ^ b)  # s == OMEGA_BAR


def vec_conj(v: int, n: int) -> int:
    """Entrywise squaring of a packed vector (swaps w and W)."""
    lo = _lo_mask(n)
    a = (v >> 1) & lo
    b = v & lo
    return (a << 1) | (a ^ b)


def vec_mul(u: int, v: int, n: int) -> int:
    """Entrywise product of two packed vectors."""
    lo = _lo_mask(n)
    a1, b1 = (u >> 1) & lo, u & lo
    a2, b2 = (v >> 1) & lo, v & lo
    aa = a1 & a2
    hi = aa ^ (a1 & b2) ^ (a2 & b1)
    return (hi << 1) | (aa ^ (b1 & b2))


def vec_weight(v: int, n: int) -> int:
    """Number of nonzero coordinates."""
    lo = _lo_mask(n)
    return (((v >> 1) | v) & lo).bit_count()


def vec_sum(v: int, n: int) -> int:
    """Sum of all coordinates, as a field element."""
    lo = _lo_mask(n)
    hi_par = (((v >> 1) & lo).bit_count()) & 1
    lo_par = ((v & lo).bit_count()) & 1
    return (hi_par << 1) | lo_par


def vec_dot(u: int, v: int, n: int) -> int:
    """Ordinary (bilinear) dot product sum_i u_i v_i."""
    return vec_sum(vec_mul(u, v, n), n)


def conjugate(vec: "GF4Vector") -> "GF4Vector":
    """Entrywise squaring map on vectors; an involution fixing {0, 1}."""
    return GF4Vector(vec.n, vec_conj(vec.bits, vec.n))


class GF4Vector:
    """An immutable vector over GF(4), bit-packed.

    Supports +, scalar *, entrywise conjugation and weight.  Lengths are
    limited to 64 coordinates (one packed word).
    """

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if not 1 <= n <= MAX_LEN:
            raise ValueError(f"vector length must be in 1..{MAX_LEN}, got {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, *a):
        raise AttributeError("GF4Vector is immutable")

    @classmethod
    def from_entries(cls, entries) -> "GF4Vector":
        entries = list(entries)
        return cls(len(entries), pack(entries))

    @classmethod
    def from_string(cls, s: str) -> "GF4Vector":
        return cls.from_entries(char_to_elem(c) for c in s.strip())

    def entries(self) -> tuple[int, ...]:
        return unpack(self.bits, self.n)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return vec_get(self.bits, i)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, GF4Vector) and self.n == other.n and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __add__(self, other: "GF4Vector") -> "GF4Vector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return GF4Vector(self.n, self.bits ^ other.bits)

    def __rmul__(self, s: int) -> "GF4Vector":
        return GF4Vector(self.n, vec_scale(self.bits, s, self.n))

    def weight(self) -> int:
        return vec_weight(self.bits, self.n)

    def conj(self) -> "GF4Vector":
        return conjugate(self)

    def __str__(self) -> str:
        return "".join(ELEM_CHARS[e] for e in self.entries())

    def __repr__(self) -> str:
        return f"GF4Vector({str(self)!r})"


def rref_rows(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed rows; returns (rows, pivot columns).

    Leftmost-pivot, topmost-row elimination; zero rows are dropped, so the
    result is a canonical basis of the row space.
    """
    rows = [r for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sh = 2 * c
        piv = -1
        for i in range(r, len(rows)):
            if (rows[i] >> sh) & 3:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        e = (rows[r] >> sh) & 3
        if e != 1:
            rows[r] = vec_scale(rows[r], INV[e], ncols)
        prow = rows[r]
        for i in range(len(rows)):
            if i == r:
                continue
            e = (rows[i] >> sh) & 3
            if e:
                rows[i] ^= vec_scale(prow, e, ncols)
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def reduce_against(v: int, rows: list[int], pivots: list[int], ncols: int) -> int:
    """Reduce a packed vector against rref rows; 0 iff v is in the row space."""
    for row, c in zip(rows, pivots):
        e = (v >> (2 * c)) & 3
        if e:
            v ^= vec_scale(row, e, ncols)
    return v


class GF4Matrix:
    """A matrix over GF(4), held as packed rows.  Immutable."""

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols: int, rows):
        if not 1 <= ncols <= MAX_LEN:
            raise ValueError(f"column count must be in 1..{MAX_LEN}")
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", tuple(rows))

    def __setattr__(self, *a):
        raise AttributeError("GF4Matrix is immutable")

    @classmethod
    def from_entries(cls, grid) -> "GF4Matrix":
        grid = [list(row) for row in grid]
        return cls(len(grid[0]), (pack(row) for row in grid))

    @classmethod
    def from_strings(cls, lines) -> "GF4Matrix":
        vecs = [GF4Vector.from_string(s) for s in lines]
        return cls(vecs[0].n, (v.bits for v in vecs))

    @classmethod
    def identity(cls, n: int) -> "GF4Matrix":
        return cls(n, (1 << (2 * i) for i in range(n)))

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "GF4Matrix":
        return cls(ncols, (0,) * nrows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> (2 * j)) & 3

    def row(self, i: int) -> GF4Vector:
        return GF4Vector(self.ncols, self.rows[i])

    def to_grid(self) -> list[list[int]]:
        return [list(unpack(r, self.ncols)) for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_grid(), dtype=np.uint8)

    @classmethod
    def from_array(cls, arr) -> "GF4Matrix":
        return cls.from_entries(np.asarray(arr, dtype=np.uint8).tolist())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF4Matrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self.rows))

    def rref(self) -> tuple["GF4Matrix", list[int]]:
        rows, pivots = rref_rows(list(self.rows), self.ncols)
        return GF4Matrix(self.ncols, rows), pivots

    def rank(self) -> int:
        return len(self.rref()[0].rows)

    def transpose(self) -> "GF4Matrix":
        g = self.to_grid()
        return GF4Matrix.from_entries(
            [[g[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        )

    def stack(self, other: "GF4Matrix") -> "GF4Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch")
        return GF4Matrix(self.ncols, self.rows + other.rows)

    def conj(self) -> "GF4Matrix":
        return GF4Matrix(self.ncols, (vec_conj(r, self.ncols) for r in self.rows))

    def mul_vec(self, v: int) -> tuple[int, ...]:
        """Matrix times packed column vector, returned as entry tuple."""
        return tuple(vec_dot(r, v, self.ncols) for r in self.rows)

    def __str__(self) -> str:
        return "\n".join(str(self.row(i)) for i in range(self.nrows))

    def __repr__(self) -> str:
        return f"GF4Matrix({self.nrows}x{self.ncols})"


def rref(m: GF4Matrix) -> tuple[GF4Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    return m.rref()


def kernel(m: GF4Matrix) -> GF4Matrix:
    """Basis of the right null space under the ordinary dot product.

    Rows k of the result satisfy m . k^T = 0; the basis has
    cols - rank(m) rows (an empty matrix for full column rank).
    """
    n = m.ncols
    red, pivots = m.rref()
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = []
    for f in free:
        v = 1 << (2 * f)
        # pivot coordinate = entry of the reduced row in the free column
        # (char 2: no sign flip)
        for r, p in enumerate(pivots):
            e = red.entry(r, f)
            if e:
                v |= e << (2 * p)
        basis.append(v)
    return GF4Matrix(n, basis) if basis else GF4Matrix(n, ())


def in_row_space(m_rref: GF4Matrix, pivots: list[int], v: int) -> bool:
    """Membership test against a matrix already in rref."""
    for row, c in zip(m_rref.rows, pivots):
        e = (v >> (2 * c)) & 3
        if e:
            v ^= vec_scale(row, e, m_rref.ncols)
    return v == 0


def enumerate_span(rows: list[int], ncols: int) -> np.ndarray:
    """All 4^k codewords of the span of packed rows, as a (4^k, n) uint8 array.

    Built by repeated doubling: addition over GF(4) is XOR on the 2-bit
    codes, so each generator contributes the four scalar multiples.
    """
    k = len(rows)
    out = np.zeros((1, ncols), dtype=np.uint8)
    for r in rows:
        g = np.array(unpack(r, ncols), dtype=np.uint8)
        blocks = [out]
        for s in (1, OMEGA, OMEGA_BAR):
            blocks.append(out ^ SCALE_TABLES[s][g])
        out = np.concatenate(blocks, axis=0)
    assert out.shape[0] == 4**k
    return out
