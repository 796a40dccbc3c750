"""Code, Hadamard-matrix and net equivalence via colored-digraph reductions.

Monomial equivalence of codes (coordinate permutations and nonzero column
scalings) is decided by encoding each code as a digraph: three flag
vertices per coordinate carry a directed multiply-by-w 3-cycle, and one
vertex per codeword of a spanning set of small-weight classes records its
supports and values.  Any color-preserving graph automorphism must
permute the coordinate fibers and rotate within them, which is exactly a
monomial map; the graph's automorphism group is the code's.

Generalized Hadamard matrices get the analogous encoding on row and
column fibers over Z3.  The fiber 3-cycles are directed, so the
entrywise-inverse operation (which reverses every cycle) is *not*
identified by gh_equivalent; the plain bipartite incidence encoding used
for nets has no cycles, so there the inverse collapses, exactly the gap
between monomial equivalence of matrices and isomorphism of nets.
"""

from __future__ import annotations

import numpy as np

from . import gf4
from .canon import ColoredDigraph, canonical_form
from .codes import LinearCode, conjugate_code
from .gf4 import MUL, SCALE_TABLES

FLAG_COLOR = 0
_WORD_COLOR0 = 1


class MonomialMap:
    """A coordinate permutation with per-coordinate nonzero scalars.

    Acting on a vector: coordinate i moves to position perm[i] and is
    multiplied by scalars[i].  With conjugate=True the field conjugation
    is applied afterwards (weak equivalence).
    """

    __slots__ = ("perm", "scalars", "conjugate")

    def __init__(self, perm, scalars, conjugate: bool = False):
        self.perm = tuple(int(p) for p in perm)
        self.scalars = tuple(int(s) for s in scalars)
        self.conjugate = bool(conjugate)
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)) or len(self.scalars) != n:
            raise ValueError("invalid monomial map")
        if any(s not in (1, 2, 3) for s in self.scalars):
            raise ValueError("scalars must be nonzero field elements")

    @classmethod
    def identity(cls, n: int) -> "MonomialMap":
        return cls(range(n), (1,) * n)

    def apply_bits(self, v: int, n: int) -> int:
        out = 0
        for i in range(n):
            e = (v >> (2 * i)) & 3
            if e:
                out |= MUL[self.scalars[i]][e] << (2 * self.perm[i])
        if self.conjugate:
            out = gf4.vec_conj(out, n)
        return out

    def apply_to_code(self, c: LinearCode) -> LinearCode:
        return LinearCode(c.n, (self.apply_bits(r, c.n) for r in c.rows))

    def apply_to_words(self, arr: np.ndarray) -> np.ndarray:
        """Apply to a (N, n) uint8 word array."""
        out = np.empty_like(arr)
        for i, p in enumerate(self.perm):
            out[:, p] = SCALE_TABLES[self.scalars[i]][arr[:, i]]
        if self.conjugate:
            out = gf4.CONJ_TABLE[out]
        return out

    def __mul__(self, other: "MonomialMap") -> "MonomialMap":
        """Composition: apply ``other`` first, then ``self``."""
        n = len(self.perm)
        perm = [0] * n
        scal = [1] * n
        for i in range(n):
            j = other.perm[i]
            perm[i] = self.perm[j]
            # conjugation at the end of `other` pushes through self's scalar
            sj = gf4.gf4_conj(self.scalars[j]) if other.conjugate else self.scalars[j]
            scal[i] = MUL[sj][other.scalars[i]]
        return MonomialMap(perm, scal, self.conjugate ^ other.conjugate)

    def inverse(self) -> "MonomialMap":
        n = len(self.perm)
        perm = [0] * n
        scal = [1] * n
        for i in range(n):
            perm[self.perm[i]] = i
        for j in range(n):
            s = gf4.INV[self.scalars[perm[j]]]
            scal[j] = gf4.gf4_conj(s) if self.conjugate else s
        return MonomialMap(perm, scal, self.conjugate)

    def to_text(self) -> str:
        imgs = " ".join(str(p) for p in self.perm)
        scal = "".join(gf4.ELEM_CHARS[s] for s in self.scalars)
        out = f"{imgs} | {scal}"
        return out + " | conj" if self.conjugate else out

    @classmethod
    def from_text(cls, text: str) -> "MonomialMap":
        parts = [p.strip() for p in text.split("|")]
        perm = [int(x) for x in parts[0].split()]
        scal = [gf4.char_to_elem(c) for c in parts[1]]
        conj = len(parts) > 2 and parts[2] == "conj"
        return cls(perm, scal, conj)

    def __repr__(self) -> str:
        return f"MonomialMap({self.to_text()!r})"


def _packed_from_rows(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[1]
    shifts = (2 * np.arange(n, dtype=np.int64))[None, :]
    return (arr.astype(np.int64) << shifts).sum(axis=1)


def word_set(c: LinearCode) -> tuple[np.ndarray, np.ndarray]:
    """Spanning words from the smallest weight classes.

    Returns (words, class_index): all codewords of the minimal increasing
    run of nonzero weights whose union spans the code, as a uint8 array,
    with the per-word index of its weight class.  Spanning is asserted.
    """
    arr = c.codewords()
    weights = np.count_nonzero(arr, axis=1)
    out_words = []
    out_cls = []
    basis: list[int] = []
    pivots: list[int] = []
    rank = 0
    for ci, w in enumerate(sorted(set(int(x) for x in weights) - {0})):
        cls_words = arr[weights == w]
        order = np.lexsort(cls_words.T[::-1])
        cls_words = cls_words[order]
        out_words.append(cls_words)
        out_cls.append(np.full(len(cls_words), ci, dtype=np.int64))
        for bits in _packed_from_rows(cls_words):
            bits = gf4.reduce_against(int(bits), basis, pivots, c.n)
            if bits:
                basis.append(bits)
                pivots.append(_low_pivot(bits))
                rows, piv = gf4.rref_rows(basis, c.n)
                basis, pivots = rows, piv
                rank = len(rows)
        if rank == c.k:
            break
    if rank != c.k:
        raise AssertionError("weight classes failed to span the code")
    return np.concatenate(out_words), np.concatenate(out_cls)


def _low_pivot(bits: int) -> int:
    c = 0
    while (bits >> (2 * c)) & 3 == 0:
        c += 1
    return c


def code_to_graph(c: LinearCode) -> ColoredDigraph:
    """Digraph whose color-preserving automorphisms are the code's monomial maps.

    Vertices: 3n coordinate flags (coordinate, nonzero value) in a single
    color with directed multiply-by-w 3-cycles in a reserved edge color,
    plus one vertex per word of word_set(c) colored by weight class and
    joined to flag (i, s) iff its i-th entry is s.
    """
    n = c.n
    support = 0
    for r in c.rows:
        support |= (r | (r >> 1)) & gf4._lo_mask(n)
    if support.bit_count() != n:
        raise ValueError("code has an identically-zero coordinate; equivalence ill-posed")
    words, cls = word_set(c)
    m = len(words)
    nv = 3 * n + m
    colors = [FLAG_COLOR] * (3 * n) + [int(_WORD_COLOR0 + ci) for ci in cls]

    def flag(i: int, s: int) -> int:
        return 3 * i + (s - 1)

    edges = []
    for i in range(n):
        for s in (1, 2, 3):
            edges.append((flag(i, s), flag(i, MUL[2][s]), 0))
    wv, wi = np.nonzero(words)
    vals = words[wv, wi]
    base = 3 * n
    for j, i, s in zip(wv.tolist(), wi.tolist(), vals.tolist()):
        edges.append((base + j, flag(i, s), 1))
    return ColoredDigraph(nv, colors, edges)


def code_certificate(c: LinearCode) -> bytes:
    """Canonical dedup key for monomial equivalence (cached)."""
    cert = _code_cert_obj(c)
    return cert.canonical_bytes


def _code_cert_obj(c: LinearCode):
    if c._cert is None:
        object.__setattr__(c, "_cert", canonical_form(code_to_graph(c)))
    return c._cert


def code_aut_order(c: LinearCode) -> int:
    """Order of the monomial automorphism group (conjugation excluded)."""
    return _code_cert_obj(c).aut_order


def code_aut_generators(c: LinearCode) -> list[MonomialMap]:
    """Monomial generators of Aut(c), decoded from graph automorphisms."""
    cert = _code_cert_obj(c)
    n = c.n
    out = []
    for g in cert.aut_generators:
        perm = [0] * n
        scal = [1] * n
        for i in range(n):
            img = g[3 * i]  # image of flag (i, 1)
            if img >= 3 * n:
                raise AssertionError("flag layer not preserved")
            perm[i] = img // 3
            scal[i] = img % 3 + 1
        m = MonomialMap(perm, scal)
        if m.apply_to_code(c) != c:
            raise AssertionError("decoded generator is not an automorphism")
        out.append(m)
    return out


def codes_equivalent(a: LinearCode, b: LinearCode, weak: bool = False):
    """Monomial (or weak, allowing conjugation) equivalence with witness.

    Returns (flag, MonomialMap or None); a returned witness M satisfies
    a*M == b and carries the conjugation marker in weak mode.
    """
    if a.n != b.n:
        raise ValueError("length mismatch")
    m = _strict_witness(a, b)
    if m is not None:
        return True, m
    if weak:
        m = _strict_witness(a, conjugate_code(b))
        if m is not None:
            witness = MonomialMap(m.perm, m.scalars, True)
            if witness.apply_to_code(a) != b:
                raise AssertionError("weak witness verification failed")
            return True, witness
    return False, None


def _strict_witness(a: LinearCode, b: LinearCode):
    ca, cb = _code_cert_obj(a), _code_cert_obj(b)
    if ca.canonical_bytes != cb.canonical_bytes:
        return None
    la = ca.canonical_labeling
    lb = cb.canonical_labeling
    inv_b = {}
    for v, pos in enumerate(lb):
        inv_b[pos] = v
    n = a.n
    perm = [0] * n
    scal = [1] * n
    for i in range(n):
        img = inv_b[la[3 * i]]
        if img >= 3 * n:
            raise AssertionError("flag layer mismatch in witness")
        perm[i] = img // 3
        scal[i] = img % 3 + 1
    m = MonomialMap(perm, scal)
    if m.apply_to_code(a) != b:
        raise AssertionError("equivalence witness verification failed")
    return m


# -- generalized Hadamard matrices and nets ----------------------------------


def gh_balanced(exp: np.ndarray) -> bool:
    """Row-pair difference multisets each hit 0,1,2 exactly n/3 times."""
    exp = np.asarray(exp, dtype=np.int64)
    n = exp.shape[0]
    mu = n // 3
    for i in range(n):
        d = (exp[i] - exp[i + 1 :]) % 3
        cnt = np.stack([(d == t).sum(axis=1) for t in range(3)])
        if not np.all(cnt == mu):
            return False
    return True


def gh_to_graph(exp: np.ndarray) -> ColoredDigraph:
    """Fiber encoding of a GH matrix over Z3.

    Row fibers (row i, a) and column fibers (col j, b) carry directed
    a -> a+1 3-cycles; matching edges join (row i, a) to (col j, b) iff
    b - a = e_ij (mod 3).  Row and column layers get distinct colors, so
    transposition is not an equivalence move; directed cycles keep the
    entrywise inverse out.
    """
    exp = np.asarray(exp, dtype=np.int64)
    n = exp.shape[0]
    if exp.shape != (n, n) or n % 3:
        raise ValueError("exponent grid must be square with order divisible by 3")
    if not gh_balanced(exp):
        raise ValueError("input is not a generalized Hadamard matrix")
    colors = [0] * (3 * n) + [1] * (3 * n)

    def rv(i, a):
        return 3 * i + a

    def cv(j, b):
        return 3 * n + 3 * j + b

    edges = []
    for x in range(2 * n):  # fiber cycles in both layers
        base = 3 * x
        for a in range(3):
            edges.append((base + a, base + (a + 1) % 3, 0))
    for i in range(n):
        for j in range(n):
            e = int(exp[i, j])
            for a in range(3):
                edges.append((rv(i, a), cv(j, (a + e) % 3), 1))
    return ColoredDigraph(6 * n, colors, edges)


def gh_certificate(exp: np.ndarray) -> bytes:
    return canonical_form(gh_to_graph(exp)).canonical_bytes


def gh_equivalent_exponents(a: np.ndarray, b: np.ndarray) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return gh_certificate(a) == gh_certificate(b)


def net_graph(incidence: np.ndarray) -> ColoredDigraph:
    """Bipartite point/block encoding; arbitrary fiber permutations allowed."""
    inc = np.asarray(incidence, dtype=np.uint8)
    v = inc.shape[0]
    if inc.shape != (v, v):
        raise ValueError("incidence must be square")
    colors = [0] * v + [1] * v
    pts, blks = np.nonzero(inc)
    edges = [(int(p), v + int(b), 0) for p, b in zip(pts, blks)]
    return ColoredDigraph(2 * v, colors, edges)


def net_certificate(incidence: np.ndarray) -> bytes:
    return canonical_form(net_graph(incidence)).canonical_bytes
