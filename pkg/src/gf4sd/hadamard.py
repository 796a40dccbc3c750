"""Generalized Hadamard matrices over the cyclic group of order 3, and
the symmetric nets, codes and clique graphs attached to them.

A GH matrix of order n = 3*mu is stored as its grid of exponents in Z3
(entry e standing for w^e): differences mod 3 are the native operation in
the balance check, and the field embedding w^e happens only at the code
boundary.  Every matrix extracted from a clique is re-checked against the
definition, and the row-span map asserts self-duality and d >= 4 at
runtime, so each pipeline run re-proves the statements it relies on.
"""

from __future__ import annotations

import numpy as np

from . import codes as codes_mod
from . import equiv
from .codes import LinearCode, is_self_dual, weight_distribution
from .gf4 import CONJ_TABLE, MUL_TABLE
from .permgrp import PermGroup, orbit_labels_fast

#: field value of w^e for e in {0,1,2}
_EXP_TO_ELEM = np.array([1, 2, 3], dtype=np.uint8)
_ELEM_TO_EXP = np.array([255, 0, 1, 2], dtype=np.uint8)  # 0 has no exponent
_INV4 = np.array([0, 1, 3, 2], dtype=np.uint8)


class GHMatrix:
    """A generalized Hadamard matrix over Z3, as an exponent grid."""

    __slots__ = ("exponents", "_cert")

    def __init__(self, exponents):
        exp = np.ascontiguousarray(np.asarray(exponents, dtype=np.uint8) % 3)
        if exp.ndim != 2 or exp.shape[0] != exp.shape[1]:
            raise ValueError("exponent grid must be square")
        exp.setflags(write=False)
        object.__setattr__(self, "exponents", exp)
        object.__setattr__(self, "_cert", None)

    def __setattr__(self, *a):
        raise AttributeError("GHMatrix is immutable")

    @property
    def n(self) -> int:
        return self.exponents.shape[0]

    @property
    def mu(self) -> int:
        return self.n // 3

    def __eq__(self, other) -> bool:
        return isinstance(other, GHMatrix) and np.array_equal(self.exponents, other.exponents)

    def __hash__(self) -> int:
        return hash(self.exponents.tobytes())

    def __repr__(self) -> str:
        return f"GHMatrix(order={self.n})"

    def __str__(self) -> str:
        return "\n".join("".join(str(int(e)) for e in row) for row in self.exponents)


class NetIncidence:
    """A 0/1 incidence matrix of a symmetric net in class-regular form.

    Rows are points and columns are blocks; consecutive triples of
    rows/columns form the point/block parallel classes.
    """

    __slots__ = ("incidence",)

    def __init__(self, incidence):
        inc = np.ascontiguousarray(np.asarray(incidence, dtype=np.uint8))
        if inc.ndim != 2 or inc.shape[0] != inc.shape[1]:
            raise ValueError("incidence must be square")
        if not np.all((inc == 0) | (inc == 1)):
            raise ValueError("incidence entries must be 0/1")
        inc.setflags(write=False)
        object.__setattr__(self, "incidence", inc)

    def __setattr__(self, *a):
        raise AttributeError("NetIncidence is immutable")

    @property
    def v(self) -> int:
        return self.incidence.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, NetIncidence) and np.array_equal(self.incidence, other.incidence)

    def __hash__(self) -> int:
        return hash(self.incidence.tobytes())


# -- verification and elementary operations ----------------------------------


def gh_check(m: GHMatrix) -> bool:
    """True iff every row-pair difference multiset is balanced (mu each)."""
    if m.n % 3:
        raise ValueError("order must be divisible by 3")
    return equiv.gh_balanced(m.exponents)

def invert_entries(m: GHMatrix) -> GHMatrix:
    """Entrywise group inverse (exponent negation); an involution, not a
    monomial equivalence move."""
    return GHMatrix((-m.exponents.astype(np.int64)) % 3)


def transpose(m: GHMatrix) -> GHMatrix:
    return GHMatrix(m.exponents.T)


def gh_to_net(m: GHMatrix) -> NetIncidence:
    """Expand each entry w^e into the 3x3 cyclic permutation matrix M3^e."""
    if not gh_check(m):
        raise ValueError("not a generalized Hadamard matrix")
    n = m.n
    inc = np.zeros((3 * n, 3 * n), dtype=np.uint8)
    e = m.exponents.astype(np.int64)
    for r in range(3):
        # block row r of each 3x3 block has its 1 in column (r + e) mod 3
        cols = (r + e) % 3
        rows_idx = 3 * np.arange(n)[:, None] + r
        cols_idx = 3 * np.arange(n)[None, :] + cols
        inc[np.broadcast_to(rows_idx, (n, n)), cols_idx] = 1
    return NetIncidence(inc)


def net_to_gh(d: NetIncidence) -> GHMatrix:
    """Read the exponent of each 3x3 permutation block; inverse of gh_to_net."""
    v = d.v
    if v % 3:
        raise ValueError("incidence side must be divisible by 3")
    n = v // 3
    inc = d.incidence
    exp = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            # block[r, c] == 1 iff c == (r + e) % 3 for a single exponent e
            block = inc[3 * i : 3 * i + 3, 3 * j : 3 * j + 3]
            ones = np.argwhere(block == 1)
            if len(ones) != 3:
                raise ValueError(f"block ({i},{j}) is not a permutation matrix")
            es = {(int(c) - int(r)) % 3 for r, c in ones}
            if len(es) != 1:
                raise ValueError(f"block ({i},{j}) is not a cyclic shift")
            exp[i, j] = es.pop()
    return GHMatrix(exp)


def verify_net(d: NetIncidence, mu: int) -> bool:
    """All four net axioms plus the class-regular block structure."""
    v = 9 * mu
    if d.incidence.shape != (v, v):
        raise ValueError(f"expected a {v}x{v} incidence matrix")
    inc = d.incidence.astype(np.int64)
    k = 3 * mu
    if not np.all(inc.sum(axis=0) == k) or not np.all(inc.sum(axis=1) == k):
        return False
    for mat in (inc @ inc.T, inc.T @ inc):
        for a in range(v):
            for b in range(v):
                want = k if a == b else (0 if a // 3 == b // 3 else mu)
                if mat[a, b] != want:
                    return False
    # class-regular form: each 3x3 block a cyclic permutation matrix
    for i in range(k):
        for j in range(k):
            block = d.incidence[3 * i : 3 * i + 3, 3 * j : 3 * j + 3]
            ones = np.argwhere(block == 1)
            if len(ones) != 3:
                return False
            if len({(int(c) - int(r)) % 3 for r, c in ones}) != 1:
                return False
    return True


def gh_equivalent(a: GHMatrix, b: GHMatrix) -> bool:
    """Monomial equivalence via fiber-graph certificates."""
    if a.n != b.n:
        raise ValueError("orders differ")
    return gh_certificate(a) == gh_certificate(b)


def gh_certificate(m: GHMatrix) -> bytes:
    if m._cert is None:
        object.__setattr__(m, "_cert", equiv.gh_certificate(m.exponents))
    return m._cert


def net_iso(a: NetIncidence, b: NetIncidence) -> bool:
    """Isomorphism of symmetric nets (bipartite incidence isomorphism)."""
    for d in (a, b):
        if d.v % 9:
            raise ValueError("not a net on 9*mu points")
        if not verify_net(d, d.v // 9):
            raise ValueError("input fails net verification")
    return equiv.net_certificate(a.incidence) == equiv.net_certificate(b.incidence)


def rows_to_code(m: GHMatrix) -> LinearCode:
    """The code spanned by the rows (exponent e read as the field element w^e).

    Only orders n = 2 (mod 4) are accepted; the result is checked to be
    self-dual of dimension n/2 with minimum weight at least 4.
    """
    n = m.n
    if n % 4 != 2:
        raise ValueError("row-span map needs order n = 2 (mod 4)")
    if not gh_check(m):
        raise ValueError("not a generalized Hadamard matrix")
    arr = _EXP_TO_ELEM[m.exponents]
    shifts = (2 * np.arange(n, dtype=np.int64))[None, :]
    rows = [int(x) for x in (arr.astype(np.int64) << shifts).sum(axis=1)]
    code = LinearCode(n, rows)
    if code.k != n // 2 or not is_self_dual(code):
        raise AssertionError("row span is not a self-dual code of dimension n/2")
    if weight_distribution(code).minimum_weight() < 4:
        raise AssertionError("row-span code has minimum weight below 4")
    return code


# -- clique graphs ------------------------------------------------------------


class CliqueGraph:
    """Graph on normalized full-weight codewords with balanced-quotient adjacency.

    Vertices are the weight-18 codewords with leading entry 1; two are
    adjacent iff their coordinatewise quotient pattern hits each nonzero
    field element exactly 6 times.  18-cliques are exactly the generalized
    Hadamard matrices inside the code.  Adjacency rows are bitmask ints.
    """

    def __init__(self, code: LinearCode, words: np.ndarray, adj: list[int]):
        self.code = code
        self.words = words
        self.adj = adj

    @property
    def n_vertices(self) -> int:
        return len(self.words)


def build_clique_graph(c: LinearCode) -> CliqueGraph:
    if c.n != 18 or not is_self_dual(c):
        raise ValueError("clique graphs are defined for self-dual length-18 codes")
    wd = weight_distribution(c)
    if wd.minimum_weight() < 4:
        raise ValueError("clique graphs need minimum weight >= 4")
    arr = c.codewords()
    full = arr[np.count_nonzero(arr, axis=1) == 18]
    # scale each word so its leading entry is 1, then dedup scalar classes
    norm = MUL_TABLE[_INV4[full[:, 0]][:, None], full]
    words = np.unique(norm, axis=0)
    if 3 * len(words) != wd[18]:
        raise AssertionError("scalar-class normalization lost words")
    V = len(words)
    conj = CONJ_TABLE[words]
    adj: list[int] = []
    for i in range(V):
        z = MUL_TABLE[words[i][None, :], conj]
        balanced = ((z == 1).sum(axis=1) == 6) & ((z == 2).sum(axis=1) == 6) & (
            (z == 3).sum(axis=1) == 6
        )
        balanced[i] = False
        adj.append(int.from_bytes(np.packbits(balanced, bitorder="little").tobytes(), "little"))
    return CliqueGraph(c, words, adj)


def _aut_vertex_perms(g: CliqueGraph, aut_maps) -> list[np.ndarray]:
    """Code automorphisms as permutations of the normalized word vertices."""
    index = {g.words[i].tobytes(): i for i in range(g.n_vertices)}
    perms = []
    for m in aut_maps:
        img = m.apply_to_words(g.words)
        img = MUL_TABLE[_INV4[img[:, 0]][:, None], img]
        p = np.empty(g.n_vertices, dtype=np.int32)
        for i in range(g.n_vertices):
            p[i] = index[img[i].tobytes()]
        perms.append(p)
    return perms


_BIG_GROUP = 10_000


def _stabilizer(degree: int, gens: list[np.ndarray], v: int):
    """(generators, order) of the stabilizer of v in the group the gens generate."""
    if not gens:
        return [], 1
    G = PermGroup(degree, gens, base_hint=[v])
    sub = G.stabilizer_gens(1)
    return sub, G.order() // len(G._transversals[0])


def _orbit_split(gens: list[np.ndarray], members: list[int], degree: int) -> list[list[int]]:
    """Partition `members` into orbits of the group generated by gens."""
    if not gens:
        return [[v] for v in members]
    labels = orbit_labels_fast(gens, degree)
    groups: dict[int, list[int]] = {}
    for v in members:
        groups.setdefault(int(labels[v]), []).append(v)
    return [groups[k] for k in sorted(groups)]


def clique_search(g: CliqueGraph, aut_maps, size: int = 18) -> list[GHMatrix]:
    """One GH matrix per monomial class of `size`-cliques in the graph.

    Branches over orbits of the chain of pointwise stabilizers of the
    already-chosen vertices (orbit branching), which visits at least one
    member of every Aut(code)-orbit of cliques; the survivors are then
    deduplicated by matrix certificate, so over-counting only costs time.
    While the running stabilizer stays large its exact generators come
    from a fresh Schreier-Sims chain; once it is small, cheap generator
    filtering (a subgroup, still sound) takes over.
    """
    V = g.n_vertices
    adj = g.adj
    gens0 = _aut_vertex_perms(g, aut_maps)
    found: list[tuple[int, ...]] = []
    full_mask = (1 << V) - 1

    def bits_of(mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def descend(chosen: list[int], pool: int, gens: list[np.ndarray], order: int | None):
        need = size - len(chosen)
        if need == 0:
            found.append(tuple(chosen))
            return
        if pool.bit_count() < need:
            return
        members = bits_of(pool)
        if gens:
            remaining = pool
            for orb in _orbit_split(gens, members, V):
                rep = orb[0]
                if order is not None and order > _BIG_GROUP:
                    sub, sub_order = _stabilizer(V, gens, rep)
                else:
                    sub, sub_order = [p for p in gens if int(p[rep]) == rep], None
                descend(chosen + [rep], remaining & adj[rep], sub, sub_order)
                for v in orb:
                    remaining &= ~(1 << v)
        else:
            # no symmetry left: plain ordered clique enumeration
            rest = pool
            for v in members:
                rest &= ~(1 << v)
                if rest.bit_count() + 1 < need:
                    break
                cand = rest & adj[v]
                if cand.bit_count() >= need - 1:
                    descend(chosen + [v], cand, [], None)

    descend([], full_mask, gens0, PermGroup(V, gens0).order() if gens0 else 1)

    out: list[GHMatrix] = []
    seen: set[bytes] = set()
    for cliq in found:
        mat = GHMatrix(_ELEM_TO_EXP[g.words[list(cliq)]])
        if not gh_check(mat):
            raise AssertionError("clique failed the Hadamard balance recheck")
        cert = gh_certificate(mat)
        if cert not in seen:
            seen.add(cert)
            out.append(mat)
    return out


# -- exhaustive enumeration at small orders -----------------------------------


def enumerate_gh(mu: int) -> list[GHMatrix]:
    """One representative per monomial class of GH matrices of order 3*mu.

    Orderly row-by-row generation over normalized matrices (first row and
    column all zero): rows ascend lexicographically, stay sorted inside
    the current column-symmetry blocks, and are balance-checked against
    all earlier rows (plus a column-pair balance bound).  Survivors are
    deduplicated by certificate.  mu = 5 is allowed for the nonexistence
    check; mu >= 6 is out of reach here and the code-derived route applies.
    """
    if mu < 1:
        raise ValueError("mu must be positive")
    if mu > 5:
        raise ValueError("enumerate_gh supports mu <= 5; use the code-derived route for mu = 6")
    if mu == 1:
        return [GHMatrix([[0, 0, 0], [0, 1, 2], [0, 2, 1]])]

    out: list[GHMatrix] = []
    seen: set[bytes] = set()
    for grid in _enumerate_normalized(mu):
        mat = GHMatrix(grid)
        if not gh_check(mat):
            raise AssertionError("orderly generation produced a non-GH matrix")
        cert = gh_certificate(mat)
        if cert not in seen:
            seen.add(cert)
            out.append(mat)
    return out


def _enumerate_normalized(mu: int) -> list[np.ndarray]:
    """All completed normalized row-sorted block-sorted grids (pre-dedup)."""
    n = 3 * mu
    results: list[np.ndarray] = []
    ncols = n - 1  # column 0 is pinned to zero

    # column-pair balance counters over placed rows
    pair_count = np.zeros((ncols, ncols, 3), dtype=np.int64)

    def candidate_rows(blocks, prev_rows):
        """All admissible next rows: sorted within blocks, lex > last row,
        balanced against every placed row."""
        counters = [[1, 0, 0] for _ in prev_rows]  # column 0 contributes diff 0
        last = prev_rows[-1]
        out = []
        seg: list[int] = []

        def rec(bi: int, rem0: int, rem1: int, rem2: int, tight: bool):
            if bi == len(blocks):
                if rem0 or rem1 or rem2:
                    return
                if tight:
                    return  # equal to the previous row
                out.append(tuple(seg))
                return
            block = blocks[bi]
            s = len(block)
            for c0 in range(min(s, rem0), -1, -1):
                for c1 in range(min(s - c0, rem1), -1, -1):
                    c2 = s - c0 - c1
                    if c2 > rem2:
                        continue
                    piece = (0,) * c0 + (1,) * c1 + (2,) * c2
                    if tight:
                        prev_piece = tuple(last[p] for p in block)
                        if piece < prev_piece:
                            continue
                        new_tight = piece == prev_piece
                    else:
                        new_tight = False
                    ok = True
                    touched = []
                    for ridx, row in enumerate(prev_rows):
                        cnt = counters[ridx]
                        for pos, val in zip(block, piece):
                            d = (val - row[pos]) % 3
                            cnt[d] += 1
                            touched.append((ridx, d))
                            if cnt[d] > mu:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        seg.extend(piece)
                        rec(bi + 1, rem0 - c0, rem1 - c1, rem2 - c2, new_tight)
                        del seg[len(seg) - s :]
                    for ridx, d in touched:
                        counters[ridx][d] -= 1

        rec(0, mu - 1, mu, mu, True)
        return out

    def refine_blocks(blocks, row):
        new = []
        for block in blocks:
            run_val = None
            run: list[int] = []
            for p in block:
                if row[p] != run_val:
                    if run:
                        new.append(run)
                    run = [p]
                    run_val = row[p]
                else:
                    run.append(p)
            if run:
                new.append(run)
        return new

    def place(prev_rows, blocks):
        if len(prev_rows) == n:
            results.append(np.array(prev_rows, dtype=np.uint8))
            return
        for row in candidate_rows(blocks, prev_rows):
            ok = True
            touched = []
            for j in range(ncols):
                for k in range(j + 1, ncols):
                    d = (row[j] - row[k]) % 3
                    pair_count[j, k, d] += 1
                    touched.append((j, k, d))
                    if pair_count[j, k, d] > mu:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                full_row = (0,) + row
                place(prev_rows + [full_row], refine_blocks(blocks, full_row))
            for j, k, d in touched:
                pair_count[j, k, d] -= 1

    zero_row = (0,) * n
    place([zero_row], [list(range(1, n))])
    return results


# -- the full order-18 classification ------------------------------------------


def thirteen_codes() -> dict[int, LinearCode]:
    """The eleven tabulated codes plus the two conjugates (indices 11, 31)."""
    from .codes import TABLE_EX, build_table_ex_code, conjugate_code

    out = {i: build_table_ex_code(i) for i in TABLE_EX}
    out[11] = conjugate_code(out[10])
    out[31] = conjugate_code(out[30])
    return dict(sorted(out.items()))


class H63Classification:
    """Result of the code-based classification of order-18 matrices."""

    def __init__(self, per_code: dict[int, list[GHMatrix]]):
        self.per_code = per_code
        self.matrices: list[GHMatrix] = []
        seen: set[bytes] = set()
        self.cross_duplicates = 0
        for i in sorted(per_code):
            for m in per_code[i]:
                cert = gh_certificate(m)
                if cert in seen:
                    self.cross_duplicates += 1
                else:
                    seen.add(cert)
                    self.matrices.append(m)

    def counts(self) -> dict[int, int]:
        return {i: len(ms) for i, ms in sorted(self.per_code.items())}

    def net_classes(self) -> int:
        from .equiv import net_certificate

        return len({net_certificate(gh_to_net(m).incidence) for m in self.matrices})

    def self_paired(self) -> int:
        return sum(1 for m in self.matrices if gh_equivalent(m, invert_entries(m)))


def classify_h63(codes: dict[int, LinearCode] | None = None, progress=None) -> H63Classification:
    """Extract all order-18 matrices from the thirteen clique-bearing codes."""
    from .equiv import code_aut_generators

    if codes is None:
        codes = thirteen_codes()
    per_code: dict[int, list[GHMatrix]] = {}
    for i, c in sorted(codes.items()):
        g = build_clique_graph(c)
        mats = clique_search(g, code_aut_generators(c))
        per_code[i] = mats
        if progress:
            progress(i, mats)
    return H63Classification(per_code)


# -- file formats -------------------------------------------------------------


def gh_to_text(m: GHMatrix) -> str:
    return f"GH n={m.n} g=3\n" + str(m) + "\n"


def gh_from_text(text: str) -> GHMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("GH "):
        raise ValueError("missing 'GH n=<n> g=3' header")
    try:
        fields = dict(tok.split("=") for tok in lines[0].split()[1:])
        n = int(fields["n"])
        if int(fields["g"]) != 3:
            raise ValueError
    except (ValueError, KeyError):
        raise ValueError(f"bad header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != n or any(len(ln) != n for ln in body):
        raise ValueError(f"expected {n} rows of {n} digits")
    grid = [[int(ch) for ch in ln] for ln in body]
    if any(e not in (0, 1, 2) for row in grid for e in row):
        raise ValueError("entries must be digits 0/1/2")
    return GHMatrix(grid)


def net_to_text(d: NetIncidence) -> str:
    body = "\n".join("".join(str(int(x)) for x in row) for row in d.incidence)
    return f"NET v={d.v}\n" + body + "\n"


def net_from_text(text: str) -> NetIncidence:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("NET "):
        raise ValueError("missing 'NET v=<v>' header")
    try:
        v = int(dict(tok.split("=") for tok in lines[0].split()[1:])["v"])
    except (ValueError, KeyError):
        raise ValueError(f"bad header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != v or any(len(ln) != v for ln in body):
        raise ValueError(f"expected {v} rows of {v} characters")
    return NetIncidence([[int(ch) for ch in ln] for ln in body])
