"""Canonical labeling of vertex- and edge-colored directed graphs.

The engine behind every equivalence decision in the package: codes,
generalized Hadamard matrices and nets are all reduced to colored
digraphs, and two graphs are isomorphic iff their certificates match.

Algorithm: equitable partition refinement (1-dimensional Weisfeiler-Leman
over vertex cells and incident edge colors, both directions) combined
with individualization-refinement backtracking.  The canonical leaf is
the minimum of (node-invariant sequence, labeled adjacency bytes) over
the search tree; subtrees are pruned when their invariant is strictly
worse than the incumbent's, or when a discovered automorphism fixing the
individualized prefix maps their root to an already-explored sibling.
Discovered automorphisms generate the full color-preserving automorphism
group; the exact order comes from a Schreier-Sims chain.

Refinement signatures are 64-bit hash sums over incident (edge color,
direction, neighbor cell) triples.  A hash collision can only merge cells
that a perfect refinement would split, which costs search nodes but never
correctness; certificates remain exact because leaves compare full
adjacency encodings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .permgrp import PermGroup

_U = np.uint64


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, vectorized over uint64 (wraparound intended)."""
    with np.errstate(over="ignore"):
        x = x + _U(0x9E3779B97F4A7C15)
        x = (x ^ (x >> _U(30))) * _U(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> _U(27))) * _U(0x94D049BB133111EB)
        return x ^ (x >> _U(31))


def _mix_fold(arrs) -> int:
    """Order-sensitive 64-bit hash of a sequence of uint64 arrays."""
    h = _U(0x243F6A8885A308D3)
    for a in arrs:
        a = a.astype(np.uint64, copy=False)
        pos = np.arange(len(a), dtype=np.uint64)
        m = _mix(a ^ _mix(pos + h))
        s = _U(int(m.sum(dtype=np.uint64))) if len(m) else _U(0)
        h = _mix(h ^ _U(len(a)) ^ s)
    return int(h)


class ColoredDigraph:
    """A directed graph with integer vertex colors and edge colors.

    Edges are (u, v, color) triples; parallel edges are allowed only with
    distinct colors.  Color values are part of the isomorphism type.
    """

    def __init__(self, n: int, vertex_colors=None, edges=()):
        self.n = int(n)
        if vertex_colors is None:
            vertex_colors = (0,) * self.n
        self.vertex_colors = tuple(int(c) for c in vertex_colors)
        if len(self.vertex_colors) != self.n:
            raise ValueError("vertex color count mismatch")
        edges = tuple((int(u), int(v), int(c)) for (u, v, c) in edges)
        for u, v, c in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge endpoint out of range: {(u, v, c)}")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate (from, to, color) edge")
        self.edges = edges
        self._cert: CanonicalCertificate | None = None

    def __repr__(self) -> str:
        return f"ColoredDigraph(n={self.n}, edges={len(self.edges)})"


@dataclass(frozen=True)
class CanonicalCertificate:
    """Canonical form plus the automorphism group of a colored digraph."""

    canonical_bytes: bytes
    aut_order: int
    aut_generators: tuple[tuple[int, ...], ...]
    canonical_labeling: tuple[int, ...]  # vertex -> canonical position


class _Canonizer:
    def __init__(self, g: ColoredDigraph):
        self.n = g.n
        self.vc = np.array(g.vertex_colors, dtype=np.int64) if g.n else np.zeros(0, np.int64)

        if g.edges:
            e = np.array(g.edges, dtype=np.int64)
            self.esrc, self.edst = e[:, 0], e[:, 1]
            ecolors = e[:, 2]
        else:
            self.esrc = self.edst = ecolors = np.zeros(0, dtype=np.int64)
        self.ecol_values, self.ecol_idx = np.unique(ecolors, return_inverse=True)

        # both directions materialized for refinement
        src = np.concatenate([self.esrc, self.edst])
        self.nbr = np.concatenate([self.edst, self.esrc])
        key = np.concatenate([2 * self.ecol_idx, 2 * self.ecol_idx + 1])
        self.keymix = _mix(key.astype(np.uint64))
        order = np.argsort(src, kind="stable")
        self.nbr = self.nbr[order]
        self.keymix = self.keymix[order]
        ssrc = src[order]
        if len(ssrc):
            starts = np.flatnonzero(np.r_[True, ssrc[1:] != ssrc[:-1]])
            self.seg_starts = starts
            self.seg_vertex = ssrc[starts]
        else:
            self.seg_starts = np.zeros(0, dtype=np.int64)
            self.seg_vertex = np.zeros(0, dtype=np.int64)

        # sorted raw-edge encoding, for fast automorphism verification
        self._enc_base = int(self.ecol_values.size) if self.ecol_values.size else 1
        self._raw_enc = np.sort(self._encode_edges(np.arange(self.n, dtype=np.int64)))

        # search state
        self.best_invs: tuple[int, ...] | None = None
        self.best_cert: bytes | None = None
        self.best_color: np.ndarray | None = None
        self.autos: list[np.ndarray] = []
        self._orbit_cache_count = -1
        self._orbit_cache_prefix: tuple[int, ...] = ()
        self._orbit_cache: np.ndarray | None = None

    # -- refinement ---------------------------------------------------------

    def _initial_color(self) -> np.ndarray:
        _, inv = np.unique(self.vc, return_inverse=True)
        return inv.astype(np.int64)

    def _refine(self, color: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Refine to an equitable partition; returns (colors, last cell hashes)."""
        n = self.n
        ncells = int(color.max()) + 1 if n else 0
        acc = np.zeros(n, dtype=np.uint64)
        while True:
            if len(self.nbr):
                h = _mix(self.keymix ^ _mix(color[self.nbr].astype(np.uint64)))
                acc[:] = 0
                sums = np.add.reduceat(h, self.seg_starts)
                acc[self.seg_vertex] = sums
            order = np.lexsort((acc, color))
            sc, sa = color[order], acc[order]
            boundary = np.r_[True, (sc[1:] != sc[:-1]) | (sa[1:] != sa[:-1])]
            new = np.empty(n, dtype=np.int64)
            new[order] = np.cumsum(boundary) - 1
            new_ncells = int(new.max()) + 1 if n else 0
            if new_ncells == ncells:
                return new, acc
            color, ncells = new, new_ncells

    @staticmethod
    def _individualize(color: np.ndarray, v: int) -> np.ndarray:
        c = color[v]
        out = np.where(color > c, color + 1, color)
        out[color == c] = c + 1
        out[v] = c
        return out

    def _node_invariant(self, color: np.ndarray, acc: np.ndarray) -> int:
        order = np.argsort(color, kind="stable")
        sc = color[order]
        starts = np.flatnonzero(np.r_[True, sc[1:] != sc[:-1]]) if self.n else np.zeros(0, np.int64)
        sizes = np.diff(np.r_[starts, self.n])
        first = order[starts]
        return _mix_fold([sizes.astype(np.uint64), acc[first], self.vc[first].astype(np.uint64)])

    # -- certificates -------------------------------------------------------

    def _encode_edges(self, color: np.ndarray) -> np.ndarray:
        if not len(self.esrc):
            return np.zeros(0, dtype=np.int64)
        return (color[self.esrc] * self.n + color[self.edst]) * self._enc_base + self.ecol_idx

    def _build_cert(self, color: np.ndarray) -> bytes:
        pos_vc = np.empty(self.n, dtype=np.int64)
        pos_vc[color] = self.vc
        enc = np.sort(self._encode_edges(color))
        head = np.array([self.n, len(self.ecol_values), len(enc)], dtype=np.int64)
        return b"".join(
            [head.tobytes(), self.ecol_values.tobytes(), pos_vc.tobytes(), enc.tobytes()]
        )

    def _check_automorphism(self, g: np.ndarray) -> bool:
        if not np.array_equal(self.vc[g], self.vc):
            return False
        if not len(self.esrc):
            return True
        enc = (g[self.esrc] * self.n + g[self.edst]) * self._enc_base + self.ecol_idx
        return np.array_equal(np.sort(enc), self._raw_enc)

    # -- automorphism orbit bookkeeping --------------------------------------

    def _orbit_labels_for_prefix(self, prefix: tuple[int, ...]) -> np.ndarray | None:
        gens = [g for g in self.autos if all(int(g[p]) == p for p in prefix)]
        if not gens:
            return None
        lab = np.arange(self.n, dtype=np.int64)
        invs = [np.argsort(g).astype(np.int64) for g in gens]
        while True:
            before = lab.copy()
            for g, gi in zip(gens, invs):
                np.minimum(lab, lab[g], out=lab)
                np.minimum(lab, lab[gi], out=lab)
            lab = lab[lab]
            if np.array_equal(lab, before):
                return lab

    # -- search ---------------------------------------------------------------

    def run(self) -> CanonicalCertificate:
        if self.n == 0:
            return CanonicalCertificate(b"CDG0", 1, (), ())
        color, acc = self._refine(self._initial_color())
        self._search(color, acc, (), ())
        group = PermGroup(self.n, self.autos)
        gens = tuple(tuple(int(x) for x in g) for g in group.generators())
        cert = b"CDG1" + self.best_cert
        labeling = tuple(int(x) for x in self.best_color)
        return CanonicalCertificate(cert, group.order(), gens, labeling)

    def _compare_prefix(self, invs: tuple[int, ...]) -> int:
        """Lexicographic order of the path invariants against the incumbent's.

        Comparing the full prefix (not just the newest entry) keeps the
        pruning sound: a path that went strictly below the incumbent at
        some ancestor stays 'better' no matter how later entries compare.
        """
        best = self.best_invs
        for d, x in enumerate(invs):
            if d >= len(best):
                return 1  # deeper than the best leaf with an equal prefix
            if x != best[d]:
                return -1 if x < best[d] else 1
        return 0

    def _search(self, color, acc, prefix: tuple[int, ...], invs: tuple[int, ...]) -> None:
        invs = invs + (self._node_invariant(color, acc),)
        cmp = 0 if self.best_invs is None else self._compare_prefix(invs)
        if cmp > 0:
            return

        ncells = int(color.max()) + 1
        if ncells == self.n:
            cert = self._build_cert(color)
            if self.best_invs is None or cmp < 0 or (cmp == 0 and cert < self.best_cert):
                self.best_invs, self.best_cert, self.best_color = invs, cert, color.copy()
            elif cmp == 0 and cert == self.best_cert:
                inv_best = np.empty(self.n, dtype=np.int64)
                inv_best[self.best_color] = np.arange(self.n, dtype=np.int64)
                g = inv_best[color].astype(np.int32)
                if not self._check_automorphism(g):
                    raise AssertionError("leaf collision produced a non-automorphism")
                self.autos.append(g)
            return

        sizes = np.bincount(color, minlength=ncells)
        nonsingleton = np.flatnonzero(sizes > 1)
        target = nonsingleton[np.argmin(sizes[nonsingleton])]
        members = np.flatnonzero(color == target)

        processed: list[int] = []
        labels = None
        labels_count = -1
        for v in members:
            v = int(v)
            if processed:
                # skip v if a discovered automorphism fixing the prefix maps
                # it onto an explored sibling
                if labels_count != len(self.autos):
                    labels = self._orbit_labels_for_prefix(prefix)
                    labels_count = len(self.autos)
                if labels is not None and any(labels[v] == labels[w] for w in processed):
                    continue
            child, child_acc = self._refine(self._individualize(color, v))
            self._search(child, child_acc, prefix + (v,), invs)
            processed.append(v)


def canonical_form(g: ColoredDigraph) -> CanonicalCertificate:
    """Canonical certificate and automorphism group; cached on the graph."""
    if g._cert is None:
        g._cert = _Canonizer(g).run()
    return g._cert


def are_isomorphic(a: ColoredDigraph, b: ColoredDigraph):
    """Decide color-preserving isomorphism; returns (flag, witness or None).

    The witness maps vertices of a onto b and is verified edge-by-edge
    before being returned.
    """
    ca, cb = canonical_form(a), canonical_form(b)
    if ca.canonical_bytes != cb.canonical_bytes:
        return False, None
    la = np.array(ca.canonical_labeling, dtype=np.int64)
    lb = np.array(cb.canonical_labeling, dtype=np.int64)
    inv_b = np.empty(b.n, dtype=np.int64)
    inv_b[lb] = np.arange(b.n, dtype=np.int64)
    w = inv_b[la]
    for v in range(a.n):
        if a.vertex_colors[v] != b.vertex_colors[int(w[v])]:
            raise AssertionError("certificate collision: color mismatch in witness")
    eb = set(b.edges)
    for (u, v, c) in a.edges:
        if (int(w[u]), int(w[v]), c) not in eb:
            raise AssertionError("certificate collision: edge mismatch in witness")
    return True, tuple(int(x) for x in w)
