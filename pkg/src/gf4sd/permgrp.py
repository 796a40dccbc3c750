"""Permutation groups on {0..n-1}: Schreier-Sims chains, orbits, stabilizers.

Permutations are numpy int32 arrays in image form (p[i] = image of i);
compose(p, q) applies q first.  The chain construction is deterministic
Schreier-Sims with bottom-up level verification, giving exact group orders
for the automorphism groups found by canonical labeling and pointwise
stabilizer generators for orbit branching in clique search.
"""

from __future__ import annotations

import numpy as np


def as_perm(p) -> np.ndarray:
    return np.asarray(p, dtype=np.int32)


def identity_perm(degree: int) -> np.ndarray:
    return np.arange(degree, dtype=np.int32)


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """The permutation applying q first, then p."""
    return p[q]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def is_identity(p: np.ndarray) -> bool:
    return bool(np.all(p == np.arange(len(p), dtype=p.dtype)))


def orbit_labels_fast(gens, degree: int) -> np.ndarray:
    """Vectorized orbit labels (min vertex per orbit) via label propagation."""
    lab = np.arange(degree, dtype=np.int64)
    if not gens:
        return lab
    invs = [inverse(as_perm(g)) for g in gens]
    while True:
        before = lab
        lab = lab.copy()
        for g, gi in zip(gens, invs):
            np.minimum(lab, lab[g], out=lab)
            np.minimum(lab, lab[gi], out=lab)
        lab = lab[lab]
        if np.array_equal(lab, before):
            return lab


def orbit_labels(gens, degree: int) -> np.ndarray:
    """labels[v] = smallest vertex in the orbit of v under the generators."""
    parent = list(range(degree))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for g in gens:
        for x in range(degree):
            rx, ry = find(x), find(int(g[x]))
            if rx != ry:
                if rx > ry:
                    rx, ry = ry, rx
                parent[ry] = rx
    return np.array([find(x) for x in range(degree)], dtype=np.int64)


class PermGroup:
    """A permutation group with a base and strong generating set.

    ``base_hint`` forces the base to begin with the given points, so that
    ``stabilizer_gens(k)`` returns generators of the pointwise stabilizer
    of the first k hint points.
    """

    def __init__(self, degree: int, generators=(), base_hint=()):
        self.degree = int(degree)
        self._id = identity_perm(self.degree)
        self.base: list[int] = []
        self.strong: list[np.ndarray] = []
        self._transversals: list[dict[int, np.ndarray]] = []
        self._inv_cache: list[dict[int, np.ndarray]] = []
        self._tested: list[set[tuple[int, int]]] = []
        for b in base_hint:
            self._new_level(int(b))
        for g in generators:
            g = as_perm(g)
            if len(g) != self.degree:
                raise ValueError("generator degree mismatch")
            if not is_identity(g):
                self._add_strong(g)
        self._build()

    # -- chain construction -------------------------------------------------

    def _new_level(self, b: int) -> None:
        self.base.append(b)
        self._transversals.append({b: self._id})
        self._inv_cache.append({b: self._id})
        self._tested.append(set())

    def _add_strong(self, h: np.ndarray) -> int:
        """Record a strong generator; returns the level it belongs to."""
        self.strong.append(h)
        level = 0
        while level < len(self.base) and int(h[self.base[level]]) == self.base[level]:
            level += 1
        if level == len(self.base):
            moved = int(np.flatnonzero(h != self._id)[0])
            self._new_level(moved)
        return level

    def _level_gens(self, i: int) -> list[tuple[int, np.ndarray]]:
        out = []
        for gi, g in enumerate(self.strong):
            if all(int(g[self.base[k]]) == self.base[k] for k in range(i)):
                out.append((gi, g))
        return out

    def _rep_inv(self, i: int, x: int) -> np.ndarray:
        u = self._inv_cache[i].get(x)
        if u is None:
            u = inverse(self._transversals[i][x])
            self._inv_cache[i][x] = u
        return u

    def _strip(self, g: np.ndarray, start: int) -> tuple[np.ndarray, int]:
        for i in range(start, len(self.base)):
            x = int(g[self.base[i]])
            if x not in self._transversals[i]:
                return g, i
            g = self._rep_inv(i, x)[g]
        return g, len(self.base)

    def _verify_level(self, i: int) -> int | None:
        """Process untested (orbit point, generator) pairs at level i.

        Extends the transversal as the orbit grows; on a nontrivial
        Schreier residue, records it and returns its level.  Returns None
        once the level satisfies the Schreier condition.
        """
        T = self._transversals[i]
        tested = self._tested[i]
        while True:
            gens = self._level_gens(i)
            progress = False
            for x in list(T.keys()):
                ux = T[x]
                for gi, s in gens:
                    if (x, gi) in tested:
                        continue
                    tested.add((x, gi))
                    progress = True
                    y = int(s[x])
                    if y not in T:
                        T[y] = s[ux]
                        continue
                    schreier = self._rep_inv(i, y)[s[ux]]
                    if is_identity(schreier):
                        continue
                    h, j = self._strip(schreier, i + 1)
                    if is_identity(h):
                        continue
                    return self._add_strong(h)
            if not progress:
                return None

    def _build(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            j = self._verify_level(i)
            if j is None:
                i -= 1
            else:
                i = max(j, i)  # j > i for Schreier residues; guard anyway

    # -- queries ------------------------------------------------------------

    def order(self) -> int:
        n = 1
        for T in self._transversals:
            n *= len(T)
        return n

    def __contains__(self, p) -> bool:
        g = as_perm(p)
        if len(g) != self.degree:
            return False
        h, level = self._strip(g, 0)
        return level == len(self.base) and is_identity(h)

    def stabilizer_gens(self, k: int) -> list[np.ndarray]:
        """Generators of the pointwise stabilizer of base[:k]."""
        if k > len(self.base):
            raise ValueError("stabilizer prefix longer than base")
        return [g for _, g in self._level_gens(k)]

    def generators(self) -> list[np.ndarray]:
        return list(self.strong)

    def orbit(self, x: int) -> list[int]:
        seen = {int(x)}
        frontier = [int(x)]
        while frontier:
            nxt = []
            for v in frontier:
                for g in self.strong:
                    y = int(g[v])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        labels = orbit_labels(self.strong, self.degree)
        out: dict[int, list[int]] = {}
        for v in range(self.degree):
            out.setdefault(int(labels[v]), []).append(v)
        return [out[k] for k in sorted(out)]
