"""Neighbor-method classification of Hermitian self-dual codes.

Two self-dual codes are neighbors when they meet in codimension 1.  All
neighbors of a code C arise from an index-4 subcode D < C as the two
isotropic lines of the 2-dimensional Hermitian space D_perp/D other than
C/D itself, so sweeping the (4^{n/2}-1)/3 subcodes enumerates the
neighbor set completely.  Breadth-first search over equivalence classes,
expanding the largest automorphism groups first, discovers new classes
until the mass formula

    sum over classes of 3^n n! / #Aut(C)  =  N(n)

closes, which certifies completeness; the accumulated mass can never
exceed the target, so the certificate doubles as a global check on every
computed automorphism order.
"""

from __future__ import annotations

import heapq
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import gf4
from .codes import (
    LinearCode,
    build_s18,
    count_self_dual,
    direct_sum,
    hermitian_inner_bits,
    is_self_dual,
    weight_distribution,
)
from .equiv import code_aut_generators, code_certificate, _code_cert_obj
from .gf4 import GF4Matrix, GF4Vector, MUL_TABLE, vec_conj, vec_scale


def monomial_group_order(n: int) -> int:
    return 3**n * math.factorial(n)


class BudgetExhausted(RuntimeError):
    """Raised when a classification runs out of budget; carries the partial run."""

    def __init__(self, run: "ClassificationRun"):
        super().__init__(
            f"budget exhausted at mass {run.mass_accumulated}/{run.target} "
            f"({len(run.discovered)} classes found)"
        )
        self.run = run


@dataclass
class ClassRecord:
    code: LinearCode
    cert: bytes
    aut_order: int
    d: int
    a4: int
    a6: int


@dataclass
class ClassificationRun:
    n: int
    target: int
    discovered: dict[bytes, ClassRecord] = field(default_factory=dict)
    mass_accumulated: int = 0
    complete: bool = False
    expansions: int = 0

    def add(self, rec: ClassRecord) -> None:
        if rec.cert in self.discovered:
            raise AssertionError("class added twice")
        share, rem = divmod(monomial_group_order(self.n), rec.aut_order)
        if rem:
            raise AssertionError("automorphism order does not divide the monomial group order")
        self.discovered[rec.cert] = rec
        self.mass_accumulated += share
        if self.mass_accumulated > self.target:
            raise AssertionError("mass formula overshot: some class or order is wrong")
        if self.mass_accumulated == self.target:
            self.complete = True

    def by_weight(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rec in self.discovered.values():
            out[rec.d] = out.get(rec.d, 0) + 1
        return dict(sorted(out.items()))


def _record_for(code: LinearCode) -> ClassRecord:
    wd = weight_distribution(code)
    return ClassRecord(
        code=code,
        cert=code_certificate(code),
        aut_order=_code_cert_obj(code).aut_order,
        d=wd.minimum_weight(),
        a4=wd[4] if code.n >= 4 else 0,
        a6=wd[6] if code.n >= 6 else 0,
    )


# -- neighbor enumeration -----------------------------------------------------


def _message_to_word(m_bits: int, gen_rows: tuple[int, ...], k: int, n: int) -> int:
    out = 0
    for i in range(k):
        e = (m_bits >> (2 * i)) & 3
        if e:
            out ^= vec_scale(gen_rows[i], e, n)
    return out


def _neighbors_of_subcode(c: LinearCode, f_bits: int) -> list[LinearCode]:
    """The two self-dual neighbors through the subcode cut out by functional f."""
    n, k = c.n, c.k
    fker = gf4.kernel(GF4Matrix(k, [f_bits]))
    d_rows = [_message_to_word(m, c.rows, k, n) for m in fker.rows]
    # solution space of Hermitian orthogonality against D contains C with index 4
    if d_rows:
        sol = gf4.kernel(GF4Matrix(n, [vec_conj(r, n) for r in d_rows]))
    else:
        sol = GF4Matrix.identity(n)
    y = None
    for row in sol.rows:
        if row not in c:
            y = row
            break
    if y is None:
        raise AssertionError("hyperplane perp did not exceed the code")
    d_code = LinearCode(n, d_rows)
    c0 = None
    for row in c.rows:
        if row not in d_code:
            c0 = row
            break
    out = []
    for alpha in (0, 1, 2, 3):
        v = y ^ (vec_scale(c0, alpha, n) if alpha else 0)
        if hermitian_inner_bits(v, v, n) == 0:
            out.append(LinearCode(n, list(d_code.rows) + [v]))
    if len(out) != 2:
        raise AssertionError(f"expected 2 isotropic non-code lines, got {len(out)}")
    for b in out:
        if b.k != k or not is_self_dual(b):
            raise AssertionError("neighbor construction lost self-duality")
    return out


def _all_functionals(k: int) -> np.ndarray:
    """Normalized nonzero functionals on the message space, as (N, k) entries."""
    vals = np.arange(4**k, dtype=np.int64)
    arr = np.empty((len(vals), k), dtype=np.uint8)
    for i in range(k):
        arr[:, i] = (vals >> (2 * i)) & 3
    arr = arr[1:]  # drop zero
    first = np.argmax(arr != 0, axis=1)
    lead = arr[np.arange(len(arr)), first]
    norm = MUL_TABLE[np.array([0, 1, 3, 2], dtype=np.uint8)[lead][:, None], arr]
    return np.unique(norm, axis=0)


def neighbors(c: LinearCode) -> list[LinearCode]:
    """All self-dual neighbors (codes meeting c in codimension 1).

    Output is deduplicated as row spaces, not by equivalence.
    """
    if not is_self_dual(c):
        raise ValueError("neighbors are defined for self-dual codes")
    shifts = (2 * np.arange(c.k, dtype=np.int64))[None, :]
    out: dict[tuple, LinearCode] = {}
    for f_row in _all_functionals(c.k):
        f_bits = int((f_row.astype(np.int64) << shifts[0]).sum())
        for b in _neighbors_of_subcode(c, f_bits):
            out[b.rows] = b
    return list(out.values())


def _message_matrix(c: LinearCode, m: "object") -> list[int]:
    """k x k matrix of the monomial map m acting on the message space of c."""
    pivots = c._pivots()
    rows = []
    for r in c.rows:
        img = m.apply_bits(r, c.n)
        packed = 0
        for col, p in enumerate(pivots):
            e = (img >> (2 * p)) & 3
            packed |= e << (2 * col)
        # verify: the image must reconstruct from the coefficients
        chk = _message_to_word(packed, c.rows, c.k, c.n)
        if chk != img:
            raise AssertionError("automorphism image left the code")
        rows.append(packed)
    return rows


def _gf4_matinv(rows: list[int], k: int) -> list[int]:
    aug = [rows[i] | (1 << (2 * (k + i))) for i in range(k)]
    red, piv = gf4.rref_rows(aug, 2 * k)
    if piv[:k] != list(range(k)):
        raise ValueError("matrix is singular")
    mask = (1 << (2 * k)) - 1
    return [r >> (2 * k) for r in red]


def _functional_orbit_reps(c: LinearCode, aut_maps) -> list[int]:
    """One packed functional per Aut(c)-orbit of index-4 subcodes."""
    k = c.k
    funcs = _all_functionals(k)
    n_funcs = len(funcs)
    shifts = 2 * np.arange(k, dtype=np.int64)
    packed = (funcs.astype(np.int64) << shifts[None, :]).sum(axis=1)
    index_of = np.full(4**k, -1, dtype=np.int64)
    index_of[packed] = np.arange(n_funcs)

    perms = []
    for m in aut_maps:
        a_rows = _message_matrix(c, m)
        # functional transform: f -> f * (A^T)^{-1}, projectively
        at = GF4Matrix(k, a_rows).transpose()
        b_rows = _gf4_matinv(list(at.rows), k)
        b = GF4Matrix(k, b_rows).to_array()
        img = np.zeros_like(funcs)
        for i in range(k):
            for j in range(k):
                if b[i, j]:
                    img[:, j] ^= MUL_TABLE[funcs[:, i], b[i, j]]
        first = np.argmax(img != 0, axis=1)
        lead = img[np.arange(n_funcs), first]
        img = MUL_TABLE[np.array([0, 1, 3, 2], dtype=np.uint8)[lead][:, None], img]
        ipacked = (img.astype(np.int64) << shifts[None, :]).sum(axis=1)
        perm = index_of[ipacked]
        if np.any(perm < 0):
            raise AssertionError("functional action fell outside the point set")
        perms.append(perm.astype(np.int64))

    labels = np.arange(n_funcs, dtype=np.int64)
    if perms:
        invs = []
        for p in perms:
            inv = np.empty_like(p)
            inv[p] = np.arange(n_funcs, dtype=np.int64)
            invs.append(inv)
        while True:
            before = labels
            labels = labels.copy()
            for p, ip in zip(perms, invs):
                np.minimum(labels, labels[p], out=labels)
                np.minimum(labels, labels[ip], out=labels)
            labels = labels[labels]
            if np.array_equal(labels, before):
                break
    reps = np.unique(labels)
    return [int(packed[r]) for r in reps]


def expansion_neighbors(c: LinearCode) -> list[LinearCode]:
    """Neighbor representatives, pruned to one subcode per Aut(c)-orbit.

    Equivalence classes among all neighbors are preserved: neighbors over
    subcodes in one orbit are equivalent codes.
    """
    aut_maps = code_aut_generators(c)
    out: dict[tuple, LinearCode] = {}
    for f_bits in _functional_orbit_reps(c, aut_maps):
        for b in _neighbors_of_subcode(c, f_bits):
            out[b.rows] = b
    return list(out.values())


def neighbor_survey(c: LinearCode, min_d: int = 4):
    """Equivalence classes among all self-dual neighbors with d >= min_d.

    Returns {certificate: ClassRecord}; counts are complete because orbit
    pruning only removes equivalent duplicates.
    """
    classes: dict[bytes, ClassRecord] = {}
    for b in expansion_neighbors(c):
        wd = weight_distribution(b)
        if wd.minimum_weight() < min_d:
            continue
        cert = code_certificate(b)
        if cert not in classes:
            classes[cert] = _record_for(b)
    return classes


# -- breadth-first classification ---------------------------------------------


def seeds_for(n: int) -> list[LinearCode]:
    """Direct-sum seed (always), plus the extremal code at length 18."""
    i2 = LinearCode.from_vectors([GF4Vector.from_string("11")])
    seed = i2
    for _ in range(n // 2 - 1):
        seed = direct_sum(seed, i2)
    out = [seed]
    if n == 18:
        out.append(build_s18())
    return out


def classify_length(
    n: int,
    budget: float | None = None,
    out_dir: str | None = None,
    resume: bool = False,
    threads: int = 1,
    progress=None,
) -> ClassificationRun:
    """Classify all Hermitian self-dual codes of length n up to equivalence.

    Expands the neighbor graph breadth-first (largest automorphism group
    first) until the mass certificate closes.  `budget` is wall seconds;
    exhaustion raises BudgetExhausted carrying the partial run.  With
    `out_dir` the discovered map is checkpointed and `resume=True` restarts
    from it.
    """
    if n % 2 or n < 2 or n > 18:
        raise ValueError("length must be even, 2 <= n <= 18")
    t0 = time.monotonic()
    run = ClassificationRun(n=n, target=count_self_dual(n))

    pending: list[tuple[int, bytes]] = []  # (-aut_order, cert) heap
    expanded: set[bytes] = set()

    def push(rec: ClassRecord) -> None:
        run.add(rec)
        heapq.heappush(pending, (-rec.aut_order, rec.cert))
        if progress:
            progress(run, rec)

    if resume and out_dir:
        state = _load_checkpoint(out_dir, n)
        for code_rows, aut_order, was_expanded in state:
            code = LinearCode(n, code_rows)
            rec = _record_for(code)
            run.add(rec)
            if was_expanded:
                expanded.add(rec.cert)
            else:
                heapq.heappush(pending, (-rec.aut_order, rec.cert))
            if progress:
                progress(run, rec)

    if not run.discovered:
        for seed in seeds_for(n):
            rec = _record_for(seed)
            if rec.cert not in run.discovered:
                push(rec)

    while not run.complete and pending:
        if budget is not None and time.monotonic() - t0 > budget:
            if out_dir:
                _save_checkpoint(out_dir, run, expanded)
            raise BudgetExhausted(run)
        _, cert = heapq.heappop(pending)
        if cert in expanded:
            continue
        expanded.add(cert)
        code = run.discovered[cert].code
        run.expansions += 1
        for b in expansion_neighbors(code):
            bcert = code_certificate(b)
            if bcert not in run.discovered:
                push(_record_for(b))
                if run.complete:
                    break
        if out_dir:
            _save_checkpoint(out_dir, run, expanded)

    if not run.complete:
        raise AssertionError(
            f"frontier exhausted at mass {run.mass_accumulated}/{run.target}; "
            "the neighbor graph failed to reach every class"
        )
    if out_dir:
        _save_checkpoint(out_dir, run, expanded)
        write_outputs(out_dir, run)
    return run


def _checkpoint_path(out_dir: str, n: int) -> str:
    return os.path.join(out_dir, f"checkpoint_n{n}.json")


def _save_checkpoint(out_dir: str, run: ClassificationRun, expanded: set[bytes]) -> None:
    os.makedirs(out_dir, exist_ok=True)
    payload = {
        "n": run.n,
        "classes": [
            {
                "rows": [row for row in rec.code.rows],
                "aut": rec.aut_order,
                "expanded": rec.cert in expanded,
            }
            for rec in sorted(run.discovered.values(), key=lambda r: r.cert)
        ],
    }
    path = _checkpoint_path(out_dir, run.n)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def _load_checkpoint(out_dir: str, n: int):
    path = _checkpoint_path(out_dir, n)
    if not os.path.exists(path):
        return []
    with open(path) as fh:
        payload = json.load(fh)
    if payload["n"] != n:
        raise ValueError(f"checkpoint is for n={payload['n']}, not n={n}")
    return [(tuple(c["rows"]), c["aut"], c["expanded"]) for c in payload["classes"]]


def write_outputs(out_dir: str, run: ClassificationRun) -> None:
    """One code file per class plus manifest.tsv and mass.txt."""
    from .codes import code_to_text

    os.makedirs(out_dir, exist_ok=True)
    lines = ["cert\tdim\td\tA4\tA6\taut_order"]
    for rec in sorted(run.discovered.values(), key=lambda r: r.cert):
        hexid = rec.cert.hex()[:16]
        with open(os.path.join(out_dir, f"code_{hexid}.txt"), "w") as fh:
            fh.write(code_to_text(rec.code))
        lines.append(
            f"{hexid}\t{rec.code.k}\t{rec.d}\t{rec.a4}\t{rec.a6}\t{rec.aut_order}"
        )
    with open(os.path.join(out_dir, "manifest.tsv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    with open(os.path.join(out_dir, "mass.txt"), "w") as fh:
        fh.write(f"accumulated {run.mass_accumulated}\ntarget {run.target}\n")


# -- decomposable census -------------------------------------------------------


def decomposable_census(n: int, runs: dict[int, ClassificationRun]) -> dict[int, int]:
    """Counts of decomposable classes of length n by minimum weight.

    Requires classification runs for all even lengths below n.  Builds all
    direct sums of an indecomposable class with any class of the
    complementary length and deduplicates by certificate.
    """
    for m in range(2, n, 2):
        if m not in runs or not runs[m].complete:
            raise ValueError(f"missing complete classification for length {m}")

    indecomposable: dict[int, list[LinearCode]] = {}
    decomposable_certs: dict[int, set[bytes]] = {}
    for m in range(2, n + 1, 2):
        dec: dict[bytes, LinearCode] = {}
        for a in range(2, m // 2 + 1, 2):
            b = m - a
            for ca in indecomposable.get(a, []) if a < m else []:
                for rb in runs[b].discovered.values():
                    s = direct_sum(ca, rb.code)
                    cert = code_certificate(s)
                    dec.setdefault(cert, s)
        decomposable_certs[m] = set(dec.keys())
        if m < n:
            indecomposable[m] = [
                rec.code
                for rec in runs[m].discovered.values()
                if rec.cert not in decomposable_certs[m]
            ]
        else:
            census: dict[int, int] = {}
            for code in dec.values():
                d = weight_distribution(code).minimum_weight()
                census[d] = census.get(d, 0) + 1
            return dict(sorted(census.items()))
    raise AssertionError("unreachable")
