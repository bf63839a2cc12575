"""Reachability in the extremal subset automaton.

The extremal automaton over the m x n grid carries one input letter for
every pair of transformations (s, t) from T_m x T_n; a subset S steps to
{(s(p), q)} union {(p, t(q))} over its members. This module explores that
automaton exhaustively (BFS over a dense visited bitmap, with checkpoints
and worker sharding), and replays the inductive reduction arguments that
substitute for BFS where exhaustive search is out of reach:

  * containment reduction: a row/column containing another strips the
    duplicated entries and restores them with a one-point map;
  * single-element reduction: a cell alone in its row and column drops to
    the (m-1) x (n-1) sub-instance, re-anchored by a transposition pair;
  * permutation reduction: columns forming full orbit classes under a row
    permutation phi pull back through the letter (phi; psi);
  * the Sperner limit C(m, floor(m/2)) forcing containment whenever a grid
    has more distinct columns than any antichain allows.

Certificates assembled from these reductions are hierarchical: per-subset
justification tables where the grid is small enough to enumerate, and
instance- or column-family-level rules above that.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .automata import Transformation
from .shuffle import (
    ENUM_GUARD_CELLS,
    GridSizeError,
    ProductSubset,
    bound_f,
    col1_mask,
    is_valid,
    row1_mask,
)


class CheckpointError(RuntimeError):
    """A checkpoint file is missing, inconsistent, or corrupted."""


class CertificationGapError(RuntimeError):
    """Certification could not justify some subsets; `gaps` lists them."""

    def __init__(self, gaps: list[str]):
        super().__init__(
            "certification gaps:\n" + "\n".join(f"  - {g}" for g in gaps[:20])
            + ("" if len(gaps) <= 20 else f"\n  ... and {len(gaps) - 20} more")
        )
        self.gaps = gaps


# -- extremal letters --------------------------------------------------------


@dataclass(frozen=True)
class ExtremalLetter:
    """A letter of the extremal alphabet: s acts on rows, t on columns."""

    s: Transformation
    t: Transformation

    def to_dict(self) -> dict:
        return {"s": list(self.s.images), "t": list(self.t.images)}

    @classmethod
    def from_dict(cls, obj: dict) -> "ExtremalLetter":
        return cls(Transformation(tuple(obj["s"])), Transformation(tuple(obj["t"])))


def iter_full_alphabet(m: int, n: int) -> Iterator[ExtremalLetter]:
    """All m^m * n^n letters, lazily, in lexicographic order of the image
    tuples of (s, t). This order is canonical; no table is materialized."""
    for s in product(range(1, m + 1), repeat=m):
        st = Transformation(s)
        for t in product(range(1, n + 1), repeat=n):
            yield ExtremalLetter(st, Transformation(t))


def load_letters(path) -> list[ExtremalLetter]:
    with open(path, encoding="utf-8") as fh:
        arr = json.load(fh)
    return [ExtremalLetter.from_dict(obj) for obj in arr]


def dump_letters(letters: Sequence[ExtremalLetter], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([a.to_dict() for a in letters], fh, indent=1)
        fh.write("\n")


def alphabet_id(alphabet) -> str:
    """'full', or a hash identifying an explicit letter list."""
    if isinstance(alphabet, str):
        if alphabet != "full":
            raise ValueError("alphabet must be 'full' or a letter list")
        return "full"
    blob = json.dumps([a.to_dict() for a in alphabet], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def extremal_step(S: ProductSubset, a: ExtremalLetter) -> ProductSubset:
    """S . a = {(s(p), q)} union {(p, t(q))} over (p, q) in S."""
    if a.s.degree != S.m or a.t.degree != S.n:
        raise ValueError("letter degree does not match the grid")
    n = S.n
    bits = 0
    for p, q in S.pairs():
        bits |= 1 << ((a.s.images[p - 1] - 1) * n + (q - 1))
        bits |= 1 << ((p - 1) * n + (a.t.images[q - 1] - 1))
    return ProductSubset(S.m, S.n, bits)


# -- vectorized stepping -----------------------------------------------------


def _col_masks(m: int, n: int) -> list[int]:
    return [col1_mask(m, n) << (q - 1) for q in range(1, n + 1)]


def _row_map(enc: np.ndarray, images: Sequence[int], m: int, n: int) -> np.ndarray:
    rowmask = np.uint64((1 << n) - 1)
    out = np.zeros_like(enc)
    for p in range(m):
        content = (enc >> np.uint64(p * n)) & rowmask
        out |= content << np.uint64((images[p] - 1) * n)
    return out


def _col_map(
    enc: np.ndarray, images: Sequence[int], m: int, n: int, masks: list[int]
) -> np.ndarray:
    out = np.zeros_like(enc)
    for q in range(n):
        col = enc & np.uint64(masks[q])
        shift = images[q] - 1 - q
        if shift >= 0:
            out |= col << np.uint64(shift)
        else:
            out |= col >> np.uint64(-shift)
    return out


def _successor_bitmap(
    frontier: np.ndarray,
    m: int,
    n: int,
    alphabet,
) -> np.ndarray:
    """Dense bool bitmap of every one-step successor of the frontier."""
    total = 1 << (m * n)
    masks = _col_masks(m, n)
    out = np.zeros(total, dtype=bool)
    if isinstance(alphabet, str):  # full alphabet
        s_list = list(product(range(1, m + 1), repeat=m))
        t_list = list(product(range(1, n + 1), repeat=n))
        chunk = max(64, (1 << 22) // max(len(s_list), len(t_list)))
        for lo in range(0, frontier.size, chunk):
            part = frontier[lo:lo + chunk]
            rowmaps = [_row_map(part, s, m, n) for s in s_list]
            colmaps = [_col_map(part, t, m, n, masks) for t in t_list]
            for R in rowmaps:
                for C in colmaps:
                    out[R | C] = True
    else:
        for a in alphabet:
            R = _row_map(frontier, a.s.images, m, n)
            C = _col_map(frontier, a.t.images, m, n, masks)
            out[R | C] = True
    return out


def _valid_bitmap(m: int, n: int) -> np.ndarray:
    total = 1 << (m * n)
    r1 = np.uint64(row1_mask(m, n))
    c1 = np.uint64(col1_mask(m, n))
    x = np.arange(total, dtype=np.uint64)
    return ((x & r1) != 0) & ((x & c1) != 0)


# -- reach report ------------------------------------------------------------


@dataclass(frozen=True)
class ReachReport:
    """Outcome of a reachability exploration.

    Equality ignores elapsed_seconds so that an interrupted-and-resumed run
    compares equal to an uninterrupted one.
    """

    m: int
    n: int
    alphabet: object  # "full" or tuple of ((s images), (t images)) pairs
    alphabet_id: str
    bound: int
    reached: int
    complete: bool
    unreached_sample: tuple[int, ...]
    lineage: str
    generations: int
    elapsed_seconds: float = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "alphabet": (
                self.alphabet
                if isinstance(self.alphabet, str)
                else [{"s": list(s), "t": list(t)} for s, t in self.alphabet]
            ),
            "alphabet_id": self.alphabet_id,
            "bound": self.bound,
            "reached": self.reached,
            "complete": self.complete,
            "unreached_sample": list(self.unreached_sample),
            "lineage": self.lineage,
            "generations": self.generations,
            "elapsed_seconds": self.elapsed_seconds,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ReachReport":
        alphabet = obj["alphabet"]
        if not isinstance(alphabet, str):
            alphabet = tuple(
                (tuple(a["s"]), tuple(a["t"])) for a in alphabet
            )
        return cls(
            m=obj["m"], n=obj["n"], alphabet=alphabet,
            alphabet_id=obj["alphabet_id"],
            bound=obj["bound"], reached=obj["reached"], complete=obj["complete"],
            unreached_sample=tuple(obj["unreached_sample"]),
            lineage=obj["lineage"], generations=obj["generations"],
            elapsed_seconds=obj["elapsed_seconds"],
        )


def _lineage(m: int, n: int, aid: str) -> str:
    return hashlib.sha256(f"{m}:{n}:{aid}".encode()).hexdigest()[:16]


# -- checkpoints -------------------------------------------------------------


def _checkpoint_name(generation: int) -> str:
    return f"gen-{generation:06d}.ckpt"


def write_checkpoint(
    directory, m: int, n: int, aid: str, generation: int,
    visited: np.ndarray, frontier: np.ndarray,
) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    bitmap = np.packbits(visited, bitorder="little").tobytes()
    header = {
        "m": m,
        "n": n,
        "alphabet_id": aid,
        "generation": generation,
        "visited_count": int(visited.sum()),
        "frontier_len": int(frontier.size),
        "bitmap_sha256": hashlib.sha256(bitmap).hexdigest(),
    }
    name = _checkpoint_name(generation)
    body = b"\n".join(str(int(e)).encode() for e in frontier)
    with open(directory / name, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(bitmap)
        fh.write(b"\n" + body + (b"\n" if frontier.size else b""))
    (directory / "LATEST").write_text(name + "\n")


def read_checkpoint(directory, m: int, n: int, aid: str):
    """Load the latest checkpoint; refuse on any header/hash inconsistency."""
    directory = Path(directory)
    pointer = directory / "LATEST"
    if not pointer.exists():
        raise CheckpointError(f"no LATEST pointer in {directory}")
    name = pointer.read_text().strip()
    path = directory / name
    if not path.exists():
        raise CheckpointError(f"missing checkpoint file {path}")
    raw = path.read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise CheckpointError("truncated checkpoint header")
    try:
        header = json.loads(raw[:nl])
    except json.JSONDecodeError as e:
        raise CheckpointError(f"bad checkpoint header: {e}") from None
    for key, val in (("m", m), ("n", n), ("alphabet_id", aid)):
        if header.get(key) != val:
            raise CheckpointError(
                f"checkpoint {key}={header.get(key)!r} does not match run {key}={val!r}"
            )
    total = 1 << (m * n)
    nbytes = (total + 7) // 8
    bitmap = raw[nl + 1:nl + 1 + nbytes]
    if len(bitmap) != nbytes:
        raise CheckpointError("truncated visited bitmap")
    if hashlib.sha256(bitmap).hexdigest() != header.get("bitmap_sha256"):
        raise CheckpointError("visited bitmap hash mismatch; refusing to resume")
    visited = np.unpackbits(
        np.frombuffer(bitmap, dtype=np.uint8), bitorder="little"
    )[:total].astype(bool)
    rest = raw[nl + 1 + nbytes:]
    if rest[:1] == b"\n":
        rest = rest[1:]
    frontier_items = [int(line) for line in rest.split(b"\n") if line]
    if len(frontier_items) != header.get("frontier_len"):
        raise CheckpointError("frontier length does not match header")
    if int(visited.sum()) != header.get("visited_count"):
        raise CheckpointError("visited count does not match header")
    frontier = np.array(sorted(frontier_items), dtype=np.uint64)
    return header["generation"], visited, frontier


# -- BFS ---------------------------------------------------------------------


def bfs_reach(
    m: int,
    n: int,
    alphabet="full",
    *,
    workers: int = 1,
    checkpoint_dir=None,
    resume: bool = False,
    max_generations: int | None = None,
) -> ReachReport:
    """Fixpoint of extremal_step from {(1,1)}; counts reached subsets.

    Workers split each frontier generation into disjoint slices; discovered
    states merge by set union, so the final report is independent of worker
    count and visit order. Checkpoints are written once per completed
    generation when checkpoint_dir is given.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if m * n > ENUM_GUARD_CELLS:
        raise GridSizeError(
            f"visited bitmap for {m}x{n} needs 2^{m * n} bits, beyond the "
            f"{ENUM_GUARD_CELLS}-cell guard"
        )
    aid = alphabet_id(alphabet)
    start_time = time.monotonic()
    total = 1 << (m * n)
    if resume:
        if checkpoint_dir is None:
            raise ValueError("resume requires a checkpoint directory")
        generation, visited, frontier = read_checkpoint(checkpoint_dir, m, n, aid)
    else:
        generation = 0
        visited = np.zeros(total, dtype=bool)
        init = 1  # encoding of {(1,1)}
        visited[init] = True
        frontier = np.array([init], dtype=np.uint64)
        if checkpoint_dir is not None:
            write_checkpoint(checkpoint_dir, m, n, aid, 0, visited, frontier)

    workers = max(1, workers)
    steps = 0
    while frontier.size:
        if max_generations is not None and steps >= max_generations:
            break
        if workers == 1 or frontier.size < 2 * workers:
            succ = _successor_bitmap(frontier, m, n, alphabet)
        else:
            slices = np.array_split(frontier, workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(
                    pool.map(lambda sl: _successor_bitmap(sl, m, n, alphabet), slices)
                )
            succ = parts[0]
            for part in parts[1:]:
                succ |= part
        new = succ & ~visited
        visited |= new
        frontier = np.flatnonzero(new).astype(np.uint64)
        generation += 1
        steps += 1
        if checkpoint_dir is not None:
            write_checkpoint(checkpoint_dir, m, n, aid, generation, visited, frontier)

    bound = bound_f(m, n)
    reached = int(visited.sum())
    valid = _valid_bitmap(m, n)
    unreached = np.flatnonzero(valid & ~visited)[:32]
    return ReachReport(
        m=m,
        n=n,
        alphabet=(
            alphabet
            if isinstance(alphabet, str)
            else tuple((a.s.images, a.t.images) for a in alphabet)
        ),
        alphabet_id=aid,
        bound=bound,
        reached=reached,
        complete=reached == bound,
        unreached_sample=tuple(int(e) for e in unreached),
        lineage=_lineage(m, n, aid),
        generations=generation,
        elapsed_seconds=time.monotonic() - start_time,
    )


def reached_condition_c_violations(m: int, n: int, report: ReachReport) -> int:
    """Reached-count excess over the valid-subset count; nonzero would
    falsify the reachability validity lemma and signals a bug."""
    return max(0, report.reached - report.bound)


# -- reductions --------------------------------------------------------------


@dataclass(frozen=True)
class ContainmentReduction:
    axis: str  # "row" | "column"
    inner: int  # the contained row/column index
    outer: int  # the containing one
    smaller: ProductSubset
    letter: ExtremalLetter


def reduce_containment(S: ProductSubset) -> ContainmentReduction | None:
    """Strip the duplicated entries of a containing row (or column).

    Tries all ordered row pairs in row-major order, then all column pairs,
    and returns the first candidate whose stripped set is still valid; the
    letter (inner -> outer; identity) restores S exactly.
    """
    if not is_valid(S):
        raise ValueError("containment reduction expects a valid subset")
    m, n = S.m, S.n
    rows = [S.row(p) for p in range(1, m + 1)]
    for i in range(1, m + 1):
        if not rows[i - 1]:
            continue
        for i2 in range(1, m + 1):
            if i2 == i or not rows[i - 1] <= rows[i2 - 1]:
                continue
            bits = S.bits
            for j in rows[i - 1]:
                bits &= ~(1 << ProductSubset.index(i2, j, n))
            smaller = ProductSubset(m, n, bits)
            if not is_valid(smaller):
                continue
            letter = ExtremalLetter(
                Transformation.point(m, i, i2), Transformation.identity(n)
            )
            assert extremal_step(smaller, letter) == S and len(smaller) < len(S)
            return ContainmentReduction("row", i, i2, smaller, letter)
    cols = [S.column(q) for q in range(1, n + 1)]
    for j in range(1, n + 1):
        if not cols[j - 1]:
            continue
        for j2 in range(1, n + 1):
            if j2 == j or not cols[j - 1] <= cols[j2 - 1]:
                continue
            bits = S.bits
            for i in cols[j - 1]:
                bits &= ~(1 << ProductSubset.index(i, j2, n))
            smaller = ProductSubset(m, n, bits)
            if not is_valid(smaller):
                continue
            letter = ExtremalLetter(
                Transformation.identity(m), Transformation.point(n, j, j2)
            )
            assert extremal_step(smaller, letter) == S and len(smaller) < len(S)
            return ContainmentReduction("column", j, j2, smaller, letter)
    return None


@dataclass(frozen=True)
class SingleElementReduction:
    p: int
    q: int
    sub: ProductSubset        # renumbered (m-1) x (n-1) subset
    letter: ExtremalLetter    # transposition pair a
    prefix_power: int         # a^prefix_power from {(1,1)} gives the anchor
    anchor: ProductSubset


def _renumber_drop(S: ProductSubset, p: int, q: int) -> ProductSubset:
    """Remove row p and column q; indices above them slide down by one."""
    pairs = []
    for i, j in S.pairs():
        if i == p or j == q:
            continue
        pairs.append((i - 1 if i > p else i, j - 1 if j > q else j))
    return ProductSubset.from_pairs(S.m - 1, S.n - 1, pairs)


def reduce_single_element(S: ProductSubset) -> SingleElementReduction | None:
    """Drop a cell that is alone in both its row and its column.

    Applies when S is valid, has no empty row or column, and containment
    does not apply. The returned transposition pair re-anchors the
    sub-instance: applied prefix_power times to {(1,1)} it yields the
    two-element anchor set of the matching case of the inductive proof.
    The proof states word a^2 for all four cases, but when exactly one of
    p, q equals 1 direct replay shows a single application (any odd power)
    produces the stated anchor while a^2 does not; we store the power that
    actually replays.
    """
    if not is_valid(S):
        raise ValueError("single-element reduction expects a valid subset")
    m, n = S.m, S.n
    if m < 2 or n < 2:
        return None
    rows = [S.row(p) for p in range(1, m + 1)]
    cols = [S.column(q) for q in range(1, n + 1)]
    if any(not r for r in rows) or any(not c for c in cols):
        return None
    if reduce_containment(S) is not None:
        return None
    for p in range(1, m + 1):
        if len(rows[p - 1]) != 1:
            continue
        (q,) = rows[p - 1]
        if len(cols[q - 1]) != 1:
            continue
        if p != 1 and q != 1:
            s = Transformation.transposition(m, 1, p)
            t = Transformation.transposition(n, 1, q)
            power, anchor_pairs = 2, [(1, 1), (p, q)]
        elif p == 1 and q != 1:
            s = Transformation.transposition(m, 1, 2)
            t = Transformation.transposition(n, 1, q)
            power, anchor_pairs = 1, [(2, 1), (1, q)]
        elif p != 1 and q == 1:
            s = Transformation.transposition(m, 1, p)
            t = Transformation.transposition(n, 1, 2)
            power, anchor_pairs = 1, [(p, 1), (1, 2)]
        else:
            s = Transformation.transposition(m, 1, 2)
            t = Transformation.transposition(n, 1, 2)
            power, anchor_pairs = 2, [(1, 1), (2, 2)]
        letter = ExtremalLetter(s, t)
        anchor = ProductSubset.from_pairs(m, n, anchor_pairs)
        probe = ProductSubset.from_pairs(m, n, [(1, 1)])
        for _ in range(power):
            probe = extremal_step(probe, letter)
        assert probe == anchor
        sub = _renumber_drop(S, p, q)
        assert is_valid(sub) and len(sub) == len(S) - 1
        return SingleElementReduction(p, q, sub, letter, power, anchor)
    return None


@dataclass(frozen=True)
class PermutationReduction:
    phi: Transformation
    psi: Transformation
    removed_column: int
    smaller: ProductSubset
    letter: ExtremalLetter


def reduce_permutation(
    S: ProductSubset, phi: Transformation
) -> PermutationReduction | None:
    """Pull S back through the letter (phi; psi) when its columns form full
    orbit classes under the row permutation phi.

    Standing assumptions of the underlying lemma: columns pairwise distinct
    and nonempty, first row with at least two elements. Returns None when
    the class structure fails; never returns a non-replayable pair.
    """
    if not is_valid(S):
        raise ValueError("permutation reduction expects a valid subset")
    m, n = S.m, S.n
    if phi.degree != m or not phi.is_permutation():
        raise ValueError("phi must be a permutation of the rows")
    cols = [S.column(q) for q in range(1, n + 1)]
    if any(not c for c in cols) or len(set(cols)) != n:
        return None
    if len(S.row(1)) < 2:
        return None
    col_of = {c: q for q, c in enumerate(cols, start=1)}

    def phi_image(U: frozenset[int]) -> frozenset[int]:
        return frozenset(phi.apply(i) for i in U)

    for U in cols:
        if phi_image(U) not in col_of:
            return None
    moved = [q for q in range(2, n + 1) if phi_image(cols[q - 1]) != cols[q - 1]]
    if not moved and phi_image(cols[0]) == cols[0]:
        return None  # every class is a fixed point
    if not moved:
        return None  # only column 1 moves; impossible for closed orbits, be safe
    k = moved[0]
    phi_inv = phi.inverse()

    def phi_inv_image(U: frozenset[int]) -> frozenset[int]:
        return frozenset(phi_inv.apply(i) for i in U)

    psi_images = [0] * n
    for j in range(1, n + 1):
        psi_images[j - 1] = col_of[phi_inv_image(cols[j - 1])]
    psi = Transformation(tuple(psi_images))
    pairs = []
    for j in range(1, n + 1):
        if j == k:
            continue
        for i in phi_inv_image(cols[j - 1]):
            pairs.append((i, j))
    smaller = ProductSubset.from_pairs(m, n, pairs)
    letter = ExtremalLetter(phi, psi)
    if not is_valid(smaller):
        return None
    assert extremal_step(smaller, letter) == S and len(smaller) < len(S)
    return PermutationReduction(phi, psi, k, smaller, letter)


def sperner_limit(m: int) -> int:
    """Largest antichain of subsets of an m-set: C(m, floor(m/2))."""
    if m < 1:
        raise ValueError("m must be positive")
    return math.comb(m, m // 2)


# -- certification -----------------------------------------------------------

STRATEGY_BASE = "BASE"
STRATEGY_EXHAUSTIVE = "EXHAUSTIVE"
STRATEGY_SPERNER = "SPERNER"
STRATEGY_FAMILY = "FAMILY"

#: instances with at most this many grid cells get per-subset tables
DEFAULT_EXHAUSTIVE_CELLS = 16


@dataclass
class InstanceEntry:
    m: int
    n: int
    strategy: str
    data: dict

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "strategy": self.strategy, "data": self.data}

    @classmethod
    def from_dict(cls, obj: dict) -> "InstanceEntry":
        return cls(obj["m"], obj["n"], obj["strategy"], obj["data"])


@dataclass
class Certificate:
    """Reachability certificate for every instance (m', n') <= (m, n).

    Justification kinds inside per-subset tables: INITIAL, BFS_EDGE,
    CONTAINMENT, SINGLE_ELEMENT, PERMUTATION, SHRINK. Above the
    enumeration threshold, instances carry Sperner rules or column-family
    rules instead; the justification order is well-founded on the triple
    (m, n, |S|) descending to base facts.
    """

    m: int
    n: int
    base_facts: tuple[tuple[int, int], ...]
    entries: list[InstanceEntry]

    def entry(self, m: int, n: int) -> InstanceEntry | None:
        for e in self.entries:
            if (e.m, e.n) == (m, n):
                return e
        return None

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "base_facts": [list(f) for f in self.base_facts],
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "Certificate":
        return cls(
            obj["m"], obj["n"],
            tuple((f[0], f[1]) for f in obj["base_facts"]),
            [InstanceEntry.from_dict(e) for e in obj["entries"]],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


def _iter_valid_encodings(m: int, n: int) -> Iterator[int]:
    r1 = row1_mask(m, n)
    c1 = col1_mask(m, n)
    for enc in range(1, 1 << (m * n)):
        if enc & r1 and enc & c1:
            yield enc


def _first_empty_line(S: ProductSubset) -> tuple[str, int] | None:
    for q in range(1, S.n + 1):
        if not S.column(q):
            return "column", q
    for p in range(1, S.m + 1):
        if not S.row(p):
            return "row", p
    return None


def _shrink(S: ProductSubset, axis: str, index: int) -> ProductSubset:
    """Delete an empty row/column; indices above it slide down by one."""
    if axis == "column":
        pairs = [(i, j - 1 if j > index else j) for i, j in S.pairs()]
        return ProductSubset.from_pairs(S.m, S.n - 1, pairs)
    pairs = [(i - 1 if i > index else i, j) for i, j in S.pairs()]
    return ProductSubset.from_pairs(S.m - 1, S.n, pairs)


def _justify_subset(S: ProductSubset) -> dict | None:
    """One justification for S by the reduction lemmas, or None."""
    if S.bits == 1:
        return {"kind": "INITIAL"}
    line = _first_empty_line(S)
    if line is not None:
        axis, index = line
        sub = _shrink(S, axis, index)
        return {
            "kind": "SHRINK", "axis": axis, "index": index,
            "sub_m": sub.m, "sub_n": sub.n, "sub_encoding": sub.bits,
        }
    red = reduce_containment(S)
    if red is not None:
        return {
            "kind": "CONTAINMENT", "axis": red.axis,
            "inner": red.inner, "outer": red.outer,
            "letter": red.letter.to_dict(), "pred": red.smaller.bits,
        }
    single = reduce_single_element(S)
    if single is not None:
        return {
            "kind": "SINGLE_ELEMENT", "p": single.p, "q": single.q,
            "letter": single.letter.to_dict(),
            "prefix_power": single.prefix_power,
            "anchor": single.anchor.bits, "sub_encoding": single.sub.bits,
        }
    for phi_images in permutations(range(1, S.m + 1)):
        phi = Transformation(phi_images)
        perm = reduce_permutation(S, phi)
        if perm is not None:
            return {
                "kind": "PERMUTATION",
                "phi": list(perm.phi.images), "psi": list(perm.psi.images),
                "removed_column": perm.removed_column,
                "letter": perm.letter.to_dict(), "pred": perm.smaller.bits,
            }
    return None


def _exhaustive_entry(mi: int, ni: int, gaps: list[str]) -> InstanceEntry:
    table: dict[str, dict] = {}
    for enc in _iter_valid_encodings(mi, ni):
        S = ProductSubset(mi, ni, enc)
        j = _justify_subset(S)
        if j is None:
            gaps.append(f"instance ({mi},{ni}): subset encoding {enc} unjustified")
        else:
            table[str(enc)] = j
    return InstanceEntry(mi, ni, STRATEGY_EXHAUSTIVE, {"justifications": table})


def _family_candidates(mi: int) -> list[tuple[frozenset[int], ...]]:
    """Column sets (distinct nonempty subsets of Q_mi) in canonical order."""
    members = [
        frozenset(c)
        for size in range(1, mi + 1)
        for c in combinations(range(1, mi + 1), size)
    ]
    return members


def _representative_subset(
    columns: Sequence[frozenset[int]], first: int, mi: int
) -> ProductSubset:
    """Arrangement with columns[first] at position 1, rest in listed order."""
    ordering = [columns[first]] + [c for k, c in enumerate(columns) if k != first]
    pairs = [(i, j) for j, col in enumerate(ordering, start=1) for i in col]
    return ProductSubset.from_pairs(mi, len(columns), pairs)


def _find_family_phi(
    columns: frozenset[frozenset[int]], mi: int
) -> Transformation | None:
    """A nonidentity row permutation whose orbit classes of the column sets
    are all fully present."""
    for phi_images in permutations(range(1, mi + 1)):
        phi = Transformation(phi_images)
        if all(i == phi.apply(i) for i in range(1, mi + 1)):
            continue
        ok = True
        any_moved = False
        for U in columns:
            V = frozenset(phi.apply(i) for i in U)
            if V not in columns:
                ok = False
                break
            if V != U:
                any_moved = True
        if ok and any_moved:
            return phi
    return None


def _family_entry(mi: int, ni: int, gaps: list[str]) -> InstanceEntry:
    """Column-family rule entry for instances too large to enumerate.

    Any valid subset with an empty row or column shrinks; with duplicate,
    contained, or single-element structure it reduces by the containment or
    single-element lemmas. What is left is determined, up to arrangement,
    by a set of `ni` distinct nonempty columns covering every row; whether
    the reduction chain succeeds depends on the arrangement only through
    the member sitting at position 1, so each (column set, position-1
    member) pair is probed on a representative arrangement. Families where
    the chain bottoms out get a permutation-lemma witness phi recorded.
    """
    members = _family_candidates(mi)
    families: list[dict] = []
    reps_checked = 0
    for combo in combinations(members, ni):
        rows_present = set().union(*combo)
        if len(rows_present) != mi:
            continue  # an empty row; SHRINK covers every arrangement
        need_phi = False
        for first in range(ni):
            S = _representative_subset(combo, first, mi)
            if not is_valid(S):
                continue
            reps_checked += 1
            if reduce_containment(S) is not None:
                continue
            if reduce_single_element(S) is not None:
                continue
            need_phi = True
        if need_phi:
            phi = _find_family_phi(frozenset(combo), mi)
            if phi is None:
                gaps.append(
                    f"instance ({mi},{ni}): column family "
                    f"{sorted(sorted(c) for c in combo)} has no permutation witness"
                )
            else:
                families.append({
                    "columns": sorted(sorted(c) for c in combo),
                    "phi": list(phi.images),
                })
    return InstanceEntry(
        mi, ni, STRATEGY_FAMILY,
        {"families": families, "representatives_checked": reps_checked},
    )


def certify(
    m: int,
    n: int,
    base_facts: Iterable[tuple[int, int]],
    *,
    exhaustive_cells: int = DEFAULT_EXHAUSTIVE_CELLS,
) -> Certificate:
    """Certificate that every valid subset of every instance (m', n') with
    m' <= m and n' <= n is reachable in its extremal automaton.

    base_facts are instances verified by bfs_reach (orientation-free).
    Raises CertificationGapError with the unjustified subsets if the
    reduction lemmas do not suffice.
    """
    facts = {tuple(f) for f in base_facts}
    facts |= {(b, a) for a, b in facts}
    gaps: list[str] = []
    entries: list[InstanceEntry] = []
    for mi in range(1, m + 1):
        for ni in range(1, n + 1):
            if (mi, ni) in facts:
                entries.append(InstanceEntry(mi, ni, STRATEGY_BASE, {}))
            elif mi * ni <= exhaustive_cells:
                entries.append(_exhaustive_entry(mi, ni, gaps))
            elif ni > sperner_limit(mi):
                entries.append(InstanceEntry(mi, ni, STRATEGY_SPERNER, {"axis": "column"}))
            elif mi > sperner_limit(ni):
                entries.append(InstanceEntry(mi, ni, STRATEGY_SPERNER, {"axis": "row"}))
            else:
                entries.append(_family_entry(mi, ni, gaps))
    if gaps:
        raise CertificationGapError(gaps)
    return Certificate(m, n, tuple(sorted(facts)), entries)


# -- certificate verification ------------------------------------------------


def _replay_justification(
    cert: Certificate, entry: InstanceEntry, enc: int, j: dict,
    failures: list[str],
) -> list[tuple[int, int]]:
    """Replay one justification; returns intra-instance predecessor edges."""
    mi, ni = entry.m, entry.n
    S = ProductSubset(mi, ni, enc)
    where = f"({mi},{ni}) subset {enc}"
    kind = j.get("kind")
    if kind == "INITIAL":
        if S.bits != 1:
            failures.append(f"{where}: INITIAL claimed but not {{(1,1)}}")
        return []
    if kind == "SHRINK":
        axis, index = j["axis"], j["index"]
        empty = S.column(index) if axis == "column" else S.row(index)
        if empty:
            failures.append(f"{where}: SHRINK {axis} {index} is not empty")
            return []
        sub = _shrink(S, axis, index)
        if (sub.m, sub.n, sub.bits) != (j["sub_m"], j["sub_n"], j["sub_encoding"]):
            failures.append(f"{where}: SHRINK sub-instance mismatch")
            return []
        _require_justified(cert, sub.m, sub.n, sub.bits, where, failures)
        return []
    if kind in ("CONTAINMENT", "PERMUTATION", "BFS_EDGE"):
        pred = ProductSubset(mi, ni, j["pred"])
        letter = ExtremalLetter.from_dict(j["letter"])
        if extremal_step(pred, letter) != S:
            failures.append(f"{where}: {kind} edge does not replay")
            return []
        if kind != "BFS_EDGE" and len(pred) >= len(S):
            failures.append(f"{where}: {kind} predecessor is not smaller")
            return []
        if not is_valid(pred):
            failures.append(f"{where}: {kind} predecessor is invalid")
            return []
        _require_justified(cert, mi, ni, pred.bits, where, failures)
        return [(j["pred"], enc)]
    if kind == "SINGLE_ELEMENT":
        letter = ExtremalLetter.from_dict(j["letter"])
        probe = ProductSubset.from_pairs(mi, ni, [(1, 1)])
        for _ in range(j["prefix_power"]):
            probe = extremal_step(probe, letter)
        if probe.bits != j["anchor"]:
            failures.append(f"{where}: SINGLE_ELEMENT anchor does not replay")
            return []
        p, q = j["p"], j["q"]
        if S.row(p) != frozenset([q]) or S.column(q) != frozenset([p]):
            failures.append(f"{where}: SINGLE_ELEMENT cell ({p},{q}) not alone")
            return []
        sub = _renumber_drop(S, p, q)
        if sub.bits != j["sub_encoding"]:
            failures.append(f"{where}: SINGLE_ELEMENT sub-instance mismatch")
            return []
        _require_justified(cert, sub.m, sub.n, sub.bits, where, failures)
        return []
    failures.append(f"{where}: unknown justification kind {kind!r}")
    return []


def _require_justified(
    cert: Certificate, mi: int, ni: int, enc: int, where: str,
    failures: list[str],
) -> None:
    entry = cert.entry(mi, ni)
    if entry is None:
        failures.append(f"{where}: refers to missing instance ({mi},{ni})")
        return
    if entry.strategy == STRATEGY_EXHAUSTIVE:
        if str(enc) not in entry.data["justifications"]:
            failures.append(
                f"{where}: referenced subset {enc} of ({mi},{ni}) is unjustified"
            )
    # BASE / SPERNER / FAMILY entries cover every valid subset of their
    # instance; validity of the referenced subset is checked by the caller.


def _verify_exhaustive(
    cert: Certificate, entry: InstanceEntry, failures: list[str]
) -> None:
    table = entry.data["justifications"]
    mi, ni = entry.m, entry.n
    for enc in _iter_valid_encodings(mi, ni):
        if str(enc) not in table:
            failures.append(f"({mi},{ni}): valid subset {enc} has no justification")
    edges: dict[int, list[int]] = {}
    for key, j in table.items():
        enc = int(key)
        if not is_valid(ProductSubset(mi, ni, enc)):
            failures.append(f"({mi},{ni}): table lists invalid subset {enc}")
            continue
        for pred, succ in _replay_justification(cert, entry, enc, j, failures):
            edges.setdefault(succ, []).append(pred)
    # acyclicity of intra-instance predecessor chains (BFS_EDGE may violate
    # the size ordering, so check explicitly)
    state: dict[int, int] = {}  # 1 in progress, 2 done
    for start in list(edges):
        if state.get(start):
            continue
        stack = [(start, iter(edges.get(start, ())))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for pred in it:
                if state.get(pred) == 1:
                    failures.append(f"({mi},{ni}): justification cycle at {pred}")
                elif not state.get(pred):
                    state[pred] = 1
                    stack.append((pred, iter(edges.get(pred, ()))))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()


def _verify_family(
    cert: Certificate, entry: InstanceEntry, failures: list[str]
) -> None:
    mi, ni = entry.m, entry.n
    stored = {
        frozenset(frozenset(c) for c in fam["columns"]): Transformation(tuple(fam["phi"]))
        for fam in entry.data["families"]
    }
    members = _family_candidates(mi)
    for combo in combinations(members, ni):
        if len(set().union(*combo)) != mi:
            continue
        for first in range(ni):
            S = _representative_subset(combo, first, mi)
            if not is_valid(S):
                continue
            if reduce_containment(S) is not None:
                continue
            if reduce_single_element(S) is not None:
                continue
            phi = stored.get(frozenset(combo))
            if phi is None:
                failures.append(
                    f"({mi},{ni}): family {sorted(sorted(c) for c in combo)} "
                    f"needs a permutation witness but none is stored"
                )
                break
            if reduce_permutation(S, phi) is None:
                failures.append(
                    f"({mi},{ni}): stored phi does not reduce representative "
                    f"{S.bits}"
                )


def verify_certificate(
    c: Certificate, failures: list[str] | None = None
) -> bool:
    """Replay every certificate edge; True iff all of them replay.

    Pass a list to collect human-readable failure descriptions.
    """
    if failures is None:
        failures = []
    seen = set()
    for entry in c.entries:
        seen.add((entry.m, entry.n))
    for mi in range(1, c.m + 1):
        for ni in range(1, c.n + 1):
            if (mi, ni) not in seen:
                failures.append(f"missing instance entry ({mi},{ni})")
    facts = set(c.base_facts)
    for entry in c.entries:
        mi, ni = entry.m, entry.n
        if entry.strategy == STRATEGY_BASE:
            if (mi, ni) not in facts and (ni, mi) not in facts:
                failures.append(f"({mi},{ni}): BASE entry without a base fact")
        elif entry.strategy == STRATEGY_SPERNER:
            axis = entry.data.get("axis")
            if axis == "column":
                if ni <= sperner_limit(mi):
                    failures.append(
                        f"({mi},{ni}): Sperner rule needs n > C(m, floor(m/2))"
                    )
            elif axis == "row":
                if mi <= sperner_limit(ni):
                    failures.append(
                        f"({mi},{ni}): Sperner rule needs m > C(n, floor(n/2))"
                    )
            else:
                failures.append(f"({mi},{ni}): Sperner rule with unknown axis")
        elif entry.strategy == STRATEGY_EXHAUSTIVE:
            _verify_exhaustive(c, entry, failures)
        elif entry.strategy == STRATEGY_FAMILY:
            _verify_family(c, entry, failures)
        else:
            failures.append(f"({mi},{ni}): unknown strategy {entry.strategy!r}")
    return not failures


# -- direct-smaller property -------------------------------------------------


@dataclass(frozen=True)
class DirectSmallerReport:
    m: int
    n: int
    checked: int
    exceptions: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.exceptions


def _distinct_row_maps(T: ProductSubset) -> set[int]:
    """All values of {row-transformed T} over every s in T_m."""
    m, n = T.m, T.n
    rows = [(p, T.bits >> (p - 1) * n & ((1 << n) - 1)) for p in range(1, m + 1)]
    rows = [(p, r) for p, r in rows if r]
    out: set[int] = set()
    for images in product(range(1, m + 1), repeat=len(rows)):
        bits = 0
        for (p, r), img in zip(rows, images):
            bits |= r << (img - 1) * n
        out.add(bits)
    return out


def _distinct_col_maps(T: ProductSubset) -> set[int]:
    m, n = T.m, T.n
    colmask = col1_mask(m, n)
    cols = [(q, T.bits & (colmask << (q - 1))) for q in range(1, n + 1)]
    cols = [(q, c) for q, c in cols if c]
    out: set[int] = set()
    for images in product(range(1, n + 1), repeat=len(cols)):
        bits = 0
        for (q, c), img in zip(cols, images):
            shift = img - q
            bits |= c << shift if shift >= 0 else c >> -shift
        out.add(bits)
    return out


def direct_smaller_check(m: int, n: int) -> DirectSmallerReport:
    """Verify that every valid subset of size >= 3 is one extremal-letter
    step away from some strictly smaller valid subset."""
    if m * n > 16:
        raise GridSizeError(
            f"direct_smaller_check enumerates pairs; {m}x{n} exceeds 16 cells"
        )
    covered: set[int] = set()
    for enc in _iter_valid_encodings(m, n):
        T = ProductSubset(m, n, enc)
        size = len(T)
        for R in _distinct_row_maps(T):
            for C in _distinct_col_maps(T):
                succ = R | C
                if succ.bit_count() > size:
                    covered.add(succ)
    checked = 0
    exceptions = []
    for enc in _iter_valid_encodings(m, n):
        if enc.bit_count() < 3:
            continue
        checked += 1
        if enc not in covered:
            exceptions.append(enc)
    return DirectSmallerReport(m, n, checked, tuple(exceptions))


# -- alphabet sufficiency ----------------------------------------------------


def alphabet_sufficiency(
    m: int, n: int, letters: Sequence[ExtremalLetter]
) -> bool:
    """Whether BFS over just these letters reaches every valid subset."""
    report = bfs_reach(m, n, list(letters))
    return report.complete


def greedy_alphabet(m: int, n: int) -> list[ExtremalLetter]:
    """Grow a letter list, each step adding the letter that discovers the
    most new subsets from the current closure (ties to the first letter in
    lexicographic order). No minimality claim."""
    if m * n > ENUM_GUARD_CELLS:
        raise GridSizeError("greedy_alphabet exceeds the enumeration guard")
    bound = bound_f(m, n)
    masks = _col_masks(m, n)
    total = 1 << (m * n)
    letters: list[ExtremalLetter] = []
    in_closure = np.zeros(total, dtype=bool)
    in_closure[1] = True

    def closure(current: np.ndarray, letter_list) -> np.ndarray:
        reach = current.copy()
        frontier = np.flatnonzero(reach).astype(np.uint64)
        while frontier.size:
            succ = _successor_bitmap(frontier, m, n, letter_list)
            new = succ & ~reach
            reach |= new
            frontier = np.flatnonzero(new).astype(np.uint64)
        return reach

    while int(in_closure.sum()) < bound:
        closure_states = np.flatnonzero(in_closure).astype(np.uint64)
        best_gain = 0
        best_letter = None
        for a in iter_full_alphabet(m, n):
            R = _row_map(closure_states, a.s.images, m, n)
            C = _col_map(closure_states, a.t.images, m, n, masks)
            succ = R | C
            gain = int(np.unique(succ[~in_closure[succ]]).size)
            if gain > best_gain:
                best_gain = gain
                best_letter = a
        if best_letter is None:
            raise RuntimeError(
                f"greedy alphabet stalled at {int(in_closure.sum())} of {bound}"
            )
        letters.append(best_letter)
        in_closure = closure(in_closure, letters)
    return letters
