"""Inductive signature census over r-subsets of the 28 minimal-vector pairs.

Level r assigns to every r-subset a signature: an independence flag
together with the multiset of signature classes of its r maximal proper
subsets.  Distinct signatures per level are interned into dense ids, and
the number of classes per level is the census value n_r.

Storage is a flat id array per level indexed by colex rank, so only two
levels are ever resident.  Per-level work is chunked and numpy-vectorized;
the interning pass is sequential and canonical, which makes the resulting
tables bit-identical for any thread count.

Rank is only ever computed for r <= 7 (everything larger is dependent in a
rank-7 lattice).  Over Q the flag is computed mod a fixed prime larger
than any minor of the +/-1, +/-3 coordinate matrix, which is exact; over
F_p the flag uses lattice-basis coordinates mod p.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from pathlib import Path

import numpy as np

from . import exactmath, lattice
from .colex import child_rank_block, child_ranks, colex_rank, unrank_block
from .matroid import RATIONALS, _check_field

N = lattice.N_PAIRS
LATTICE_RANK = 7

# Hadamard: every minor of a basis-coordinate matrix of representatives is
# bounded by 15**3.5 < 13073 (squared row norms are at most 15), so rank
# mod this prime equals rank over Q.
RANK_Q_PRIME = 16381
assert RANK_Q_PRIME**2 > 15**7 and exactmath.is_odd_prime(RANK_Q_PRIME)

CHUNK = 1 << 18

CHECKPOINT_MAGIC = b"MWL1"


class CheckpointError(RuntimeError):
    """Raised when a checkpoint file fails its magic/length validation."""


@dataclass(frozen=True)
class Signature:
    """Independence flag plus sorted class ids of the maximal proper subsets."""

    flag: int
    children: tuple

    def counts(self, n_prev: int) -> tuple:
        """Multiplicity vector (m_1, .., m_{n_prev}) over previous-level classes."""
        out = [0] * n_prev
        for c in self.children:
            out[c] += 1
        return tuple(out)

    def key(self):
        return (self.flag, self.children)


@dataclass
class LevelTable:
    """Census level: class id of every r-subset, indexed by colex rank."""

    level: int
    field: object
    ids: np.ndarray              # uint16, length C(28, level)
    signatures: list             # canonical (flag, children) per class id

    @property
    def n(self) -> int:
        return len(self.signatures)

    def signature(self, class_id: int) -> Signature:
        flag, children = self.signatures[class_id]
        return Signature(flag, children)


def initial_table(field=RATIONALS) -> LevelTable:
    """Level 0: the empty subset, independent, in a single class."""
    _check_field(field)
    return LevelTable(0, field, np.zeros(1, dtype=np.uint16), [(1, ())])


def _flag_context(field):
    """(coordinate matrix mod p, p) used for vectorized rank flags.

    Always lattice-basis coordinates; entries end up in a dtype whose
    cross-multiplied updates 2*p*p cannot overflow.
    """
    p = RANK_Q_PRIME if field == RATIONALS else field
    dtype = np.int32 if 2 * p * p < 2**31 else np.int64
    coords = np.array(lattice.rep_basis_coords(), dtype=dtype)
    return coords % p, p


def _flags_block(members: np.ndarray, coords_mod: np.ndarray, p: int) -> np.ndarray:
    """Lockstep elimination mod p; True where a subset has full rank.

    One pivot per coordinate column, chosen among the not-yet-used rows of
    each matrix simultaneously; rows are never physically swapped.
    """
    a = coords_mod[members.astype(np.intp)]  # (n, r, w)
    n, r, w = a.shape
    used = np.zeros((n, r), dtype=bool)
    rank = np.zeros(n, dtype=np.int64)
    arange_n = np.arange(n)
    for col in range(w):
        colv = a[:, :, col]
        active = (colv != 0) & ~used
        has = active.any(axis=1)
        if not has.any():
            continue
        piv = active.argmax(axis=1)
        pivrow = np.take_along_axis(a, piv[:, None, None], axis=1)[:, 0, :]
        pivval = pivrow[:, col]
        elim = active
        elim[arange_n, piv] = False
        elim &= has[:, None]
        # cross-multiplied update; |values| < 2 p**2, within the dtype
        upd = (pivval[:, None, None] * a - colv[:, :, None] * pivrow[:, None, :]) % p
        np.copyto(a, upd, where=elim[:, :, None])
        used[arange_n, piv] |= has
        rank += has
    return rank == r


def _chunk_rows(lo, hi, r, prev_ids, flag_ctx):
    """Raw (flag, sorted child ids) rows for one chunk, deduplicated locally."""
    ranks = np.arange(lo, hi, dtype=np.int64)
    members = unrank_block(ranks, r)
    child_ids = prev_ids[child_rank_block(members)]
    child_ids.sort(axis=1)
    if flag_ctx is None:
        flags = np.zeros(len(ranks), dtype=np.uint16)
    else:
        coords_mod, p = flag_ctx
        flags = _flags_block(members, coords_mod, p).astype(np.uint16)
    rows = np.ascontiguousarray(np.concatenate([flags[:, None], child_ids], axis=1))
    void = rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()
    uniq_void, inverse = np.unique(void, return_inverse=True)
    uniq = uniq_void.view(np.uint16).reshape(len(uniq_void), rows.shape[1])
    return uniq, inverse.astype(np.int64)


def classify_level(prev: LevelTable, threads: int = 1) -> LevelTable:
    """Compute level r = prev.level + 1 from the previous level table."""
    r = prev.level + 1
    if r > N:
        raise ValueError("no level beyond 28")
    if len(prev.ids) != comb(N, prev.level):
        raise ValueError("inconsistent predecessor table (length mismatch)")
    total = comb(N, r)
    prev_ids = np.ascontiguousarray(prev.ids, dtype=np.uint16)
    flag_ctx = _flag_context(prev.field) if r <= LATTICE_RANK else None

    spans = [(lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]
    ids_prov = np.empty(total, dtype=np.uint16)
    prov_of_key = {}

    def work(span):
        return _chunk_rows(span[0], span[1], r, prev_ids, flag_ctx)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(work, spans)
            _merge_chunks(spans, results, ids_prov, prov_of_key)
    else:
        _merge_chunks(spans, map(work, spans), ids_prov, prov_of_key)

    # canonical interning: ascending (flag, children) order, independent of
    # chunking and scheduling
    decoded = []
    for key, prov in prov_of_key.items():
        vals = np.frombuffer(key, dtype=np.uint16)
        decoded.append(((int(vals[0]), tuple(int(x) for x in vals[1:])), prov))
    decoded.sort(key=lambda item: item[0])
    if len(decoded) > 0xFFFF:
        raise RuntimeError("more than 65535 signature classes at one level")
    remap = np.empty(len(decoded), dtype=np.uint16)
    for new_id, (_, prov) in enumerate(decoded):
        remap[prov] = new_id
    return LevelTable(r, prev.field, remap[ids_prov], [sig for sig, _ in decoded])


def _merge_chunks(spans, results, ids_prov, prov_of_key):
    # sequential and in chunk order, so provisional ids are reproducible
    for (lo, hi), (uniq, inverse) in zip(spans, results):
        local = np.empty(len(uniq), dtype=np.uint16)
        for k in range(len(uniq)):
            key = uniq[k].tobytes()
            prov = prov_of_key.get(key)
            if prov is None:
                prov = prov_of_key[key] = len(prov_of_key)
            local[k] = prov
        ids_prov[lo:hi] = local[inverse]


def signature_of(subset, prev: LevelTable) -> Signature:
    """Signature of one subset of size prev.level + 1, computed directly.

    Scalar reference path: the flag comes from a fraction-free (or mod-p)
    rank of basis coordinates, independent of the vectorized pipeline.
    """
    elems = sorted(int(e) for e in subset)
    r = len(elems)
    if r != prev.level + 1:
        raise ValueError("subset size must be prev.level + 1")
    if len(set(elems)) != r:
        raise ValueError("subset has repeated elements")
    zero_based = [e - 1 for e in elems]
    children = tuple(sorted(int(prev.ids[t]) for t in child_ranks(zero_based)))
    if r > LATTICE_RANK:
        flag = 0
    else:
        mat = lattice.subset_coord_matrix(elems)
        if prev.field == RATIONALS:
            flag = int(exactmath.rank_q(mat) == r)
        else:
            flag = int(exactmath.rank_fp(mat, prev.field) == r)
    return Signature(flag, children)


def class_id_of(subset, table: LevelTable) -> int:
    """Class id of a subset in a computed level table."""
    elems = sorted(int(e) - 1 for e in subset)
    if len(elems) != table.level:
        raise ValueError("subset size must equal the table level")
    return int(table.ids[colex_rank(elems)])


# ---------------------------------------------------------------------------
# checkpoints

_HEADER = struct.Struct("<4sih")  # magic, level, reserved
_COUNT = struct.Struct("<q")
_U32 = struct.Struct("<I")


def checkpoint_path(directory, field, level: int) -> Path:
    tag = "q" if field == RATIONALS else f"fp{field}"
    return Path(directory) / f"level_{level:02d}.{tag}.mwl"


def save_table(table: LevelTable, path) -> None:
    payload = bytearray()
    payload += CHECKPOINT_MAGIC
    payload += struct.pack("<i", table.level)
    payload += _COUNT.pack(len(table.ids))
    payload += np.ascontiguousarray(table.ids, dtype="<u4").tobytes()
    payload += _U32.pack(len(table.signatures))
    for flag, children in table.signatures:
        blob = bytes([flag]) + np.asarray(children, dtype="<u2").tobytes()
        payload += _U32.pack(len(blob)) + blob
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(bytes(payload))
    tmp.replace(path)


def load_table(path, field) -> LevelTable:
    raw = Path(path).read_bytes()
    off = 0

    def take(k):
        nonlocal off
        if off + k > len(raw):
            raise CheckpointError(f"truncated checkpoint: {path}")
        chunk = raw[off : off + k]
        off += k
        return chunk

    if take(4) != CHECKPOINT_MAGIC:
        raise CheckpointError(f"bad magic in checkpoint: {path}")
    (level,) = struct.unpack("<i", take(4))
    (count,) = _COUNT.unpack(take(8))
    if not 0 <= level <= N or count != comb(N, level):
        raise CheckpointError(f"bad level/count in checkpoint: {path}")
    ids = np.frombuffer(take(4 * count), dtype="<u4")
    (n_sigs,) = _U32.unpack(take(4))
    signatures = []
    for _ in range(n_sigs):
        (blob_len,) = _U32.unpack(take(4))
        blob = take(blob_len)
        if blob_len != 1 + 2 * level:
            raise CheckpointError(f"bad signature record length in {path}")
        flag = blob[0]
        children = tuple(int(x) for x in np.frombuffer(blob[1:], dtype="<u2"))
        signatures.append((flag, children))
    if off != len(raw):
        raise CheckpointError(f"trailing bytes in checkpoint: {path}")
    if n_sigs == 0 or ids.max(initial=0) >= n_sigs:
        raise CheckpointError(f"id out of range in checkpoint: {path}")
    return LevelTable(level, field, ids.astype(np.uint16), signatures)


# ---------------------------------------------------------------------------
# census drivers


def iter_levels(max_r: int, field=RATIONALS, checkpoint_dir=None, threads: int = 1,
                progress=None):
    """Yield LevelTable for r = 1 .. max_r, resuming from checkpoints if given."""
    if not 1 <= max_r <= N:
        raise ValueError("max_r must be in 1..28")
    _check_field(field)
    table = initial_table(field)
    for r in range(1, max_r + 1):
        path = checkpoint_path(checkpoint_dir, field, r) if checkpoint_dir else None
        if path is not None and path.exists():
            table = load_table(path, field)
            if table.level != r:
                raise CheckpointError(f"checkpoint {path} holds level {table.level}, not {r}")
        else:
            table = classify_level(table, threads=threads)
            if path is not None:
                save_table(table, path)
        if progress is not None:
            progress(table)
        yield table


def run_census(max_r: int, field=RATIONALS, checkpoint_dir=None, threads: int = 1,
               progress=None):
    """Census counts {r: n_r} for r = 1 .. max_r."""
    return {t.level: t.n for t in
            iter_levels(max_r, field, checkpoint_dir, threads, progress)}
