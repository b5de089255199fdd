import random
from itertools import combinations
from math import comb

import numpy as np
import pytest

from mwquartic import classifier, lattice
from mwquartic.classifier import (
    CheckpointError,
    LevelTable,
    Signature,
    checkpoint_path,
    class_id_of,
    classify_level,
    initial_table,
    iter_levels,
    load_table,
    run_census,
    save_table,
    signature_of,
)
from mwquartic.colex import colex_rank

from conftest import FOUR_CIRCUIT

EXPECTED_N_R_PREFIX = [1, 1, 1, 2, 2, 4, 6, 11, 19, 37]


def test_level_one_single_class(tables_r6):
    t1 = tables_r6[0]
    assert t1.level == 1
    assert t1.n == 1
    assert t1.signatures == [(1, (0,))]
    assert len(t1.ids) == 28 and set(t1.ids.tolist()) == {0}


def test_census_prefix_matches_expected():
    n = run_census(8)
    assert [n[r] for r in range(1, 9)] == EXPECTED_N_R_PREFIX[:8]


def test_fp_census_observed_values():
    # recorded observations for small mod-p censuses
    assert list(run_census(3, field=5).values()) == [1, 1, 1]
    assert list(run_census(4, field=3).values()) == [1, 1, 1, 2]


def test_signature_of_matches_tables(tables_r6, rng):
    prev = initial_table()
    for table in tables_r6:
        r = table.level
        for _ in range(25):
            subset = tuple(sorted(rng.sample(range(1, 29), r)))
            sig = signature_of(subset, prev)
            cid = class_id_of(subset, table)
            assert table.signatures[cid] == sig.key()
        prev = table


def test_signature_of_size_mismatch(tables_r6):
    with pytest.raises(ValueError):
        signature_of((1, 2, 3), tables_r6[0])


def test_independent_subsets_share_one_signature(tables_r6):
    # heredity: every child of an independent subset is independent, and all
    # independent subsets of a level land in the same class
    for table, prev in zip(tables_r6[1:], tables_r6):
        indep_prev = [cid for cid, (flag, _) in enumerate(prev.signatures) if flag == 1]
        if not indep_prev:
            continue
        (prev_ind,) = indep_prev
        for cid, (flag, children) in enumerate(table.signatures):
            if flag == 1:
                assert children == (prev_ind,) * table.level


def test_four_circuit_signature(tables_r6):
    t3, t4 = tables_r6[2], tables_r6[3]
    sig = signature_of(FOUR_CIRCUIT, t3)
    assert sig.flag == 0
    assert sig.children == (0, 0, 0, 0)
    assert sig.counts(t3.n) == (4,)
    # and the independent class is distinct
    ids = {class_id_of(s, t4) for s in ((1, 2, 3, 4), FOUR_CIRCUIT)}
    assert len(ids) == 2


def test_nine_subsets_always_dependent(rng):
    tables = list(iter_levels(9))
    t9 = tables[-1]
    assert all(flag == 0 for flag, _ in t9.signatures)


def test_collapsed_independent_token_gives_same_partition(tables_r6):
    # replacing the signature of every independent subset by a single token
    # must not change the class partition at any level <= 6
    for table in tables_r6[1:]:
        collapsed = {}
        for cid, (flag, children) in enumerate(table.signatures):
            collapsed[cid] = ("I",) if flag == 1 else ("D", children)
        assert len(set(collapsed.values())) == table.n


def test_vectorized_flags_agree_with_rank_oracle(tables_r6):
    # exhaustive at r = 4: flag from the table vs an independent Bareiss rank
    from mwquartic import exactmath

    t4 = tables_r6[3]
    for subset in combinations(range(1, 29), 4):
        flag, _ = t4.signatures[class_id_of(subset, t4)]
        mat = lattice.subset_coord_matrix(subset)
        assert flag == int(exactmath.rank_q(mat) == 4)


def test_determinism_across_thread_counts():
    t_single = initial_table()
    t_multi = initial_table()
    for _ in range(6):
        t_single = classify_level(t_single, threads=1)
        t_multi = classify_level(t_multi, threads=3)
        assert t_single.signatures == t_multi.signatures
        assert np.array_equal(t_single.ids, t_multi.ids)


def test_classify_level_rejects_bad_predecessor():
    bad = LevelTable(2, "Q", np.zeros(10, dtype=np.uint16), [(1, (0, 0))])
    with pytest.raises(ValueError):
        classify_level(bad)


def test_checkpoint_round_trip(tmp_path):
    tables = list(iter_levels(5, checkpoint_dir=tmp_path))
    for table in tables:
        path = checkpoint_path(tmp_path, "Q", table.level)
        assert path.exists()
        loaded = load_table(path, "Q")
        assert loaded.level == table.level
        assert loaded.signatures == table.signatures
        assert np.array_equal(loaded.ids, table.ids)


def test_checkpoint_resume_matches_fresh(tmp_path):
    run_census(4, checkpoint_dir=tmp_path)
    resumed = run_census(6, checkpoint_dir=tmp_path)
    fresh = run_census(6)
    assert resumed == fresh


def test_checkpoint_corruption_detected(tmp_path):
    list(iter_levels(3, checkpoint_dir=tmp_path))
    path = checkpoint_path(tmp_path, "Q", 3)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError):
        load_table(path, "Q")
    with pytest.raises(CheckpointError):
        run_census(3, checkpoint_dir=tmp_path)


def test_checkpoint_truncation_detected(tmp_path):
    list(iter_levels(2, checkpoint_dir=tmp_path))
    path = checkpoint_path(tmp_path, "Q", 2)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) // 2])
    with pytest.raises(CheckpointError):
        load_table(path, "Q")


def test_table_lengths():
    for table in iter_levels(5):
        assert len(table.ids) == comb(28, table.level)
        assert table.ids.max() == table.n - 1
        assert set(np.unique(table.ids).tolist()) == set(range(table.n))


def test_signature_counts_sum():
    tables = list(iter_levels(5))
    prev = tables[2]
    sig = signature_of((2, 5, 9, 20), prev)
    assert sum(sig.counts(prev.n)) == 4
