"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s`.  The full 28-level census
(criterion 2) is opt-in: set MWQ_FULL_CENSUS=1 (it needs a few minutes and
a few hundred MB).
"""

import json
import os
import random
import resource
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from mwquartic import bitangents, classifier, cli, dihedral, lattice, matroid

from conftest import FOUR_CIRCUIT

EXPECTED_N_R = [1, 1, 1, 2, 2, 4, 6, 11, 19, 37, 52, 80, 95, 102, 100, 90,
                70, 54, 37, 23, 16, 10, 5, 3, 2, 1, 1, 1]

FAST_SUITE_SECONDS = 120.0
FULL_SUITE_SECONDS = 3600.0
FULL_SUITE_MAX_RSS_BYTES = 4 * 1024**3


def _verdict(criterion, ok):
    print(f"\n[acceptance] criterion {criterion}: {'PASS' if ok else 'FAIL'}",
          file=sys.stderr)


def _classify_json(tmp_path, name, *extra):
    out = tmp_path / name
    code = cli.main(["classify", "--max-r", "10", "--field", "q",
                     "--out", str(out), *extra])
    assert code == 0
    return out


def test_criterion_1_census_fast_suite(tmp_path):
    ok = False
    try:
        start = time.perf_counter()
        out = _classify_json(tmp_path, "fast.json")
        elapsed = time.perf_counter() - start
        doc = json.loads(out.read_text())
        got = [doc["n_r"][str(r)] for r in range(1, 11)]
        assert got == EXPECTED_N_R[:10], got
        assert elapsed < FAST_SUITE_SECONDS, f"census took {elapsed:.1f}s"
        ok = True
    finally:
        _verdict(1, ok)


@pytest.mark.skipif(os.environ.get("MWQ_FULL_CENSUS") != "1",
                    reason="full census is opt-in: set MWQ_FULL_CENSUS=1")
def test_criterion_2_census_full_suite(tmp_path):
    ok = False
    try:
        out = tmp_path / "full.json"
        start = time.perf_counter()
        code = cli.main(["classify", "--max-r", "28", "--field", "q",
                         "--force-full", "--threads", "2", "--out", str(out)])
        elapsed = time.perf_counter() - start
        assert code == 0
        doc = json.loads(out.read_text())
        got = [doc["n_r"][str(r)] for r in range(1, 29)]
        assert got == EXPECTED_N_R, got
        assert elapsed < FULL_SUITE_SECONDS, f"full census took {elapsed:.0f}s"
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
        assert peak < FULL_SUITE_MAX_RSS_BYTES, f"peak rss {peak/2**30:.2f} GiB"
        ok = True
    finally:
        _verdict(2, ok)


def test_criterion_3_thread_determinism(tmp_path):
    ok = False
    try:
        one = _classify_json(tmp_path, "threads1.json", "--threads", "1")
        four = _classify_json(tmp_path, "threads4.json", "--threads", "4")
        assert one.read_bytes() == four.read_bytes()
        ok = True
    finally:
        _verdict(3, ok)


def test_criterion_4_lattice_invariants():
    ok = False
    try:
        reps = lattice.representatives()
        assert len(reps) == 28
        for v in reps:
            assert lattice.height_pairing(v, v) == Fraction(3, 2)
            assert sum(v.coords) == 0
        cross = {
            lattice.height_pairing(reps[i], reps[j])
            for i in range(28)
            for j in range(28)
            if i != j
        }
        assert cross == {Fraction(1, 2), Fraction(-1, 2)}
        from mwquartic.exactmath import rank_q

        assert rank_q([v.coords for v in reps]) == 7
        rows = [lattice.representative(i).coords for i in FOUR_CIRCUIT]
        assert [sum(col) for col in zip(*rows)] == [0] * 8
        m = matroid.full_ground_matroid()
        assert m.circuits(FOUR_CIRCUIT) == [frozenset(FOUR_CIRCUIT)]
        ok = True
    finally:
        _verdict(4, ok)


def test_criterion_5_matroid_axioms_ten_thousand_samples():
    ok = False
    try:
        m = matroid.full_ground_matroid()
        rng = random.Random(20240817)
        hereditary_checks = augmentation_checks = 0
        violations = 0
        while hereditary_checks + augmentation_checks < 10_000:
            # hereditary: subset of an independent set stays independent
            big = tuple(sorted(rng.sample(range(1, 29), rng.randint(1, 7))))
            if m.is_independent(big):
                take = rng.randint(0, len(big))
                sub = tuple(sorted(rng.sample(big, take)))
                hereditary_checks += 1
                if not m.is_independent(sub):
                    violations += 1
            # augmentation: a smaller independent set extends from a larger one
            i1 = tuple(sorted(rng.sample(range(1, 29), rng.randint(0, 6))))
            i2 = tuple(sorted(rng.sample(range(1, 29), rng.randint(1, 7))))
            if (
                m.is_independent(i1)
                and m.is_independent(i2)
                and len(i1) < len(i2)
            ):
                augmentation_checks += 1
                if not any(
                    m.is_independent(tuple(sorted(set(i1) | {x})))
                    for x in set(i2) - set(i1)
                ):
                    violations += 1
        assert violations == 0
        assert hereditary_checks + augmentation_checks >= 10_000
        # circuit minimality recheck
        rechecked = 0
        for _ in range(30):
            subset = tuple(sorted(rng.sample(range(1, 29), rng.randint(4, 9))))
            for circuit in m.circuits(subset):
                c = tuple(sorted(circuit))
                assert not m.is_independent(c)
                for j in range(len(c)):
                    assert m.is_independent(c[:j] + c[j + 1 :])
                rechecked += 1
        assert rechecked > 0
        ok = True
    finally:
        _verdict(5, ok)


def test_criterion_6_signature_vs_matroid_oracle_small_r():
    ok = False
    try:
        tables = list(classifier.iter_levels(5))
        for table in tables:
            r = table.level
            iso = matroid.iso_class_ids(r)
            sig = table.ids
            iso_to_sig = {}
            sig_to_iso = {}
            for t in range(comb(28, r)):
                i, s = iso[t], int(sig[t])
                # equal matroid structure must imply equal signature
                assert iso_to_sig.setdefault(i, s) == s
                # observed at r <= 5: the oracle never separates a signature class
                assert sig_to_iso.setdefault(s, i) == i
            assert table.n <= len(set(iso))
            if r == 4:
                assert table.n == 2 and len(set(iso)) == 2
        ok = True
    finally:
        _verdict(6, ok)


def test_criterion_7_dihedral_criteria():
    ok = False
    try:
        from mwquartic.exactmath import primes_upto

        odd_primes = [p for p in primes_upto(100) if p != 2]
        assert dihedral.cover_primes(FOUR_CIRCUIT, 100) == odd_primes
        for p in odd_primes:
            assert dihedral.dcover_exists(dihedral.CoverQuery(FOUR_CIRCUIT, p))
        fixed = (1, 2, 3)
        drops = lattice.rank_drop_primes(fixed)
        assert set(dihedral.cover_primes(fixed, 100)) <= drops
        with pytest.raises(ValueError):
            dihedral.CoverQuery(FOUR_CIRCUIT, 2)
        assert cli.main(["dihedral", "--subset", "1,2", "--p", "2"]) == 2
        ok = True
    finally:
        _verdict(7, ok)


def test_criterion_8_bitangents_three_samples():
    ok = False
    try:
        rng = random.Random(0xA57)
        for trial in range(3):
            inp, report = bitangents.sample_aronhold(rng)
            sol = bitangents.solve_riemann(inp)
            residuals = bitangents.riemann_residuals(inp, sol.k, sol.u)
            assert all(res == (0, 0, 0) for res in residuals)  # literal zero
            assert len(report.lines) == 28
            keys = {l.form.primitive_key() for l in report.lines}
            assert len(keys) == 28
            assert all(
                l.classification == bitangents.TRUE_BITANGENT for l in report.lines
            )
            assert comb(28, 3) == 3276
            assert report.concurrent_triples == []
        ok = True
    finally:
        _verdict(8, ok)
