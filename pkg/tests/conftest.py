import random

import pytest

from mwquartic import bitangents, classifier, matroid


# the canonical 4-element circuit: representatives with -3 entries at
# positions {7,8}, {5,6}, {3,4}, {1,2} sum to the zero vector
FOUR_CIRCUIT = (1, 6, 15, 28)

# frozen regression input for the Riemann solve (not concurrency-general)
SAMPLE_ARONHOLD = ((1, 2, 3), (2, -1, 1), (-1, 1, -2))

# nondegenerate input whose 28 lines verify with zero concurrent triples
CLEAN_ARONHOLD = ((2, -5, -4), (4, -3, 3), (-5, -2, -5))

# independent over Q, rank drops exactly at p = 3
DROP3_SUBSET = (9, 13, 15, 16, 17, 19, 28)


@pytest.fixture(scope="session")
def full_matroid():
    return matroid.full_ground_matroid()


@pytest.fixture(scope="session")
def tables_r6():
    """Census tables for levels 1..6 over Q."""
    return list(classifier.iter_levels(6))


@pytest.fixture(scope="session")
def sample_solution():
    inp = bitangents.AronholdInput(SAMPLE_ARONHOLD)
    return inp, bitangents.solve_riemann(inp)


@pytest.fixture(scope="session")
def clean_report():
    inp = bitangents.AronholdInput(CLEAN_ARONHOLD)
    return inp, bitangents.reconstruct(inp)


@pytest.fixture()
def rng():
    return random.Random(0xE7)
