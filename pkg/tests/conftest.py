import pytest

from wpml.lattice import validate_lattice, with_identity_modalities
from wpml.lframe import lframe_from_leq, validate_modal_lframe


def chain_leq(n):
    return [[1 if i <= j else 0 for j in range(n)] for i in range(n)]


@pytest.fixture
def chain2():
    return validate_lattice(chain_leq(2), 0, 1)


@pytest.fixture
def chain3():
    return validate_lattice(chain_leq(3), 0, 2)


B4_LEQ = [
    [1, 1, 1, 1],
    [0, 1, 0, 1],
    [0, 0, 1, 1],
    [0, 0, 0, 1],
]

# diamond M3: bottom, three incomparable atoms, top
M3_LEQ = [
    [1, 1, 1, 1, 1],
    [0, 1, 0, 0, 1],
    [0, 0, 1, 0, 1],
    [0, 0, 0, 1, 1],
    [0, 0, 0, 0, 1],
]


@pytest.fixture
def b4():
    return validate_lattice(B4_LEQ, 0, 3)


@pytest.fixture
def m3():
    return validate_lattice(M3_LEQ, 0, 4)


@pytest.fixture
def chain2_modal(chain2):
    return with_identity_modalities(chain2)


@pytest.fixture
def chain3_modal(chain3):
    return with_identity_modalities(chain3)


@pytest.fixture
def b4_modal(b4):
    return with_identity_modalities(b4)


@pytest.fixture
def m2_frame():
    """Diamond-order meet semilattice: 0 < a, b < 1 (ids 0,1,2,3; one=3)."""
    leq = [
        [1, 1, 1, 1],
        [0, 1, 0, 1],
        [0, 0, 1, 1],
        [0, 0, 0, 1],
    ]
    return lframe_from_leq(("0", "a", "b", "1"), leq, 3)


@pytest.fixture
def chain2_frame():
    return lframe_from_leq(("x", "1"), chain_leq(2), 1)


@pytest.fixture
def chain3_frame():
    return lframe_from_leq(("0", "m", "1"), chain_leq(3), 2)


def identity_modal(frame):
    out = validate_modal_lframe(frame, [(i, i) for i in range(frame.n)])
    assert not isinstance(out, tuple)
    return out
