import numpy as np
import pytest

from oracles import sampled_signatures
from unitcover.arrangement import bits_to_members, candidate_witnesses, cell_bits, enumerate_cells, incidence_matrix
from unitcover.geometry import Disk, Point, points_in_disks


def disks(C):
    return [Disk(Point(*c), 1.0) for c in C]


def test_two_overlapping_disks():
    arr = enumerate_cells(disks([(0, 0), (1, 0)]))
    assert [c.members for c in arr.cells] == [(0,), (0, 1), (1,)]


def test_single_and_disjoint():
    assert [c.members for c in enumerate_cells(disks([(0, 0)])).cells] == [(0,)]
    arr = enumerate_cells(disks([(0, 0), (5, 0)]))
    assert [c.members for c in arr.cells] == [(0,), (1,)]


def test_tangent_disks_have_no_common_cell():
    arr = enumerate_cells(disks([(0, 0), (2, 0)]))
    assert [c.members for c in arr.cells] == [(0,), (1,)]


def test_three_disk_venn():
    arr = enumerate_cells(disks([(0, 0), (1, 0), (0.5, 0.8)]))
    assert len(arr.cells) == 7


def test_witnesses_are_strictly_inside_exactly_their_members():
    rng = np.random.default_rng(1)
    C = rng.random((10, 2)) * 3
    arr = enumerate_cells(disks(C))
    W = np.array([c.witness for c in arr.cells])
    M = points_in_disks(W, C, 1.0)
    for c, row in zip(arr.cells, M):
        assert tuple(np.flatnonzero(row)) == c.members


def test_duplicate_disk_rejected():
    with pytest.raises(ValueError, match="duplicate disk"):
        enumerate_cells(disks([(0, 0), (0, 0)]))


def test_incidence_matrix_shape():
    arr = enumerate_cells(disks([(0, 0), (1, 0)]))
    M = incidence_matrix(arr)
    assert M.shape == (3, 2)
    assert M.sum() == 4


def test_cell_bits_roundtrip():
    C = np.array([(0, 0), (1, 0), (0.5, 0.8)])
    bits, wit = cell_bits(C, 1.0)
    assert sorted(bits_to_members(bits, 3)) == sorted(c.members for c in enumerate_cells(disks(C)).cells)
    assert len(wit) == len(bits)


def test_delta_bounded_by_separation():
    C = np.array([(0, 0), (1e-4, 0)])
    _, delta = candidate_witnesses(C, np.ones(2))
    assert 0 < delta <= 1e-6


@pytest.mark.parametrize("seed", range(15))
def test_matches_sampling_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 9))
    C = rng.random((n, 2)) * rng.choice([1.0, 2.0, 4.0])
    got = {c.members for c in enumerate_cells(disks(C)).cells}
    assert got == sampled_signatures(C)
