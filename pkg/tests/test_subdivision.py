import numpy as np
import pytest
from numpy.testing import assert_allclose

from functional_valuations.subdivision import active_pieces, lower_faces, merge_coincident


def test_merge_coincident_keeps_larger_offset():
    slopes, offsets = merge_coincident(np.array([[1.0], [1.0], [0.0]]), np.array([0.0, 2.0, 1.0]))

    assert slopes.tolist() == [[0.0], [1.0]]
    assert offsets.tolist() == [1.0, 2.0]


def test_affine_lift_is_one_face():
    faces = lower_faces(np.array([[-1.0], [1.0]]), np.array([0.0, 0.0]))

    assert len(faces) == 1
    assert faces[0].members.tolist() == [0, 1]
    assert_allclose(faces[0].gradient, [0.0], atol=1e-12)
    assert faces[0].value == pytest.approx(0.0, abs=1e-12)


def test_collinear_middle_piece_is_not_a_vertex():
    faces = lower_faces(np.array([[-1.0], [0.0], [1.0]]), np.zeros(3))

    assert len(faces) == 1
    assert faces[0].members.tolist() == [0, 1, 2]
    assert faces[0].vertices.tolist() == [0, 2]
    assert active_pieces(faces).tolist() == [0, 2]


def test_inactive_piece_is_dropped():
    faces = lower_faces(np.array([[-1.0], [0.0], [1.0]]), np.array([0.0, -1.0, 0.0]))

    assert active_pieces(faces).tolist() == [0, 2]


def test_two_kinks():
    faces = lower_faces(np.array([[-1.0], [0.0], [1.0]]), np.array([0.0, 1.0, 0.0]))

    assert_allclose([face.gradient for face in faces], [[-1.0], [1.0]])
    assert_allclose([face.value for face in faces], [1.0, 1.0])
    assert [face.members.tolist() for face in faces] == [[0, 1], [1, 2]]


def test_planar_pyramid():
    # |x_1| + |x_2| has a single vertex at the origin.
    slopes = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]])
    faces = lower_faces(slopes, np.zeros(4))

    assert len(faces) == 1
    assert_allclose(faces[0].gradient, [0.0, 0.0], atol=1e-12)
    assert len(faces[0].vertices) == 4
