"""
Regular subdivisions induced by lifting points to heights.

Given slopes ``a_i`` and offsets ``b_i`` of ``v(x) = max_i <a_i, x> + b_i``,
the lower convex hull of the lifted points ``(a_i, -b_i)`` is the graph of
``v*`` over ``conv{a_i}``. Each lower face projects to one cell of the
subdivision; the slope of the face is the primal point where the pieces of
the face are simultaneously active.
"""

import logging
from typing import List, Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .polytope import affine_hull, extreme_indices
from .type_utils import FloatArray

logger = logging.getLogger(__name__)

_NORMAL_TOL = 1e-12
_MATCH_TOL = 1e-9


class LowerFace:
    """
    One face of the lifted lower hull.

    Attributes:
        members: indices of every lifted point lying on the face
        vertices: indices of the members that are extreme points of the face
        gradient: primal point x_k solving the active-piece system
        value: v(x_k), the common value of the active pieces at x_k
    """

    members: np.ndarray
    vertices: np.ndarray
    gradient: FloatArray
    value: float

    def __init__(
        self,
        *,
        members: np.ndarray,
        vertices: np.ndarray,
        gradient: FloatArray,
        value: float,
    ) -> None:
        self.members = members
        self.vertices = vertices
        self.gradient = gradient
        self.value = value


def merge_coincident(
    slopes: FloatArray, offsets: FloatArray, *, tol: float = 1e-12
) -> Tuple[FloatArray, FloatArray]:
    """
    Merge pieces with (numerically) equal slopes, keeping the larger offset.

    Returns the surviving pieces in lexicographic slope order.
    """
    order = np.lexsort(slopes.T[::-1])
    slopes, offsets = slopes[order], offsets[order]
    scale = 1.0 + float(np.abs(slopes).max(initial=0.0))
    kept_slopes: List[FloatArray] = []
    kept_offsets: List[float] = []
    for a, b in zip(slopes, offsets):
        if kept_slopes and np.max(np.abs(kept_slopes[-1] - a)) <= tol * scale:
            kept_offsets[-1] = max(kept_offsets[-1], float(b))
            continue
        kept_slopes.append(a)
        kept_offsets.append(float(b))
    return np.array(kept_slopes), np.array(kept_offsets)


def _solve_active(slopes: FloatArray, heights: FloatArray) -> Tuple[FloatArray, float]:
    """Solve <a_i, x> - s = -b_i over the members of a face (least squares)."""
    system = np.hstack([slopes, -np.ones((len(slopes), 1))])
    solution, *_ = np.linalg.lstsq(system, heights, rcond=None)
    return solution[:-1], float(solution[-1])


def _make_face(members: np.ndarray, slopes: FloatArray, heights: FloatArray) -> LowerFace:
    local = slopes[members]
    origin, basis = affine_hull(local)
    extreme = members[extreme_indices((local - origin) @ basis.T)] if len(members) > 1 else members
    gradient, value = _solve_active(local, heights[members])
    return LowerFace(
        members=members,
        vertices=np.sort(extreme),
        gradient=gradient,
        value=value,
    )


def lower_faces(slopes: FloatArray, offsets: FloatArray) -> List[LowerFace]:
    """
    Faces of the lower hull of the lifted points ``(a_i, -b_i)``.

    Slopes must be pairwise distinct (see ``merge_coincident``). Lifts that
    are affine over the slopes give a single face covering ``conv{a_i}``.
    Faces are returned ordered lexicographically by gradient.
    """
    heights = -offsets
    count = len(slopes)
    everything = np.arange(count)
    origin, basis = affine_hull(slopes)
    k = basis.shape[0]
    if count == 1 or k == 0:
        return [_make_face(everything, slopes, heights)]

    coords = (slopes - origin) @ basis.T
    lifted = np.hstack([coords, heights[:, None]])
    _, lifted_basis = affine_hull(lifted)
    if lifted_basis.shape[0] == k:
        return [_make_face(everything, slopes, heights)]

    try:
        hull = ConvexHull(lifted)
    except QhullError:
        logger.warning(
            "lifted hull of %d points is numerically flat; using a single cell", count
        )
        return [_make_face(everything, slopes, heights)]

    height_scale = 1.0 + float(np.abs(heights).max()) + float(np.abs(coords).max())
    planes: List[Tuple[FloatArray, float]] = []
    for equation in hull.equations:
        normal, vertical, shift = equation[:k], equation[k], equation[k + 1]
        if vertical >= -_NORMAL_TOL:
            continue
        w = -normal / vertical
        c = -shift / vertical
        w_scale = 1.0 + float(np.abs(w).max())
        if any(np.max(np.abs(w - seen)) <= _MATCH_TOL * w_scale for seen, _ in planes):
            continue
        planes.append((w, c))

    faces = []
    for w, c in planes:
        gap = np.abs(heights - coords @ w - c)
        members = everything[gap <= _MATCH_TOL * height_scale * (1.0 + float(np.abs(w).max()))]
        if len(members) == 0:  # pragma: no cover
            continue
        faces.append(_make_face(members, slopes, heights))
    logger.debug("lifted %d points into %d lower faces", count, len(faces))
    faces.sort(key=lambda face: tuple(face.gradient.tolist()))
    return faces


def active_pieces(faces: List[LowerFace]) -> np.ndarray:
    """Indices of the pieces active on an open set: the vertices of some face."""
    return np.unique(np.concatenate([face.vertices for face in faces]))
