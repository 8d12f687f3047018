"""
Exact polytope primitives for dimensions 1 to 3.

Polytopes are stored by their extreme points only, lexicographically sorted.
Volumes and moment vectors come from a fan triangulation of the boundary
around the vertex centroid; bodies whose affine hull is lower dimensional
have zero n-dimensional volume and moment.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from .type_utils import ArrayLike, FloatArray, as_float_array, frozen
from .valuation_error import DomainError

logger = logging.getLogger(__name__)

SUPPORTED_DIMS = (1, 2, 3)
_RANK_TOL = 1e-10


def check_dim(dim: int) -> int:
    if dim not in SUPPORTED_DIMS:
        raise DomainError("dimension must be 1, 2 or 3", detail={"dim": dim})
    return dim


def affine_hull(points: ArrayLike) -> Tuple[FloatArray, FloatArray]:
    """
    Orthonormal description of the affine hull of a point cloud.

    Returns:
        ``(origin, basis)`` where ``basis`` has shape ``(k, n)`` and ``k`` is
        the dimension of the affine hull (0 for a single point).
    """
    pts = np.atleast_2d(as_float_array(points))
    origin = pts.mean(axis=0)
    centered = pts - origin
    scale = float(np.abs(centered).max(initial=0.0))
    if scale == 0.0:
        return origin, np.zeros((0, pts.shape[1]))
    _, sing, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(sing > _RANK_TOL * max(scale, 1.0) * math.sqrt(len(pts))))
    return origin, vt[:rank]


def extreme_indices(coords: FloatArray) -> np.ndarray:
    """Indices of the extreme points of a full-dimensional point cloud."""
    k = coords.shape[1]
    if k == 0:
        return np.array([0])
    if k == 1:
        return np.unique([int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))])
    return np.sort(ConvexHull(coords).vertices)


def canonicalize(points: ArrayLike) -> FloatArray:
    """
    Canonical vertex array of the convex hull of ``points``.

    Keeps extreme points only (as bit-exact rows of the input) in
    lexicographic order, so ``canonicalize(canonicalize(p))`` equals
    ``canonicalize(p)``.
    """
    pts = np.atleast_2d(as_float_array(points))
    if pts.size == 0:
        raise DomainError("a polytope needs at least one vertex")
    if not np.all(np.isfinite(pts)):
        raise DomainError("polytope vertices must be finite")
    unique = np.unique(pts, axis=0)
    if len(unique) == 1:
        return unique
    origin, basis = affine_hull(unique)
    coords = (unique - origin) @ basis.T
    return unique[extreme_indices(coords)]


class Polytope:
    """
    A convex body given as the convex hull of finitely many points.

    Degenerate bodies (affine hull of dimension below ``dim``) are allowed;
    they have zero volume and zero moment vector.
    """

    dim: int
    vertices: FloatArray
    affine_dim: int

    def __init__(self, vertices: ArrayLike, *, dim: Optional[int] = None) -> None:
        pts = np.atleast_2d(as_float_array(vertices))
        if dim is None:
            dim = pts.shape[1]
        check_dim(dim)
        if pts.shape[1] != dim:
            raise DomainError(
                "vertex length does not match dimension",
                detail={"dim": dim, "vertex_len": pts.shape[1]},
            )
        self.dim = dim
        self.vertices = frozen(canonicalize(pts))
        self._origin, self._basis = affine_hull(self.vertices)
        self.affine_dim = int(self._basis.shape[0])
        self._hull: Optional[ConvexHull] = None

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, vertices={self.vertices.tolist()})"

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def canonical(self) -> "Polytope":
        return Polytope(self.vertices, dim=self.dim)

    def _full_hull(self) -> ConvexHull:
        if self._hull is None:
            logger.debug("building hull of %d vertices", len(self.vertices))
            self._hull = ConvexHull(self.vertices)
        return self._hull

    def _fan(self) -> Tuple[FloatArray, FloatArray]:
        """Volumes and centroids of the simplices of the centroid fan."""
        center = self.vertices.mean(axis=0)
        facets = self.vertices[self._full_hull().simplices]
        edges = facets - center[None, None, :]
        volumes = np.abs(np.linalg.det(edges)) / math.factorial(self.dim)
        centroids = (facets.sum(axis=1) + center) / (self.dim + 1)
        return volumes, centroids

    def volume(self) -> float:
        """n-dimensional volume; 0 for degenerate bodies."""
        if not self.is_full_dimensional:
            return 0.0
        if self.dim == 1:
            return float(self.vertices[-1, 0] - self.vertices[0, 0])
        volumes, _ = self._fan()
        return float(volumes.sum())

    def moment_vector(self) -> FloatArray:
        """The moment vector, i.e. the integral of x over the body."""
        if not self.is_full_dimensional:
            return np.zeros(self.dim)
        if self.dim == 1:
            a, b = float(self.vertices[0, 0]), float(self.vertices[-1, 0])
            return np.array([(b * b - a * a) / 2.0])
        volumes, centroids = self._fan()
        return np.asarray(volumes @ centroids, dtype=np.float64)

    def centroid(self) -> FloatArray:
        vol = self.volume()
        if vol == 0.0:
            raise DomainError("centroid of a degenerate body is not defined")
        return self.moment_vector() / vol

    def bounding_box(self) -> Tuple[FloatArray, FloatArray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, points: ArrayLike, *, tol: float = 1e-12) -> np.ndarray:
        """Boolean mask of the points lying in the body (up to ``tol``)."""
        pts = np.atleast_2d(as_float_array(points))
        scale = max(1.0, float(np.abs(self.vertices).max()))
        shifted = pts - self._origin
        coords = shifted @ self._basis.T
        off_hull = shifted - coords @ self._basis
        inside = np.linalg.norm(off_hull, axis=1) <= tol * scale
        k = self.affine_dim
        if k == 0:
            return inside
        local = (self.vertices - self._origin) @ self._basis.T
        if k == 1:
            lo, hi = local[:, 0].min(), local[:, 0].max()
            return inside & (coords[:, 0] >= lo - tol * scale) & (coords[:, 0] <= hi + tol * scale)
        equations = ConvexHull(local).equations
        slack = coords @ equations[:, :-1].T + equations[:, -1]
        return inside & np.all(slack <= tol * scale, axis=1)

    def translate(self, offset: ArrayLike) -> "Polytope":
        return Polytope(self.vertices + as_float_array(offset), dim=self.dim)

    def scale(self, factor: float) -> "Polytope":
        return Polytope(self.vertices * factor, dim=self.dim)

    def rotate(self, matrix: ArrayLike) -> "Polytope":
        """Image under the linear map ``matrix`` (vertices as columns)."""
        return Polytope(self.vertices @ as_float_array(matrix).T, dim=self.dim)


def volume(body: Polytope) -> float:
    return body.volume()


def moment_vector(body: Polytope) -> FloatArray:
    return body.moment_vector()


def box(lower: ArrayLike, upper: ArrayLike) -> Polytope:
    """Axis-parallel box ``[lower, upper]`` as a polytope."""
    lo = as_float_array(lower).ravel()
    hi = as_float_array(upper).ravel()
    corners = np.array(np.meshgrid(*zip(lo, hi), indexing="ij")).reshape(len(lo), -1).T
    return Polytope(corners, dim=len(lo))
