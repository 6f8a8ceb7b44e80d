"""Curved high-order quadrilateral meshes.

Element geometry is an isoparametric Lagrange interpolant of degree ``g`` on
Gauss-Lobatto nodes, stored as ``nodes[e, a, b] = (x, y)`` with ``a`` along the
reference xi direction and ``b`` along eta. Local faces are numbered

    0: xi = -1,   1: xi = +1,   2: eta = -1,   3: eta = +1

and the points on a face are ordered by increasing tangential coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .basis import (
    Basis1D,
    gauss_lobatto,
    lagrange_derivative_matrix,
    lagrange_matrix,
)

WALL = "WALL"
FARFIELD = "FARFIELD"
TAGS = (WALL, FARFIELD)

MESH_FORMAT = "eikdg-mesh"
MESH_VERSION = 1

# corner (a, b) index pairs of each local face, in tangential order
_FACE_CORNERS = {0: ((0, 0), (0, 1)), 1: ((1, 0), (1, 1)), 2: ((0, 0), (1, 0)), 3: ((0, 1), (1, 1))}


class GeometryError(ValueError):
    pass


class InvertedElementError(GeometryError):
    def __init__(self, element: int, detail: str = ""):
        self.element = element
        super().__init__(f"element {element} is inverted or degenerate (J <= 0){detail}")


@dataclass
class CurvedMesh:
    """High-order quad mesh with face connectivity and boundary tags.

    ``interior_faces`` rows are ``(e, f, e2, f2, orientation)``; orientation 1
    means face points run in opposite directions on the two sides.
    ``boundary_faces`` rows are ``(e, f)`` with matching ``boundary_tags``.
    """

    nodes: np.ndarray
    interior_faces: np.ndarray
    boundary_faces: np.ndarray
    boundary_tags: np.ndarray
    name: str = "mesh"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes.ndim != 4 or self.nodes.shape[1] != self.nodes.shape[2] or self.nodes.shape[3] != 2:
            raise GeometryError(f"nodes must have shape (E, g+1, g+1, 2), got {self.nodes.shape}")
        self.interior_faces = np.asarray(self.interior_faces, dtype=np.int64).reshape(-1, 5)
        self.boundary_faces = np.asarray(self.boundary_faces, dtype=np.int64).reshape(-1, 2)
        self.boundary_tags = np.asarray(self.boundary_tags, dtype=object).reshape(-1)
        if len(self.boundary_tags) != len(self.boundary_faces):
            raise GeometryError("one tag per boundary face required")
        bad = [t for t in self.boundary_tags if t not in TAGS]
        if bad:
            raise GeometryError(f"unknown boundary tag {bad[0]!r}")
        self._check_faces()

    @property
    def n_elements(self) -> int:
        return self.nodes.shape[0]

    @property
    def geometry_order(self) -> int:
        return self.nodes.shape[1] - 1

    def faces_with_tag(self, tag: str) -> np.ndarray:
        return self.boundary_faces[self.boundary_tags == tag]

    def _check_faces(self):
        seen = np.zeros((self.n_elements, 4), dtype=int)
        for e, f, e2, f2, _ in self.interior_faces:
            seen[e, f] += 1
            seen[e2, f2] += 1
        for e, f in self.boundary_faces:
            seen[e, f] += 1
        if not np.all(seen == 1):
            e, f = np.argwhere(seen != 1)[0]
            raise GeometryError(f"face {f} of element {e} is referenced {seen[e, f]} times")

    def face_nodes(self, e: int, f: int) -> np.ndarray:
        """Geometry nodes of one face, in tangential order, shape (g+1, 2)."""
        X = self.nodes[e]
        return {0: X[0, :], 1: X[-1, :], 2: X[:, 0], 3: X[:, -1]}[f]

    def watertight_error(self) -> float:
        err = 0.0
        for e, f, e2, f2, o in self.interior_faces:
            a = self.face_nodes(e, f)
            b = self.face_nodes(e2, f2)
            if o:
                b = b[::-1]
            err = max(err, float(np.max(np.abs(a - b))))
        return err

    def wall_samples(self, per_face: int) -> np.ndarray:
        """Points sampled uniformly in the reference coordinate along WALL faces."""
        if per_face < 2:
            raise ValueError("per_face must be >= 2")
        gll, _ = gauss_lobatto(self.geometry_order + 1)
        t = np.linspace(-1.0, 1.0, per_face)
        L = lagrange_matrix(gll, t)
        out = [L @ self.face_nodes(e, f) for e, f in self.faces_with_tag(WALL)]
        if not out:
            return np.zeros((0, 2))
        return np.concatenate(out)


def connect(nodes: np.ndarray, corner_ids: np.ndarray, tag_of, name: str = "mesh", info=None) -> CurvedMesh:
    """Build a mesh by matching faces through shared corner vertex ids.

    ``corner_ids[e]`` is a (2, 2) array of global vertex ids indexed like the
    geometry corners. ``tag_of(e, f)`` returns the tag of an unmatched face.
    """
    corner_ids = np.asarray(corner_ids).reshape(-1, 2, 2)
    open_faces: dict[tuple, tuple] = {}
    interior = []
    for e in range(len(corner_ids)):
        for f, (c0, c1) in _FACE_CORNERS.items():
            a, b = int(corner_ids[e][c0]), int(corner_ids[e][c1])
            key = (min(a, b), max(a, b))
            if key in open_faces:
                e1, f1, a1, _ = open_faces.pop(key)
                orient = 0 if a1 == a else 1
                if a == b:
                    raise GeometryError("degenerate face with coincident corners")
                interior.append((e1, f1, e, f, orient))
            else:
                open_faces[key] = (e, f, a, b)
    boundary, tags = [], []
    for e, f, _, _ in sorted(open_faces.values()):
        boundary.append((e, f))
        tags.append(tag_of(e, f))
    interior.sort()
    return CurvedMesh(nodes, np.array(interior, dtype=np.int64).reshape(-1, 5),
                      np.array(boundary, dtype=np.int64).reshape(-1, 2), np.array(tags, dtype=object),
                      name=name, info=dict(info or {}))


def _gll(g: int) -> np.ndarray:
    if g < 1:
        raise GeometryError(f"geometry order must be >= 1, got {g}")
    return gauss_lobatto(g + 1)[0]


def _structured_ids(n0: int, n1: int, periodic1: bool = False) -> np.ndarray:
    """Corner ids for an n0 x n1 structured block; element index = i * n1 + j."""
    m1 = n1 if periodic1 else n1 + 1
    vid = lambda i, j: i * m1 + (j % n1 if periodic1 else j)  # noqa: E731
    ids = np.empty((n0 * n1, 2, 2), dtype=np.int64)
    for i in range(n0):
        for j in range(n1):
            ids[i * n1 + j] = [[vid(i, j), vid(i, j + 1)], [vid(i + 1, j), vid(i + 1, j + 1)]]
    return ids


def gen_annulus(n_r: int, n_theta: int, r_in: float, r_out: float, g: int,
                spacing: str = "geometric") -> CurvedMesh:
    """Full annulus; xi runs radially outward, eta counter-clockwise.

    The inner circle is tagged WALL and the outer FARFIELD. Element radial
    boundaries are log-spaced (``spacing="geometric"``) or uniform; inside an
    element the radius is linear in xi, so the exact radial distance is a
    degree-one polynomial along xi.
    """
    if n_r < 1 or n_theta < 1:
        raise GeometryError("n_r and n_theta must be >= 1")
    if not (r_in > 0 and r_out > r_in):
        raise GeometryError(f"need 0 < r_in < r_out, got r_in={r_in}, r_out={r_out}")
    if spacing == "geometric":
        radii = r_in * (r_out / r_in) ** (np.arange(n_r + 1) / n_r)
    elif spacing == "uniform":
        radii = np.linspace(r_in, r_out, n_r + 1)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    radii[0], radii[-1] = r_in, r_out
    z = _gll(g)
    t = 0.5 * (z + 1.0)
    nodes = np.empty((n_r * n_theta, g + 1, g + 1, 2))
    for i in range(n_r):
        r = radii[i] + (radii[i + 1] - radii[i]) * t
        for j in range(n_theta):
            th = 2 * np.pi * (j + t) / n_theta
            e = i * n_theta + j
            nodes[e, :, :, 0] = r[:, None] * np.cos(th)[None, :]
            nodes[e, :, :, 1] = r[:, None] * np.sin(th)[None, :]
    ids = _structured_ids(n_r, n_theta, periodic1=True)

    def tag(e, f):
        return WALL if f == 0 else FARFIELD

    return connect(nodes, ids, tag, name="annulus",
                   info=dict(n_r=n_r, n_theta=n_theta, r_in=r_in, r_out=r_out, g=g, spacing=spacing))


def sinusoid_bottom(x, amplitude: float, wavelength: float):
    return amplitude * np.sin(2 * np.pi * np.asarray(x) / wavelength)


def gen_channel_sinusoidal(n_x: int, n_y: int, amplitude: float = 0.25, wavelength: float = 1.0,
                           height: float = 3.0, g: int = 2, sides: str = "farfield") -> CurvedMesh:
    """Channel between ``y = amplitude*sin(2 pi x / wavelength)`` and ``y = height``.

    One wavelength is meshed, ``x`` in ``[wavelength/4, 5 wavelength/4]``, so
    the trough sits on the vertical centerline and the side boundaries pass
    through crests. Both walls are WALL. The sides are FARFIELD, or with
    ``sides="periodic"`` the right column is glued to the left one. Vertical
    node placement is linear blending between bottom curve and top wall.
    """
    if n_x < 1 or n_y < 1:
        raise GeometryError("n_x and n_y must be >= 1")
    if abs(amplitude) >= height:
        raise GeometryError(f"amplitude {amplitude} must be smaller than height {height}")
    if wavelength <= 0:
        raise GeometryError("wavelength must be positive")
    if sides not in ("farfield", "periodic"):
        raise GeometryError(f"sides must be farfield or periodic, got {sides!r}")
    z = _gll(g)
    t = 0.5 * (z + 1.0)
    x0 = 0.25 * wavelength
    xs = x0 + wavelength * np.arange(n_x + 1) / n_x
    nodes = np.empty((n_x * n_y, g + 1, g + 1, 2))
    for i in range(n_x):
        x = xs[i] + (xs[i + 1] - xs[i]) * t
        yb = sinusoid_bottom(x, amplitude, wavelength)
        for j in range(n_y):
            eta = (j + t) / n_y
            e = i * n_y + j
            nodes[e, :, :, 0] = x[:, None]
            nodes[e, :, :, 1] = yb[:, None] + (height - yb[:, None]) * eta[None, :]
    ids = _structured_ids(n_y, n_x, periodic1=sides == "periodic")
    ids = ids.reshape(n_y, n_x, 2, 2).transpose(1, 0, 3, 2).reshape(-1, 2, 2)

    def tag(e, f):
        return WALL if f in (2, 3) else FARFIELD

    return connect(nodes, ids, tag, name="channel_sin",
                   info=dict(n_x=n_x, n_y=n_y, amplitude=amplitude, wavelength=wavelength,
                             height=height, g=g, x0=x0, sides=sides))


def _graded(h0: float, n: int, length: float) -> np.ndarray:
    """n cell widths growing geometrically from h0 and summing to length."""
    if n == 1 or n * h0 >= length:
        return np.full(n, length / n)
    f = lambda r: h0 * (r ** n - 1.0) / (r - 1.0) - length  # noqa: E731
    r = brentq(f, 1.0 + 1e-12, 1e3)
    w = h0 * r ** np.arange(n)
    return w * (length / w.sum())


def gen_square_hmesh(n_side: int = 8, n_far: int = 8, half_width: float = 0.5, far_dist: float = 29.0,
                     g: int = 1, grading: str = "geometric") -> CurvedMesh:
    """H-topology mesh around the square ``[-a, a]^2`` out to ``a + far_dist``.

    The far-field cells grow geometrically from the square's cell size.
    """
    if n_side < 1 or n_far < 1:
        raise GeometryError("n_side and n_far must be >= 1")
    if half_width <= 0 or far_dist <= half_width:
        raise GeometryError(f"need far_dist > half_width > 0, got {far_dist}, {half_width}")
    a = half_width
    h0 = 2 * a / n_side
    if grading == "geometric":
        far = _graded(h0, n_far, far_dist)
    elif grading == "quadratic":
        far = np.diff(far_dist * (np.arange(n_far + 1) / n_far) ** 2)
    elif grading == "uniform":
        far = np.full(n_far, far_dist / n_far)
    else:
        raise GeometryError(f"unknown grading {grading!r}")
    inner = np.linspace(-a, a, n_side + 1)
    left = -a - np.concatenate([[0.0], np.cumsum(far)])[::-1]
    right = a + np.concatenate([[0.0], np.cumsum(far)])
    coords = np.concatenate([left[:-1], inner, right[1:]])
    coords[0], coords[-1] = -(a + far_dist), a + far_dist
    m = len(coords) - 1
    hole = range(n_far, n_far + n_side)
    z = _gll(g)
    t = 0.5 * (z + 1.0)
    nodes, ids, cells = [], [], []
    for i in range(m):
        for j in range(m):
            if i in hole and j in hole:
                continue
            x = coords[i] + (coords[i + 1] - coords[i]) * t
            y = coords[j] + (coords[j + 1] - coords[j]) * t
            X = np.empty((g + 1, g + 1, 2))
            X[..., 0] = x[:, None]
            X[..., 1] = y[None, :]
            nodes.append(X)
            v = lambda p, q: p * (m + 1) + q  # noqa: E731
            ids.append([[v(i, j), v(i, j + 1)], [v(i + 1, j), v(i + 1, j + 1)]])
            cells.append((i, j))

    def tag(e, f):
        i, j = cells[e]
        outer = (f == 0 and i == 0) or (f == 1 and i == m - 1) or (f == 2 and j == 0) or (f == 3 and j == m - 1)
        return FARFIELD if outer else WALL

    return connect(np.array(nodes), np.array(ids), tag, name="square",
                   info=dict(n_side=n_side, n_far=n_far, half_width=half_width, far_dist=far_dist, g=g))


NACA_T = 0.12
NACA_COEFFS = (0.2969, -0.1260, -0.3516, 0.2843, -0.1036)


def naca0012_thickness(x, t: float = NACA_T):
    """Half thickness of the closed-trailing-edge NACA 00xx profile."""
    x = np.asarray(x, dtype=float)
    a0, a1, a2, a3, a4 = NACA_COEFFS
    return 5 * t * (a0 * np.sqrt(x) + a1 * x + a2 * x ** 2 + a3 * x ** 3 + a4 * x ** 4)


def naca_surface(tau):
    """Airfoil surface for ``tau`` in [-1, 1]: x = tau^2, lower side for tau < 0.

    The trailing edge is at tau = +-1 and the leading edge at tau = 0; the
    parameterization is smooth on each side of the leading edge.
    """
    tau = np.asarray(tau, dtype=float)
    x = tau * tau
    a0, a1, a2, a3, a4 = NACA_COEFFS
    sgn = np.where(tau < 0, -1.0, 1.0)
    y = 5 * NACA_T * (a0 * tau + sgn * (a1 * x + a2 * x ** 2 + a3 * x ** 3 + a4 * x ** 4))
    # the coefficients close the profile only up to rounding
    y = np.where(np.abs(tau) == 1.0, 0.0, y)
    return x, y


def gen_naca_omesh(n_around: int = 8, n_radial: int = 4, far_radius: float = 14.0, g: int = 9,
                   clustering: float = 5.0) -> CurvedMesh:
    """O-mesh around a sharp-trailing-edge NACA0012 of unit chord.

    Radial lines blend linearly from the airfoil to a circle of radius
    ``far_radius`` centred at mid-chord, with exponential clustering towards
    the surface. The trailing edge is the periodic seam.
    """
    if n_around < 2 or n_around % 2:
        raise GeometryError("n_around must be even and >= 2")
    if n_radial < 1:
        raise GeometryError("n_radial must be >= 1")
    if far_radius <= 1.0:
        raise GeometryError("far_radius must exceed the chord")
    z = _gll(g)
    t = 0.5 * (z + 1.0)
    taus = -1.0 + 2.0 * np.arange(n_around + 1) / n_around
    k = np.arange(n_radial + 1) / n_radial
    rho = k if clustering == 0 else np.expm1(clustering * k) / np.expm1(clustering)
    nodes = np.empty((n_around * n_radial, g + 1, g + 1, 2))
    # xi along tau (clockwise round the body), eta outward
    for i in range(n_around):
        tau = taus[i] + (taus[i + 1] - taus[i]) * t
        sx, sy = naca_surface(tau)
        th = -np.pi * (tau + 1.0)
        cx, cy = 0.5 + far_radius * np.cos(th), far_radius * np.sin(th)
        for j in range(n_radial):
            r = rho[j] + (rho[j + 1] - rho[j]) * t
            e = i * n_radial + j
            nodes[e, :, :, 0] = (1 - r[None, :]) * sx[:, None] + r[None, :] * cx[:, None]
            nodes[e, :, :, 1] = (1 - r[None, :]) * sy[:, None] + r[None, :] * cy[:, None]
    # exact closure of the seam
    last = (n_around - 1) * n_radial
    for j in range(n_radial):
        nodes[last + j, -1, :, :] = nodes[j, 0, :, :]
    ids = np.empty((n_around * n_radial, 2, 2), dtype=np.int64)
    vid = lambda i, j: (i % n_around) * (n_radial + 1) + j  # noqa: E731
    for i in range(n_around):
        for j in range(n_radial):
            ids[i * n_radial + j] = [[vid(i, j), vid(i, j + 1)], [vid(i + 1, j), vid(i + 1, j + 1)]]

    def tag(e, f):
        return WALL if f == 2 else FARFIELD

    mesh = connect(nodes, ids, tag, name="naca0012",
                   info=dict(n_around=n_around, n_radial=n_radial, far_radius=far_radius, g=g,
                             clustering=clustering))
    # self-intersection check on a fine sample
    bad = _first_inverted(mesh, max(2 * g + 2, 8))
    if bad is not None:
        raise InvertedElementError(bad, " in NACA O-mesh")
    return mesh


def _first_inverted(mesh: CurvedMesh, n_sample: int):
    z = _gll(mesh.geometry_order)
    s = np.linspace(-1, 1, n_sample)
    L = lagrange_matrix(z, s)
    D = lagrange_derivative_matrix(z, s)
    X = mesh.nodes
    xa = np.einsum("ia,jb,eabc->eijc", D, L, X)
    xb = np.einsum("ia,jb,eabc->eijc", L, D, X)
    J = xa[..., 0] * xb[..., 1] - xb[..., 0] * xa[..., 1]
    bad = np.where(np.min(J.reshape(len(X), -1), axis=1) <= 0)[0]
    return int(bad[0]) if len(bad) else None


@dataclass
class ElementMetrics:
    """Metric terms for all elements at solution and face quadrature nodes.

    ``ja1 = J * grad(xi) = (y_eta, -x_eta)`` and ``ja2 = J * grad(eta) =
    (-y_xi, x_xi)``. ``normals`` are unit outward; ``surf_jac`` is the face
    length element. ``delta`` is the element length scale sqrt(vol) / N.
    """

    xy: np.ndarray
    J: np.ndarray
    ja1: np.ndarray
    ja2: np.ndarray
    face_xy: np.ndarray
    normals: np.ndarray
    surf_jac: np.ndarray
    vol: np.ndarray
    delta: np.ndarray


def compute_metrics(mesh: CurvedMesh, basis: Basis1D) -> ElementMetrics:
    z = _gll(mesh.geometry_order)
    xq = basis.nodes
    L = lagrange_matrix(z, xq)
    D = lagrange_derivative_matrix(z, xq)
    Lm, Lp = lagrange_matrix(z, -1.0)[0], lagrange_matrix(z, 1.0)[0]
    Dm, Dp = lagrange_derivative_matrix(z, -1.0)[0], lagrange_derivative_matrix(z, 1.0)[0]
    X = mesh.nodes
    xy = np.einsum("ia,jb,eabc->eijc", L, L, X)
    x_xi = np.einsum("ia,jb,eabc->eijc", D, L, X)
    x_eta = np.einsum("ia,jb,eabc->eijc", L, D, X)
    J = x_xi[..., 0] * x_eta[..., 1] - x_eta[..., 0] * x_xi[..., 1]
    ja1 = np.stack([x_eta[..., 1], -x_eta[..., 0]], axis=-1)
    ja2 = np.stack([-x_xi[..., 1], x_xi[..., 0]], axis=-1)

    E, n = X.shape[0], basis.n
    face_xy = np.empty((E, 4, n, 2))
    nvec = np.empty((E, 4, n, 2))
    for f, (ev, dv, sign, along_xi) in enumerate(
        [(Lm, Dm, -1.0, False), (Lp, Dp, 1.0, False), (Lm, Dm, -1.0, True), (Lp, Dp, 1.0, True)]
    ):
        if not along_xi:
            # xi fixed at +-1; points along eta
            face_xy[:, f] = np.einsum("a,jb,eabc->ejc", ev, L, X)
            fx_eta = np.einsum("a,jb,eabc->ejc", ev, D, X)
            nvec[:, f] = sign * np.stack([fx_eta[..., 1], -fx_eta[..., 0]], axis=-1)
        else:
            face_xy[:, f] = np.einsum("ia,b,eabc->eic", L, ev, X)
            fx_xi = np.einsum("ia,b,eabc->eic", D, ev, X)
            nvec[:, f] = sign * np.stack([-fx_xi[..., 1], fx_xi[..., 0]], axis=-1)
    surf_jac = np.linalg.norm(nvec, axis=-1)
    bad = np.where((J.reshape(E, -1).min(axis=1) <= 0) | (surf_jac.reshape(E, -1).min(axis=1) <= 0))[0]
    if len(bad):
        raise InvertedElementError(int(bad[0]))
    normals = nvec / surf_jac[..., None]
    w = basis.weights
    vol = np.einsum("i,j,eij->e", w, w, J)
    delta = np.sqrt(vol) / basis.order
    return ElementMetrics(xy, J, ja1, ja2, face_xy, normals, surf_jac, vol, delta)


def write_mesh(mesh: CurvedMesh, path) -> None:
    """Write the versioned ASCII exchange format (see README)."""
    g = mesh.geometry_order
    lines = [f"{MESH_FORMAT} {MESH_VERSION}", f"name {mesh.name}", f"geometry_order {g}",
             "node_family gauss-lobatto", f"elements {mesh.n_elements}"]
    for X in mesh.nodes:
        for a in range(g + 1):
            for b in range(g + 1):
                lines.append(f"{float(X[a, b, 0])!r} {float(X[a, b, 1])!r}")
    lines.append(f"interior_faces {len(mesh.interior_faces)}")
    lines += [" ".join(str(int(v)) for v in row) for row in mesh.interior_faces]
    lines.append(f"boundary_faces {len(mesh.boundary_faces)}")
    lines += [f"{int(e)} {int(f)} {t}" for (e, f), t in zip(mesh.boundary_faces, mesh.boundary_tags)]
    lines.append("end")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path) -> CurvedMesh:
    with open(path) as fh:
        tokens = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    it = iter(tokens)

    def expect(key):
        parts = next(it).split()
        if parts[0] != key:
            raise GeometryError(f"mesh file: expected {key!r}, got {parts[0]!r}")
        return parts[1:]

    head = next(it).split()
    if head[0] != MESH_FORMAT:
        raise GeometryError(f"not an {MESH_FORMAT} file")
    if int(head[1]) != MESH_VERSION:
        raise GeometryError(f"unsupported mesh version {head[1]}")
    name = expect("name")[0]
    g = int(expect("geometry_order")[0])
    family = expect("node_family")[0]
    if family != "gauss-lobatto":
        raise GeometryError(f"unsupported node family {family!r}")
    E = int(expect("elements")[0])
    nodes = np.empty((E, g + 1, g + 1, 2))
    for e in range(E):
        for a in range(g + 1):
            for b in range(g + 1):
                nodes[e, a, b] = [float(v) for v in next(it).split()]
    nf = int(expect("interior_faces")[0])
    interior = [[int(v) for v in next(it).split()] for _ in range(nf)]
    nb = int(expect("boundary_faces")[0])
    boundary, tags = [], []
    for _ in range(nb):
        e, f, t = next(it).split()
        boundary.append((int(e), int(f)))
        tags.append(t)
    expect("end")
    return CurvedMesh(nodes, np.array(interior, dtype=np.int64).reshape(-1, 5),
                      np.array(boundary, dtype=np.int64).reshape(-1, 2), np.array(tags, dtype=object), name=name)
