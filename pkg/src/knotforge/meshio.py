"""Sampling surfaces into quad meshes, projecting to R^3, exporting and
verifying them numerically.

Meshes keep the parameter grid structure (row index = t sample, column index
= s sample, columns concatenated across pieces) because the verification
passes reason in grid steps.  Quads are the native face type; triangulation
happens only at STL export.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
import numpy as np

from .errors import DomainUnbounded
from .surfaces import Surface4, coord_grid

TAN_CLIP = 0.05  # fraction of the quarter-turn dropped when mapping [a, inf)
DEGENERATE_EPS = 1e-12


@dataclass(frozen=True)
class Mesh4:
    """Sampled surface: parameter grid, R^4 vertices, quad connectivity."""

    ts: np.ndarray  # (nt,)
    ss: np.ndarray  # (ncols,) s value per column (seam columns repeat)
    params: np.ndarray  # (nt*ncols, 2) row-major (t, s) per vertex
    vertices: np.ndarray  # (nt*ncols, 4)
    quads: np.ndarray  # (nquads, 4) int indices
    wrap_s: bool = False

    @property
    def nt(self) -> int:
        return len(self.ts)

    @property
    def ncols(self) -> int:
        return len(self.ss)


@dataclass(frozen=True)
class Mesh3:
    """Projection of a Mesh4 into R^3; grid metadata preserved."""

    ts: np.ndarray
    ss: np.ndarray
    params: np.ndarray
    vertices: np.ndarray  # (n, 3)
    quads: np.ndarray
    wrap_s: bool = False

    @property
    def nt(self) -> int:
        return len(self.ts)

    @property
    def ncols(self) -> int:
        return len(self.ss)


_AXES = {"x": 0, "y": 1, "z": 2, "w": 3}


@dataclass(frozen=True)
class ProjectionSpec:
    """Either drop one named axis or apply a 3x4 matrix with orthonormal rows."""

    kind: str  # "drop" | "matrix"
    axis: str | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "drop":
            if self.axis not in _AXES:
                raise ValueError(f"axis must be one of x, y, z, w; got {self.axis!r}")
        elif self.kind == "matrix":
            m = np.asarray(self.matrix, dtype=float)
            if m.shape != (3, 4):
                raise ValueError("projection matrix must be 3x4")
            gram = m @ m.T
            if np.max(np.abs(gram - np.eye(3))) > 1e-12:
                raise ValueError("projection matrix rows must be orthonormal")
            object.__setattr__(self, "matrix", m)
        else:
            raise ValueError(f"unknown projection kind {self.kind!r}")

    @staticmethod
    def keep(axes: str) -> "ProjectionSpec":
        """Projection that keeps the three named axes, e.g. 'xzw' drops y."""
        kept = set(axes)
        if len(axes) != 3 or not kept <= set(_AXES):
            raise ValueError(f"expected three distinct axis letters, got {axes!r}")
        (dropped,) = set(_AXES) - kept
        return ProjectionSpec("drop", axis=dropped)


def _t_samples(surf: Surface4, nt: int) -> np.ndarray:
    rng = surf.t_range
    if rng.finite:
        return rng.grid(nt)
    if not math.isfinite(rng.lo):
        raise DomainUnbounded("cannot sample a surface unbounded below in t")
    q = np.linspace(0.0, 1.0 - TAN_CLIP, nt)
    return rng.lo + np.tan(q * math.pi / 2.0)


def _piece_rows(surf: Surface4, ns: int) -> list[int]:
    """Split ns s-samples across pieces proportionally (>= 2 each)."""
    if not surf.piecewise:
        return [ns]
    lengths = [p.s_range.width for p in surf.pieces]
    total = sum(lengths)
    counts = [max(2, round(ns * ln / total)) for ln in lengths[:-1]]
    counts.append(max(2, ns - sum(counts)))
    return counts


def sample_surface(surf: Surface4, nt: int, ns: int) -> Mesh4:
    """Row-major grid sampling; piecewise surfaces repeat seam columns once.

    Wrapped surfaces sample s on [0, period) excluding the period end and
    stitch the last column back to the first.
    """
    if nt < 2 or ns < 2:
        raise ValueError("need nt, ns >= 2")
    for piece in surf.pieces:
        if not piece.s_range.finite:
            raise DomainUnbounded("piece s-range is not finite")
    ts = _t_samples(surf, nt)
    piece_rows = _piece_rows(surf, ns)

    col_vals: list[np.ndarray] = []
    blocks: list[np.ndarray] = []
    for piece, rows in zip(surf.pieces, piece_rows):
        if surf.wrap_s and not surf.piecewise:
            ss = piece.s_range.lo + piece.s_range.width * np.arange(rows) / rows
        else:
            ss = piece.s_range.grid(rows)
        col_vals.append(ss)
        blocks.append(np.stack([coord_grid(c, ts, ss) for c in piece.coords], axis=-1))
    ss_all = np.concatenate(col_vals)
    grid = np.concatenate(blocks, axis=1)  # (nt, ncols, 4)
    ncols = grid.shape[1]

    verts = grid.reshape(-1, 4)
    tgrid, sgrid = np.meshgrid(ts, ss_all, indexing="ij")
    params = np.stack([tgrid.reshape(-1), sgrid.reshape(-1)], axis=1)

    quads = []
    col_offset = 0
    for rows in piece_rows:
        span = rows if (surf.wrap_s and not surf.piecewise) else rows - 1
        for i in range(nt - 1):
            for jj in range(span):
                j = col_offset + jj
                jn = col_offset + (jj + 1) % rows
                quads.append(
                    (i * ncols + j, (i + 1) * ncols + j, (i + 1) * ncols + jn, i * ncols + jn)
                )
        col_offset += rows
    return Mesh4(ts, ss_all, params, verts, np.asarray(quads, dtype=np.int64), surf.wrap_s)


def project(mesh: Mesh4, spec: ProjectionSpec) -> Mesh3:
    """Drop one coordinate or apply an orthonormal 3x4 matrix."""
    if spec.kind == "drop":
        keep = [i for i in range(4) if i != _AXES[spec.axis]]
        verts = mesh.vertices[:, keep]
    else:
        verts = mesh.vertices @ spec.matrix.T
    return Mesh3(mesh.ts, mesh.ss, mesh.params, verts, mesh.quads, mesh.wrap_s)


# -- exporters ---------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def obj_bytes(mesh: Mesh3) -> bytes:
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in mesh.vertices]
    lines += [f"f {a+1} {b+1} {c+1} {d+1}" for a, b, c, d in mesh.quads]
    return ("\n".join(lines) + "\n").encode("ascii")


def _triangulate(mesh: Mesh3) -> np.ndarray:
    """Split each quad along its shorter diagonal."""
    v = mesh.vertices
    q = mesh.quads
    d02 = np.linalg.norm(v[q[:, 0]] - v[q[:, 2]], axis=1)
    d13 = np.linalg.norm(v[q[:, 1]] - v[q[:, 3]], axis=1)
    tris = np.empty((2 * len(q), 3), dtype=np.int64)
    use02 = d02 <= d13
    tris[0::2] = np.where(use02[:, None], q[:, [0, 1, 2]], q[:, [0, 1, 3]])
    tris[1::2] = np.where(use02[:, None], q[:, [0, 2, 3]], q[:, [1, 2, 3]])
    return tris


def stl_bytes(mesh: Mesh3) -> bytes:
    """Binary STL: 80-byte zeroed header, little-endian, quads triangulated."""
    tris = _triangulate(mesh)
    v = mesh.vertices
    out = bytearray(80)  # zeroed header
    out += struct.pack("<I", len(tris))
    for a, b, c in tris:
        p0, p1, p2 = v[a], v[b], v[c]
        n = np.cross(p1 - p0, p2 - p0)
        norm = np.linalg.norm(n)
        n = n / norm if norm > 0 else np.zeros(3)
        out += struct.pack("<3f", *n)
        out += struct.pack("<3f", *p0)
        out += struct.pack("<3f", *p1)
        out += struct.pack("<3f", *p2)
        out += struct.pack("<H", 0)
    return bytes(out)


def csv_bytes(mesh: Mesh4) -> bytes:
    rows = ["t,s,x,y,z,w"]
    for (t, s), p in zip(mesh.params, mesh.vertices):
        rows.append(",".join(_fmt(v) for v in (t, s, *p)))
    return ("\n".join(rows) + "\n").encode("ascii")


def _write(path, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"failed writing mesh to {path}: {exc}") from exc


def export_obj(mesh: Mesh3, path) -> None:
    _write(path, obj_bytes(mesh))


def export_stl(mesh: Mesh3, path) -> None:
    _write(path, stl_bytes(mesh))


def export_csv(mesh: Mesh4, path) -> None:
    _write(path, csv_bytes(mesh))


def parse_csv(data: bytes) -> np.ndarray:
    """Re-parse csv_bytes output; returns the (n, 6) array bit-exactly."""
    lines = data.decode("ascii").strip().splitlines()
    if lines[0] != "t,s,x,y,z,w":
        raise ValueError(f"unexpected CSV header {lines[0]!r}")
    return np.array([[float(tok) for tok in ln.split(",")] for ln in lines[1:]])


# -- verification ------------------------------------------------------------


@dataclass
class InjectivityReport:
    passed: bool
    violations: list[dict] = field(default_factory=list)
    checked_pairs: int = 0
    min_dist: float = 0.0
    param_gap: int = 0
    method: str = "auto"

    def to_json(self) -> str:
        return json.dumps(
            {"pass": self.passed, "violations": self.violations},
            separators=(",", ":"),
            sort_keys=True,
        )


def _degenerate_runs(mesh) -> np.ndarray:
    """Boolean keep-mask: within each row, runs of coincident vertices keep
    only their first vertex (collapsing degenerate pole/edge segments)."""
    nt, ncols = mesh.nt, mesh.ncols
    verts = mesh.vertices.reshape(nt, ncols, -1)
    keep = np.ones((nt, ncols), dtype=bool)
    for i in range(nt):
        row = verts[i]
        j = 0
        while j < ncols - 1:
            k = j + 1
            while k < ncols and np.max(np.abs(row[k] - row[j])) <= DEGENERATE_EPS:
                keep[i, k] = False
                k += 1
            j = k
    return keep.reshape(-1)


def _param_far(mesh, ia: np.ndarray, ib: np.ndarray, gap: int) -> np.ndarray:
    """Pairs are suspicious only when BOTH index separations exceed the gap.

    Pairs that stay within `gap` steps in either parameter direction are
    neighbours along one coordinate line (poles, glued edges, adjacent
    sections) and are parametrization features, not sheet collisions.
    """
    ncols = mesh.ncols
    di = np.abs(ia // ncols - ib // ncols)
    dj = np.abs(ia % ncols - ib % ncols)
    if mesh.wrap_s:
        dj = np.minimum(dj, ncols - dj)
    return (di > gap) & (dj > gap)


def injectivity_check(
    mesh,
    param_gap: int | None = None,
    min_dist: float | None = None,
    method: str = "auto",
) -> InjectivityReport:
    """Sampled embedding check: no two parameter-far vertices may nearly meet.

    Defaults: min_dist is 1e-3 of the bounding-box diagonal, param_gap is 3
    grid steps.  A pair is reported when both its t and s index separations
    exceed param_gap (s periodic on wrapped meshes, coincident runs collapsed)
    yet its spatial distance falls below min_dist.  This is a necessary
    condition for embeddedness, not a certificate.
    """
    verts = np.asarray(mesh.vertices, dtype=float)
    n = len(verts)
    if param_gap is None:
        param_gap = 3
    if min_dist is None:
        bb = verts.max(axis=0) - verts.min(axis=0)
        min_dist = 1e-3 * float(np.linalg.norm(bb))
        if min_dist == 0.0:
            min_dist = 1e-12
    if method == "auto":
        method = "brute" if n <= 100 * 100 else "hash"

    keep = _degenerate_runs(mesh)
    idx = np.nonzero(keep)[0]
    report = InjectivityReport(
        passed=True, min_dist=float(min_dist), param_gap=int(param_gap), method=method
    )

    if method == "brute":
        pts = verts[idx]
        block = 512
        for start in range(0, len(idx), block):
            ia = idx[start : start + block]
            d2 = np.zeros((len(ia), len(idx)))
            for k in range(verts.shape[1]):
                d2 += (verts[ia][:, None, k] - pts[None, :, k]) ** 2
            rr, cc = np.nonzero(d2 < min_dist * min_dist)
            a, b = ia[rr], idx[cc]
            keep = b > a
            a, b, dist2 = a[keep], b[keep], d2[rr[keep], cc[keep]]
            report.checked_pairs += int(len(a))
            if len(a):
                far = _param_far(mesh, a, b, param_gap)
                for va, vb, vd in zip(a[far], b[far], np.sqrt(dist2[far])):
                    report.violations.append({"i": int(va), "j": int(vb), "dist": float(vd)})
    elif method == "hash":
        cell = min_dist
        keys = np.floor(verts[idx] / cell).astype(np.int64)
        buckets: dict[tuple, np.ndarray] = {}
        order = np.lexsort(keys.T[::-1])
        sorted_keys = keys[order]
        boundaries = np.nonzero(np.any(np.diff(sorted_keys, axis=0) != 0, axis=1))[0] + 1
        for chunk in np.split(order, boundaries):
            buckets[tuple(keys[chunk[0]])] = idx[chunk]
        dim = verts.shape[1]
        offsets = np.array(np.meshgrid(*([[-1, 0, 1]] * dim), indexing="ij")).reshape(dim, -1).T
        offsets = [tuple(o) for o in offsets if tuple(o) >= tuple([0] * dim)]
        for key, members in buckets.items():
            for off in offsets:
                nb = buckets.get(tuple(k + o for k, o in zip(key, off)))
                if nb is None:
                    continue
                if all(o == 0 for o in off):
                    aa, bb2 = np.triu_indices(len(members), k=1)
                    pa, pb = members[aa], members[bb2]
                else:
                    pa = np.repeat(members, len(nb))
                    pb = np.tile(nb, len(members))
                if len(pa) == 0:
                    continue
                d = np.linalg.norm(verts[pa] - verts[pb], axis=1)
                near = d < min_dist
                report.checked_pairs += int(near.sum())
                if not np.any(near):
                    continue
                far = _param_far(mesh, pa[near], pb[near], param_gap)
                for a, b, dist in zip(pa[near][far], pb[near][far], d[near][far]):
                    lo, hi = (int(a), int(b)) if a < b else (int(b), int(a))
                    report.violations.append({"i": lo, "j": hi, "dist": float(dist)})
    else:
        raise ValueError(f"unknown method {method!r}")

    seen = set()
    unique = []
    for v in sorted(report.violations, key=lambda v: (v["i"], v["j"])):
        if (v["i"], v["j"]) not in seen:
            seen.add((v["i"], v["j"]))
            unique.append(v)
    report.violations = unique
    report.passed = not unique
    return report


@dataclass
class SeamReport:
    seams: list[dict]
    note: str = ""

    @property
    def max_mismatch(self) -> float:
        return max((s["max_mismatch"] for s in self.seams), default=0.0)


def seam_check(surf: Surface4, n: int = 256) -> SeamReport:
    """Max coordinate mismatch across each interior seam at n sampled t."""
    from .surfaces import coord_eval

    if not surf.piecewise:
        return SeamReport(seams=[], note="no seams: surface has a single piece")
    if not surf.t_range.finite:
        raise DomainUnbounded("seam check needs a finite t range")
    ts = surf.t_range.grid(n)
    seams = []
    for left, right in zip(surf.pieces, surf.pieces[1:]):
        s = left.s_range.hi
        worst = 0.0
        for cl, cr in zip(left.coords, right.coords):
            gap = float(
                np.max(
                    np.abs(
                        np.asarray(coord_eval(cl, ts, s)) - np.asarray(coord_eval(cr, ts, s))
                    )
                )
            )
            worst = max(worst, gap)
        seams.append({"s": float(s), "max_mismatch": worst})
    return SeamReport(seams=seams)
