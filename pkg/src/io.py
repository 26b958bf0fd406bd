"""
File formats: OFF files, net and report JSON, and SVG drawings of nets.
These are used by the CLI and the HamNet session; the geometry itself lives in
mesh_core, unfold and verify.
"""

import json
import logging
import os
from io import StringIO
from typing import Optional

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure
from matplotlib.patches import Polygon as PolygonPatch

from .hamq_search import format_cycle, parse_cycle
from .mesh_core import Polyhedron, ValidationReport, emit_off, load_off
from .unfold import Net, boundary_walk, partition

logger = logging.getLogger("HamNet.IO")


class NetFormatError(ValueError):
    """A net JSON document is missing fields or does not fit the solid."""


def read_off_file(path: str, name: Optional[str] = None) -> Polyhedron:
    """Load an OFF file; the solid is named after the file unless `name` is given."""
    with open(path, 'r') as f:
        text = f.read()
    if name is None:
        name = os.path.splitext(os.path.basename(path))[0]
    return load_off(text, name=name)


def write_text(path: str, text: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, 'w', newline='\n') as f:
        f.write(text)
    logger.info(f"Wrote {path}")


def write_off_file(P: Polyhedron, path: str) -> None:
    write_text(path, emit_off(P))


def _xy(points) -> list:
    return [[float(x), float(y)] for x, y in np.asarray(points, dtype=float)]


def net_to_dict(net: Net) -> dict:
    """
    Net as a JSON-ready dict in the stable field order
    polyhedron, cycle, join_edge, faces, boundary, cut_edges.

    Vertex numbers are 1-based; face numbers follow the solid's face order (0-based).
    Coordinates are plain floats so json writes their shortest exact repr.
    """
    faces = []
    for f in sorted(net.placements):
        faces.append({
            'face': int(f),
            'vertices2d': _xy(net.placements[f]),
            'vertices': [int(v) + 1 for v in net.face_vertices[f]],
            'half': net.halves[f],
        })
    return {
        'polyhedron': net.polyhedron,
        'cycle': format_cycle(net.cycle),
        'join_edge': [int(v) + 1 for v in net.join_edge],
        'faces': faces,
        'boundary': _xy(net.boundary),
        'cut_edges': [[int(u) + 1, int(v) + 1] for u, v in net.cut_edges],
    }


def net_to_json(net: Net) -> str:
    return json.dumps(net_to_dict(net), indent=2) + '\n'


def net_from_dict(P: Polyhedron, data: dict, config=None) -> Net:
    """
    Rebuild a Net from its JSON form for the solid it was made from.

    The file's coordinates are taken as they are, so verification judges what
    was written. Faces without 'vertices'/'half' entries fall back to the solid's
    face order and to the cycle's partition.

    Raises:
        NetFormatError: missing fields, unknown faces or a boundary of the wrong length
        CycleError: the cycle string is not a Hamiltonian cycle of P
    """
    for key in ('cycle', 'join_edge', 'faces', 'boundary'):
        if key not in data:
            raise NetFormatError(f"net JSON has no {key!r} field")
    name = data.get('polyhedron')
    if name is not None and name != P.label:
        logger.warning(f"net was written for {name!r}, checking it against {P.label!r}")

    Q = parse_cycle(P, str(data['cycle']))
    try:
        a, b = (int(v) - 1 for v in data['join_edge'])
    except (TypeError, ValueError):
        raise NetFormatError(f"bad join_edge {data['join_edge']!r}") from None

    placements, face_vertices, halves = {}, {}, {}
    for entry in data['faces']:
        f = int(entry['face'])
        if f < 0 or f >= P.num_faces:
            raise NetFormatError(f"face {f} does not exist on {P.label}")
        verts = tuple(int(v) - 1 for v in entry['vertices']) if 'vertices' in entry else P.faces[f]
        pts = np.asarray(entry['vertices2d'], dtype=float)
        if pts.shape != (len(verts), 2):
            raise NetFormatError(f"face {f}: expected {len(verts)} 2D points, got shape {pts.shape}")
        placements[f] = pts
        face_vertices[f] = verts
        if 'half' in entry:
            halves[f] = entry['half']
    if len(placements) != P.num_faces:
        raise NetFormatError(f"net places {len(placements)} of {P.num_faces} faces")
    if len(halves) != len(placements):
        A, B = partition(P, Q)
        halves = {f: 'A' for f in A.faces}
        halves.update({f: 'B' for f in B.faces})

    # join_edge is an unordered pair; orient it along the walk the halves refer to
    if (a, b) not in Q.directed_edges():
        if (b, a) not in Q.directed_edges():
            raise NetFormatError(f"join edge {a + 1}-{b + 1} is not on cycle {format_cycle(Q)}")
        a, b = b, a
    labels = tuple(v for v, _ in boundary_walk(Q, (a, b)))
    boundary = np.asarray(data['boundary'], dtype=float)
    if boundary.shape != (len(labels), 2):
        raise NetFormatError(f"boundary has {len(boundary)} points, expected {len(labels)}")
    cut = tuple(tuple(sorted((int(u) - 1, int(v) - 1))) for u, v in data.get('cut_edges', []))
    return Net(polyhedron=P.label, cycle=Q, join_edge=(a, b), placements=placements,
               face_vertices=face_vertices, halves=halves, boundary=boundary,
               boundary_vertices=labels, cut_edges=cut, provenance={'method': 'file'})


def read_net_file(P: Polyhedron, path: str, config=None) -> Net:
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise NetFormatError(f"{path}: not valid JSON ({e})") from None
    return net_from_dict(P, data, config)


def report_to_json(report) -> str:
    """Verification report as {checks: [{name, pass, details}], worst_residual}."""
    return json.dumps(report.to_dict(), indent=2) + '\n'


def validation_to_dict(P: Polyhedron, report: ValidationReport) -> dict:
    return {
        'polyhedron': P.label,
        'V': P.num_vertices,
        'E': P.num_edges,
        'F': P.num_faces,
        'convex_required': report.convex_required,
        'checks': [c.to_dict() for c in report.checks],
        'pass': report.passed,
    }


def _join_segment(net: Net) -> np.ndarray:
    a, b = net.join_edge
    for f in sorted(net.placements):
        verts = net.face_vertices[f]
        k = len(verts)
        for i in range(k):
            if verts[i] == a and verts[(i + 1) % k] == b:
                return net.placements[f][[i, (i + 1) % k]]
    raise NetFormatError(f"join edge {a + 1}-{b + 1} is not on any placed face")


def emit_svg(net: Net, config=None) -> str:
    """
    Draw a net as SVG with matplotlib's SVG backend.

    One <path> per face (group id "face-<n>"), the outline in the cut colour, the
    join edge thicker in its own colour and boundary corners labelled with 1-based
    vertex numbers. Plot units map to SVG points by the uniform scale and offset
    stored in the document description. A fixed hash salt and no date make the
    output byte-identical for the same net and config.
    """
    px = float(getattr(config, 'SVG_VIEWPORT_PX', 600.0))
    margin = float(getattr(config, 'SVG_MARGIN', 0.05))
    face_fill = {'A': getattr(config, 'SVG_FACE_FILL', '#f2efe6'), 'B': getattr(config, 'SVG_FACE_FILL_B', '#e3ecf4')}
    edge_color = getattr(config, 'SVG_EDGE_COLOR', '#333333')
    line_width = getattr(config, 'SVG_LINE_WIDTH', 0.8)

    pts = np.vstack([net.placements[f] for f in sorted(net.placements)])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = margin * max(float((hi - lo).max()), 1e-12)
    lo, hi = lo - pad, hi + pad
    extent = hi - lo
    scale = px / float(extent.max())
    width, height = extent * scale

    fig = Figure(figsize=(width / 72.0, height / 72.0), dpi=72)
    FigureCanvasSVG(fig)
    fig.patch.set_visible(False)
    ax = fig.add_axes([0.0, 0.0, 1.0, 1.0])
    ax.set_axis_off()
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])

    for f in sorted(net.placements):
        ax.add_patch(PolygonPatch(net.placements[f], closed=True, facecolor=face_fill.get(net.halves.get(f), 'none'),
                                  edgecolor=edge_color, linewidth=line_width, gid=f"face-{f}"))

    outline = np.vstack([net.boundary, net.boundary[:1]])
    ax.plot(outline[:, 0], outline[:, 1], color=getattr(config, 'SVG_CUT_COLOR', '#c0392b'),
            linewidth=line_width * 1.5, gid='cut-boundary')
    seg = _join_segment(net)
    ax.plot(seg[:, 0], seg[:, 1], color=getattr(config, 'SVG_JOIN_COLOR', '#1f6fd1'),
            linewidth=getattr(config, 'SVG_JOIN_WIDTH', 2.4), gid='join-edge')

    label_size = getattr(config, 'SVG_LABEL_SIZE', 9.0)
    for i, (v, (x, y)) in enumerate(zip(net.boundary_vertices, net.boundary)):
        ax.text(x, y, str(v + 1), fontsize=label_size, ha='center', va='center', gid=f"label-{i}")

    description = (f"net of {net.polyhedron} along {format_cycle(net.cycle)}, "
                   f"join edge {net.join_edge[0] + 1}-{net.join_edge[1] + 1}; "
                   f"svg_x = (x - {float(lo[0])!r}) * {scale!r}, svg_y = ({float(hi[1])!r} - y) * {scale!r}")
    buf = StringIO()
    with matplotlib.rc_context({'svg.hashsalt': getattr(config, 'SVG_HASH_SALT', 'hamnet'),
                                'svg.fonttype': 'none'}):
        fig.savefig(buf, format='svg', metadata={'Date': None, 'Title': net.polyhedron,
                                                 'Description': description})
    return buf.getvalue()
