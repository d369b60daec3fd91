"""JSON drawing files and SVG rendering."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from xml.sax.saxutils import escape

import networkx as nx

from .errors import RationalParseError, SchemaError
from .geometry import GeometricDrawing
from .model import CROSSING, VERTEX, DrawingState, GraphSpec, NetworkN, Node, Route, Segment, materialize_planarization

FORMAT_VERSION = 1
_RATIONAL = re.compile(r"^-?\d+(/[1-9]\d*)?$")


# --------------------------------------------------------------------------
# primitives


def _rat(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise RationalParseError(f"expected a rational, got {value!r}", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value.strip()):
        return Fraction(value.strip())
    raise RationalParseError(f"expected a rational 'p/q' string, got {value!r}", path)


def _rat_str(x: Fraction) -> str:
    return str(Fraction(x))


def _get(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field '{key}'", path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field '{key}' has the wrong type", f"{path}.{key}")
    return val


def _int(value, path) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {value!r}", path)
    return value


def _int_key(key: str, path: str) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise SchemaError(f"expected an integer key, got {key!r}", path) from None


def _dump(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# serialization


def serialize_drawing(value) -> bytes:
    """Canonical JSON bytes for a GeometricDrawing, NetworkN, DrawingState or (network, state)."""
    if isinstance(value, GeometricDrawing):
        return _dump(_geometric_obj(value))
    if isinstance(value, DrawingState):
        return _dump(_combinatorial_obj(value.network, value))
    if isinstance(value, NetworkN):
        return _dump(_combinatorial_obj(value, None))
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], NetworkN):
        return _dump(_combinatorial_obj(value[0], value[1]))
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _geometric_obj(gd: GeometricDrawing) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "geometric",
        "vertices": [
            {"id": v, "x": _rat_str(p[0]), "y": _rat_str(p[1])} for v, p in sorted(gd.vertices.items())
        ],
        "edges": [
            {"id": e, "u": u, "v": v, "polyline": [[_rat_str(x), _rat_str(y)] for x, y in poly]}
            for e, (u, v, poly) in sorted(gd.edges.items())
        ],
    }


def _routes_obj(routes: dict) -> tuple[dict, dict]:
    nodes = {str(e): list(r.nodes) for e, r in sorted(routes.items())}
    segs = {str(e): list(r.segs) for e, r in sorted(routes.items())}
    return nodes, segs


def _combinatorial_obj(net: NetworkN, state: DrawingState | None) -> dict:
    nodes = []
    for n in net.nodes:
        if n.kind == VERTEX:
            nodes.append({"id": n.id, "kind": VERTEX, "vertex": n.vertex})
        else:
            nodes.append({"id": n.id, "kind": CROSSING, "edges": list(n.edges)})
    routes, route_segs = _routes_obj(net.original_routes)
    obj = {
        "format_version": FORMAT_VERSION,
        "kind": "combinatorial",
        "graph": {
            "vertices": list(net.graph.vertices),
            "edges": [{"id": e, "u": u, "v": v} for e, (u, v) in sorted(net.graph.edges.items())],
        },
        "nodes": nodes,
        "segments": [{"id": s.id, "a": s.a, "b": s.b} for s in net.segments],
        "rotation": {str(n): list(r) for n, r in sorted(net.rotation.items())},
        "routes": routes,
        "route_segments": route_segs,
    }
    if net.coords is not None:
        obj["coords"] = {str(n): [_rat_str(x), _rat_str(y)] for n, (x, y) in sorted(net.coords.items())}
    if state is not None:
        sr, ss = _routes_obj(state.routes)
        obj["state"] = {
            "routes": sr,
            "route_segments": ss,
            "corridor_orders": {
                str(s): [list(t) for t in order] for s, order in sorted(state.corridors.items())
            },
            "epoch": state.epoch,
        }
    return obj


# --------------------------------------------------------------------------
# parsing


def parse_drawing(data: bytes | str):
    """Parse a drawing file.

    Returns a GeometricDrawing, or ``(NetworkN, DrawingState | None)`` for a
    combinatorial file.
    """
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {version!r}", "format_version")
    kind = obj.get("kind")
    if kind == "geometric":
        return _parse_geometric(obj)
    if kind == "combinatorial":
        return _parse_combinatorial(obj)
    raise SchemaError(f"unknown kind {kind!r}", "kind")


def _parse_geometric(obj) -> GeometricDrawing:
    vertices = {}
    for i, v in enumerate(_get(obj, "vertices", "", list)):
        path = f"vertices[{i}]"
        vid = _int(_get(v, "id", path), f"{path}.id")
        if vid in vertices:
            raise SchemaError(f"duplicate vertex id {vid}", path)
        vertices[vid] = (_rat(_get(v, "x", path), f"{path}.x"), _rat(_get(v, "y", path), f"{path}.y"))
    edges = {}
    for i, e in enumerate(_get(obj, "edges", "", list)):
        path = f"edges[{i}]"
        eid = _int(_get(e, "id", path), f"{path}.id")
        if eid in edges:
            raise SchemaError(f"duplicate edge id {eid}", path)
        u = _int(_get(e, "u", path), f"{path}.u")
        v = _int(_get(e, "v", path), f"{path}.v")
        if u not in vertices or v not in vertices:
            raise SchemaError("unknown endpoint", path)
        poly = []
        for j, pt in enumerate(_get(e, "polyline", path, list)):
            ppath = f"{path}.polyline[{j}]"
            if not isinstance(pt, list) or len(pt) != 2:
                raise SchemaError("a point is a pair [x, y]", ppath)
            poly.append((_rat(pt[0], ppath + "[0]"), _rat(pt[1], ppath + "[1]")))
        edges[eid] = (u, v, poly)
    return GeometricDrawing(vertices, edges)


def _parse_routes(nodes_obj, segs_obj, net_like, path) -> dict:
    if not isinstance(nodes_obj, dict):
        raise SchemaError("routes must map edge ids to node lists", path)
    routes = {}
    for key, nodes in sorted(nodes_obj.items()):
        e = _int_key(key, path)
        if not isinstance(nodes, list) or not all(isinstance(n, int) for n in nodes):
            raise SchemaError("route must be a list of node ids", f"{path}.{key}")
        if segs_obj is not None and key in segs_obj:
            segs = segs_obj[key]
            if not isinstance(segs, list) or len(segs) != len(nodes) - 1:
                raise SchemaError("route_segments must have one entry per step", f"{path}.{key}")
        else:
            segs = []
            for a, b in zip(nodes, nodes[1:]):
                cands = net_like.get(frozenset((a, b)), [])
                if len(cands) != 1:
                    raise SchemaError(
                        f"route step {a}-{b} needs route_segments ({len(cands)} segments join these nodes)",
                        f"{path}.{key}",
                    )
                segs.append(cands[0])
        routes[e] = Route(tuple(nodes), tuple(segs))
    return routes


def _parse_combinatorial(obj):
    graph_obj = _get(obj, "graph", "", dict)
    vertices = [_int(v, "graph.vertices") for v in _get(graph_obj, "vertices", "graph", list)]
    gedges = {}
    for i, e in enumerate(_get(graph_obj, "edges", "graph", list)):
        path = f"graph.edges[{i}]"
        gedges[_int(_get(e, "id", path), path)] = (_int(_get(e, "u", path), path), _int(_get(e, "v", path), path))
    graph = GraphSpec(vertices, gedges)

    nodes = []
    for i, n in enumerate(_get(obj, "nodes", "", list)):
        path = f"nodes[{i}]"
        nid = _int(_get(n, "id", path), f"{path}.id")
        if nid != i:
            raise SchemaError("node ids must be 0..N-1 in order", path)
        kind = _get(n, "kind", path)
        if kind == VERTEX:
            nodes.append(Node(nid, VERTEX, vertex=_int(_get(n, "vertex", path), f"{path}.vertex")))
        elif kind == CROSSING:
            es = _get(n, "edges", path, list)
            if len(es) != 2:
                raise SchemaError("a crossing node names two edges", f"{path}.edges")
            nodes.append(Node(nid, CROSSING, edges=(_int(es[0], path), _int(es[1], path))))
        else:
            raise SchemaError(f"unknown node kind {kind!r}", f"{path}.kind")
    segments = []
    by_pair = {}
    for i, s in enumerate(_get(obj, "segments", "", list)):
        path = f"segments[{i}]"
        sid = _int(_get(s, "id", path), f"{path}.id")
        if sid != i:
            raise SchemaError("segment ids must be 0..S-1 in order", path)
        seg = Segment(sid, _int(_get(s, "a", path), path), _int(_get(s, "b", path), path))
        segments.append(seg)
        by_pair.setdefault(frozenset((seg.a, seg.b)), []).append(sid)
    rotation = {}
    for key, order in _get(obj, "rotation", "", dict).items():
        if not isinstance(order, list):
            raise SchemaError("rotation entries are segment lists", f"rotation.{key}")
        rotation[_int_key(key, "rotation")] = tuple(_int(s, f"rotation.{key}") for s in order)
    routes = _parse_routes(_get(obj, "routes", "", dict), obj.get("route_segments"), by_pair, "routes")
    net = NetworkN(graph, nodes, segments, rotation, routes)
    if "coords" in obj:
        net.coords = {
            _int_key(k, "coords"): (_rat(p[0], f"coords.{k}"), _rat(p[1], f"coords.{k}"))
            for k, p in _get(obj, "coords", "", dict).items()
        }
    net.check()
    state = None
    if "state" in obj:
        st = _get(obj, "state", "", dict)
        sroutes = _parse_routes(_get(st, "routes", "state", dict), st.get("route_segments"), by_pair, "state.routes")
        corridors = {}
        for key, order in _get(st, "corridor_orders", "state", dict).items():
            path = f"state.corridor_orders.{key}"
            if not isinstance(order, list) or not all(isinstance(t, list) and len(t) == 2 for t in order):
                raise SchemaError("corridor order is a list of [edge, occurrence] pairs", path)
            corridors[_int_key(key, "state.corridor_orders")] = [(_int(a, path), _int(b, path)) for a, b in order]
        for s in range(len(segments)):
            corridors.setdefault(s, [])
        epoch = _int(st.get("epoch", 0), "state.epoch")
        state = DrawingState(net, sroutes, corridors, epoch)
    return net, state


# --------------------------------------------------------------------------
# SVG

_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def planar_positions(net: NetworkN) -> dict:
    """Straight-line planar positions for the nodes of ``net``.

    Every segment is subdivided once so the graph is simple, and the layout
    follows the network's rotation system.  Components are placed side by side.
    Returns positions for nodes and for ``("mid", segment id)`` keys.
    """
    emb = nx.PlanarEmbedding()
    for n in range(len(net.nodes)):
        emb.add_node(n)
        prev = None
        for s in net.rotation.get(n, ()):
            mid = ("mid", s)
            if prev is None:
                emb.add_half_edge(n, mid)
            else:
                emb.add_half_edge(n, mid, cw=prev)
            prev = mid
    for seg in net.segments:
        mid = ("mid", seg.id)
        emb.add_half_edge(mid, seg.a)
        emb.add_half_edge(mid, seg.b, cw=seg.a)
    pos = {}
    offset = 0.0
    for comp in sorted(nx.connected_components(emb.to_undirected()), key=lambda c: min(map(str, c))):
        if len(comp) < 3:
            local = {v: (float(i), 0.0) for i, v in enumerate(sorted(comp, key=str))}
        else:
            sub_emb = nx.PlanarEmbedding()
            sub_emb.add_nodes_from(comp)
            for v in comp:
                prev = None
                for w in emb.neighbors_cw_order(v):
                    if prev is None:
                        sub_emb.add_half_edge(v, w)
                    else:
                        sub_emb.add_half_edge(v, w, ccw=prev)
                    prev = w
            local = {v: (float(x), float(y)) for v, (x, y) in nx.combinatorial_embedding_to_pos(sub_emb).items()}
        xs = [p[0] for p in local.values()]
        shift = offset - min(xs)
        for v, (x, y) in local.items():
            pos[v] = (x + shift, y)
        offset += (max(xs) - min(xs)) + 2.0
    return pos


def render_svg(state: DrawingState, width: int = 800, height: int = 600, margin: int = 20) -> bytes:
    """Static SVG of the current drawing with one ``circle.crossing`` per crossing."""
    mat = materialize_planarization(state)
    pos = planar_positions(mat) if mat.nodes else {}
    if pos:
        xs = [p[0] for p in pos.values()]
        ys = [p[1] for p in pos.values()]
        sx = (width - 2 * margin) / max(max(xs) - min(xs), 1.0)
        sy = (height - 2 * margin) / max(max(ys) - min(ys), 1.0)
        scale = min(sx, sy)
        x0, y1 = min(xs), max(ys)
    else:
        scale, x0, y1 = 1.0, 0.0, 0.0

    def xy(key):
        x, y = pos[key]
        return margin + (x - x0) * scale, margin + (y1 - y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for e, r in sorted(mat.original_routes.items()):
        pts = []
        for i, n in enumerate(r.nodes):
            pts.append(xy(n))
            if i < len(r.segs):
                pts.append(xy(("mid", r.segs[i])))
        d = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        color = _PALETTE[e % len(_PALETTE)]
        out.append(
            f'<polyline class="edge" data-edge="{e}" points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
    for n in mat.nodes:
        x, y = xy(n.id)
        if n.kind == CROSSING:
            out.append(f'<circle class="crossing" cx="{x:.2f}" cy="{y:.2f}" r="3" fill="red"/>')
        else:
            out.append(f'<circle class="vertex" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
            out.append(
                f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="10">{escape(str(n.vertex))}</text>'
            )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
