"""SVG and ASCII pictures of Newton diagrams (i to the right, j upward)."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .numbers import rational_str


def _extent(d):
    verts = d.vertices or ((0, 0),)
    return max(v[0] for v in verts) + 1, max(v[1] for v in verts) + 1


def render_ascii(d, support=()):
    """Grid picture: ``#`` vertices, ``*`` interior edge lattice points, ``|``/``-``
    the unbounded rays, ``o`` other support points, ``.`` empty lattice points."""
    W, H = _extent(d)
    for p in support:
        W, H = max(W, p[0] + 1), max(H, p[1] + 1)
    verts = set(d.vertices)
    edge_pts = {p for e in d.compact_edges for p in e.lattice_points()}
    top = d.vertices[0] if d.vertices else (0, 0)
    bottom = d.vertices[-1] if d.vertices else (0, 0)
    supp = set(support)
    rows = []
    for j in range(H, -1, -1):
        cells = []
        for i in range(W + 1):
            p = (i, j)
            if p in verts:
                ch = "#"
            elif p in edge_pts:
                ch = "*"
            elif i == top[0] and j > top[1]:
                ch = "|"
            elif j == bottom[1] and i > bottom[0]:
                ch = "-"
            elif p in supp:
                ch = "o"
            else:
                ch = "."
            cells.append(ch)
        rows.append("%3d " % j + " ".join(cells))
    rows.append("    " + " ".join(str(i % 10) for i in range(W + 1)))
    return "\n".join(rows) + "\n"


def render_svg(d, support=(), cell=40, title=None):
    """Standalone SVG document as bytes."""
    W, H = _extent(d)
    for p in support:
        W, H = max(W, p[0] + 1), max(H, p[1] + 1)
    m = cell
    width, height = (W + 1) * cell + 2 * m, (H + 1) * cell + 2 * m

    def X(i):
        return m + i * cell

    def Y(j):
        return height - m - j * cell

    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">'
           % (width, height, width, height)]
    if title:
        out.append("<title>%s</title>" % escape(title))
    out.append('<g stroke="#ddd" stroke-width="1">')
    for i in range(W + 2):
        out.append('<line x1="%d" y1="%d" x2="%d" y2="%d"/>' % (X(i), Y(0), X(i), Y(H + 1)))
    for j in range(H + 2):
        out.append('<line x1="%d" y1="%d" x2="%d" y2="%d"/>' % (X(0), Y(j), X(W + 1), Y(j)))
    out.append("</g>")
    out.append('<g stroke="#000" stroke-width="1.5">')
    out.append('<line x1="%d" y1="%d" x2="%d" y2="%d"/>' % (X(0), Y(0), X(W + 1), Y(0)))
    out.append('<line x1="%d" y1="%d" x2="%d" y2="%d"/>' % (X(0), Y(0), X(0), Y(H + 1)))
    out.append("</g>")
    for i in range(W + 1):
        out.append('<text x="%d" y="%d" font-size="11" text-anchor="middle">%d</text>' % (X(i), Y(0) + 16, i))
    for j in range(1, H + 1):
        out.append('<text x="%d" y="%d" font-size="11" text-anchor="end">%d</text>' % (X(0) - 6, Y(j) + 4, j))
    verts = d.vertices or ((0, 0),)
    top, bottom = verts[0], verts[-1]
    pts = ["%d,%d" % (X(top[0]), Y(H + 1))] + ["%d,%d" % (X(i), Y(j)) for i, j in verts] \
        + ["%d,%d" % (X(W + 1), Y(bottom[1]))]
    out.append('<polyline fill="none" stroke="#1f5fbf" stroke-width="3" points="%s"/>' % " ".join(pts))
    for p in support:
        out.append('<circle cx="%d" cy="%d" r="3" fill="#888"/>' % (X(p[0]), Y(p[1])))
    for i, j in verts:
        out.append('<circle cx="%d" cy="%d" r="5" fill="#c0392b"/>' % (X(i), Y(j)))
    for e in d.compact_edges:
        (i1, j1), (i2, j2) = e.start, e.end
        out.append('<text x="%d" y="%d" font-size="12" fill="#1f5fbf">%s</text>'
                   % ((X(i1) + X(i2)) // 2 + 6, (Y(j1) + Y(j2)) // 2 - 6, rational_str(e.inclination)))
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()


def render_diagram(d, fmt="ascii", support=()):
    """Rendering as bytes in ``svg`` or ``ascii`` format."""
    if fmt == "svg":
        return render_svg(d, support)
    if fmt == "ascii":
        return render_ascii(d, support).encode()
    raise ValueError("unknown format %r" % fmt)
