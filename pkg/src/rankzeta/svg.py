"""Small self-contained SVG plots: step histograms with an overlay curve, and
scatter series. Output is deterministic text."""

from xml.sax.saxutils import escape

W, H = 640, 400
MARGIN = 50
COLORS = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400")


def _fmt(v):
    return format(v, ".6g")


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi == xlo:
            xhi = xlo + 1
        if yhi == ylo:
            yhi = ylo + 1
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def x(self, v):
        return MARGIN + (v - self.xlo) / (self.xhi - self.xlo) * (W - 2 * MARGIN)

    def y(self, v):
        return H - MARGIN - (v - self.ylo) / (self.yhi - self.ylo) * (H - 2 * MARGIN)

    def axes(self, title, xlabel, ylabel):
        out = [
            f'<rect x="{MARGIN}" y="{MARGIN}" width="{W - 2 * MARGIN}" height="{H - 2 * MARGIN}" fill="none" stroke="#444"/>',
            f'<text x="{W / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
            f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>',
        ]
        for k in range(5):
            xv = self.xlo + k * (self.xhi - self.xlo) / 4
            yv = self.ylo + k * (self.yhi - self.ylo) / 4
            out.append(f'<text x="{_fmt(self.x(xv))}" y="{H - MARGIN + 14}" text-anchor="middle" font-size="10">{_fmt(xv)}</text>')
            out.append(f'<text x="{MARGIN - 4}" y="{_fmt(self.y(yv) + 3)}" text-anchor="end" font-size="10">{_fmt(yv)}</text>')
        return out


def _doc(body):
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">'
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def histogram_svg(edges, density, overlay=None, title="", xlabel="angle", ylabel="density"):
    """Step outline of ``density`` over ``edges``; ``overlay`` is [(x, y)]."""
    ymax = max(list(density) + [y for _, y in (overlay or [])] + [1e-12]) * 1.1
    fr = _Frame(float(edges[0]), float(edges[-1]), 0.0, ymax)
    body = fr.axes(title, xlabel, ylabel)
    pts = [(fr.x(edges[0]), fr.y(0))]
    for lo, hi, d in zip(edges[:-1], edges[1:], density):
        pts += [(fr.x(lo), fr.y(d)), (fr.x(hi), fr.y(d))]
    pts.append((fr.x(edges[-1]), fr.y(0)))
    body.append('<polyline fill="#9ab4dd" fill-opacity="0.5" stroke="#1f4e9c" points="'
                + " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts) + '"/>')
    if overlay:
        body.append('<polyline fill="none" stroke="#c0392b" stroke-width="2" points="'
                    + " ".join(f"{_fmt(fr.x(x))},{_fmt(fr.y(y))}" for x, y in overlay) + '"/>')
    return _doc(body)


def scatter_svg(series, title="", xlabel="i", ylabel="value"):
    """``series`` maps a legend name to [(x, y)]; one color per series."""
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    fr = _Frame(min(xs), max(xs), min(ys), max(ys))
    body = fr.axes(title, xlabel, ylabel)
    if fr.ylo < 0 < fr.yhi:
        body.append(f'<line x1="{MARGIN}" x2="{W - MARGIN}" y1="{_fmt(fr.y(0))}" y2="{_fmt(fr.y(0))}" stroke="#bbb"/>')
    for k, (name, pts) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        for x, y in pts:
            body.append(f'<circle cx="{_fmt(fr.x(x))}" cy="{_fmt(fr.y(y))}" r="1.6" fill="{color}"/>')
        body.append(f'<text x="{W - MARGIN - 4}" y="{MARGIN + 14 + 14 * k}" text-anchor="end" font-size="11" fill="{color}">{escape(str(name))}</text>')
    return _doc(body)
