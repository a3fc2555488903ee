"""
Outage Plots
============
Log-y outage-versus-SNR charts rendered to SVG with reportlab.graphics.

P is plotted as log10 P on a linear axis; tick labels read 1e-k.
"""

import logging
import math
from pathlib import Path

from reportlab.graphics import renderSVG
from reportlab.graphics.charts.legends import Legend
from reportlab.graphics.charts.lineplots import LinePlot
from reportlab.graphics.shapes import Drawing, String
from reportlab.lib import colors

logger = logging.getLogger(__name__)

WIDTH = 520
HEIGHT = 360

SERIES_COLORS = [
    colors.HexColor('#1f77b4'),
    colors.HexColor('#d62728'),
    colors.HexColor('#2ca02c'),
    colors.HexColor('#9467bd'),
    colors.HexColor('#ff7f0e'),
    colors.HexColor('#8c564b'),
    colors.HexColor('#17becf'),
]


def _series(curve):
    return [(p.gamma_t_db, math.log10(p.p_out)) for p in curve.valid_points()]


def _decade_label(value):
    return f'1e{int(round(value))}'


def outage_drawing(curves, title=''):
    """
    Drawing with one polyline per curve.

    Curves without a single positive probability are left out.
    """
    drawing = Drawing(WIDTH, HEIGHT)
    drawn = [(c, _series(c)) for c in curves]
    drawn = [(c, s) for c, s in drawn if s]

    if title:
        drawing.add(String(WIDTH / 2, HEIGHT - 18, title, textAnchor='middle', fontSize=11))

    if not drawn:
        drawing.add(String(WIDTH / 2, HEIGHT / 2, 'no positive outage probabilities', textAnchor='middle'))
        return drawing

    xs = [x for _, s in drawn for x, _ in s]
    ys = [y for _, s in drawn for _, y in s]

    plot = LinePlot()
    plot.x = 60
    plot.y = 50
    plot.width = WIDTH - 190
    plot.height = HEIGHT - 90
    plot.data = [s for _, s in drawn]
    plot.joinedLines = 1
    plot.xValueAxis.valueMin = min(xs)
    plot.xValueAxis.valueMax = max(xs) if max(xs) > min(xs) else min(xs) + 1
    plot.yValueAxis.valueMin = math.floor(min(ys))
    plot.yValueAxis.valueMax = max(math.ceil(max(ys)), math.floor(min(ys)) + 1)
    plot.yValueAxis.valueStep = 1
    plot.yValueAxis.labelTextFormat = _decade_label
    for i in range(len(drawn)):
        plot.lines[i].strokeColor = SERIES_COLORS[i % len(SERIES_COLORS)]
        plot.lines[i].strokeWidth = 1.2
    drawing.add(plot)

    drawing.add(String(plot.x + plot.width / 2, 15, 'transmit SNR (dB)', textAnchor='middle', fontSize=9))
    drawing.add(String(plot.x, plot.y + plot.height + 8, 'outage probability', fontSize=9))

    legend = Legend()
    legend.x = plot.x + plot.width + 15
    legend.y = plot.y + plot.height
    legend.fontSize = 8
    legend.colorNamePairs = [
        (SERIES_COLORS[i % len(SERIES_COLORS)], curve.method) for i, (curve, _) in enumerate(drawn)
    ]
    drawing.add(legend)
    return drawing


def write_outage_svg(curves, path, title=''):
    """Render curves to an SVG file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    renderSVG.drawToFile(outage_drawing(curves, title), str(path))
    logger.debug("Wrote %s", path)
    return path
