"""
Result files: sorted-key JSON, CSV tables with a schema line, SVG plots and
a run manifest recording how each output was produced.
"""

import os
import platform
import time
from logging import getLogger
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
import scipy  # noqa: E402

from ._version import __version__  # noqa: E402
from .const import CSV_SCHEMA_PREFIX, MANIFEST_FILE, PKG_NAME  # noqa: E402
from .exceptions import InvalidInputError  # noqa: E402
from .geometry import EXTERIOR, POLYGON, RAYS, DoublyConnectedDomain  # noqa: E402
from .utils import dump_json, load_yaml  # noqa: E402

_LOGGER = getLogger(PKG_NAME)

SCHEMA_VERSION = 1
matplotlib.rcParams["svg.hashsalt"] = PKG_NAME


def write_csv(table: pd.DataFrame, path: str, schema: str) -> str:
    """
    Write a table whose first line names its schema, e.g. '#schema=levels/1'.

    :param pandas.DataFrame table: rows to write
    :param str path: output file
    :param str schema: schema name
    :return str: the path written
    """
    with open(path, "w") as f:
        f.write(f"{CSV_SCHEMA_PREFIX}{schema}/{SCHEMA_VERSION}\n")
        table.to_csv(f, index=False, float_format="%.17g")
    _LOGGER.debug(f"Wrote CSV: {path}")
    return path


def read_csv(path: str) -> pd.DataFrame:
    """Read a table written by write_csv; the schema line is skipped."""
    with open(path) as f:
        first = f.readline()
    if not first.startswith(CSV_SCHEMA_PREFIX):
        raise InvalidInputError(f"{path} lacks a schema line")
    return pd.read_csv(path, skiprows=1)


def _draw_domain(ax, domain: DoublyConnectedDomain, color: str):
    b = domain.bounded
    v = b.vertices
    if b.kind == POLYGON:
        v = np.append(v, v[:1])
    ax.plot(v.real, v.imag, color=color, lw=1.2, marker="o" if v.size == 1 else None)
    if domain.unbounded.kind == EXTERIOR:
        w = domain.unbounded.polygon.vertices
        w = np.append(w, w[:1])
        ax.plot(w.real, w.imag, color=color, lw=1.2)
    elif domain.unbounded.kind == RAYS:
        _, radius = domain.extent()
        for ray in domain.unbounded.rays:
            p, q = ray.segment(2 * radius)
            ax.plot([p.real, q.real], [p.imag, q.imag], color=color, lw=1.2)


def write_svg(path: str, domains: List[DoublyConnectedDomain], curves: List[np.ndarray] = (), title: str = None) -> str:
    """
    Plot domain outlines and optional curves (e.g. images of grid lines).

    :param str path: output file
    :param list[DoublyConnectedDomain] domains: outlines to draw
    :param list[numpy.ndarray] curves: complex polylines
    :param str title: plot title
    :return str: the path written
    """
    fig, ax = plt.subplots(figsize=(6, 6))
    colors = ["black", "tab:blue", "tab:red"]
    for i, dom in enumerate(domains):
        _draw_domain(ax, dom, colors[i % len(colors)])
    for c in curves:
        c = np.asarray(c)
        c = c[np.isfinite(c)]
        ax.plot(c.real, c.imag, color="tab:gray", lw=0.5)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    _LOGGER.debug(f"Wrote SVG: {path}")
    return path


def map_grid_images(hmap, source: DoublyConnectedDomain, lines: int = 12, samples: int = 200):
    """
    Images of a grid of curves in the source under the map: circles and
    radial segments for centered annuli, horizontal and vertical lines
    otherwise. Points outside the source are dropped.
    """
    from .harmonic import centered_annulus

    annulus = centered_annulus(source)
    curves = []
    if annulus is not None:
        r, R = annulus
        t = np.linspace(0, 2 * np.pi, samples)
        for rho in np.linspace(r, R, lines):
            curves.append(rho * np.exp(1j * t))
        s = np.linspace(r, R, samples)
        for phi in np.linspace(0, 2 * np.pi, lines, endpoint=False):
            curves.append(s * np.exp(1j * phi))
    else:
        center, radius = source.extent()
        ticks = np.linspace(-2 * radius, 2 * radius, lines)
        s = np.linspace(-2 * radius, 2 * radius, samples)
        for k in ticks:
            curves.append(center + s + 1j * k)
            curves.append(center + k + 1j * s)
    images = []
    for c in curves:
        keep = source.contains(c, 1e-6)
        w = np.full(c.shape, np.nan, dtype=complex)
        if keep.any():
            with np.errstate(all="ignore"):
                w[keep] = hmap.evaluate(c[keep])
        images.append(w)
    return images


def library_versions() -> Dict[str, str]:
    return {
        PKG_NAME: __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
        "matplotlib": matplotlib.__version__,
        "python": platform.python_version(),
    }


class RunManifest(object):
    """
    Record of one command run, written as manifest.json in the output folder.

    :param str outdir: output folder
    :param str command: subcommand name
    :param list[str] argv: full argument list, enough to rerun the command
    :param dict options: resolved run configuration
    """

    def __init__(self, outdir: str, command: str, argv: List[str], options: Dict = None):
        self.outdir = outdir
        self.command = command
        self.argv = list(argv)
        self.options = options or {}
        self.inputs = {}
        self.outputs = []
        self._start = time.time()

    def path(self, name: str) -> str:
        """Output path in the run folder, registered in the manifest."""
        os.makedirs(self.outdir, exist_ok=True)
        self.outputs.append(name)
        return os.path.join(self.outdir, name)

    def add_input(self, name: str, value) -> None:
        self.inputs[name] = value

    def to_dict(self):
        return {
            "command": self.command,
            "argv": self.argv,
            "options": self.options,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
            "versions": library_versions(),
            "wall_time_s": round(time.time() - self._start, 3),
        }

    def write(self) -> str:
        os.makedirs(self.outdir, exist_ok=True)
        path = os.path.join(self.outdir, MANIFEST_FILE)
        dump_json(self.to_dict(), path)
        _LOGGER.info(f"Wrote manifest: {path}")
        return path


def load_manifest(path: str) -> Dict:
    """
    Read a manifest, given its path or the run folder holding it.

    :param str path: manifest file or run folder
    :return dict: manifest contents
    """
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_FILE)
    data = load_yaml(path)
    if not isinstance(data, dict) or "argv" not in data:
        raise InvalidInputError(f"{path} is not a run manifest")
    return data
