import contextlib
import typing as t

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position

import numpy as np  # pylint: disable=wrong-import-position

# With a fixed salt the ids inside the SVG, and so the whole file, are the
# same from one run to the next.
matplotlib.rcParams["svg.hashsalt"] = "sgsvp"

DEFAULT_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


class MPLBoss:
    """Draws the sgsvp figures with matplotlib and writes them as SVG.

    Usage:
        boss = MPLBoss()
        with boss.make_svg(fname, description="..."):
            boss.plot_line(x, y, label="w1")
    """

    def __init__(self, width=640, height=400):
        self.plot_count = 0
        # init private vars
        self._fig = self._axes = None
        self._ax_i = 0
        # width and height are given in pixels; mpl wants inches and dpi
        self._dpi = 96
        self.out_width = width / self._dpi
        self.out_height = height / self._dpi

    @contextlib.contextmanager
    def make_svg(self, svg_fname, description="", n_axes=1):
        self.init_svg(n_axes)
        try:
            yield
        finally:
            self.close_svg(svg_fname, description)

    def init_svg(self, n_axes=1):
        assert self._fig is None
        self._fig, axes = plt.subplots(
            1,
            n_axes,
            figsize=(self.out_width * n_axes, self.out_height),
            dpi=self._dpi,
            squeeze=False,
        )
        self._axes = list(axes[0])
        self._ax_i = 0

    def close_svg(self, svg_fname, description=""):
        for ax in self._axes:
            if ax.get_legend_handles_labels()[0]:
                ax.legend()
        self._fig.tight_layout()
        # "Date": None keeps the timestamp out of the file
        self._fig.savefig(
            svg_fname,
            format="svg",
            metadata={"Date": None, "Description": description},
        )
        plt.close(self._fig)
        self._fig = self._axes = None
        self.plot_count += 1

    @property
    def _ax(self):
        return self._axes[self._ax_i]

    def select_axes(self, i):
        self._ax_i = i

    def labels(self, title="", xlabel="", ylabel=""):
        self._ax.set_title(title)
        self._ax.set_xlabel(xlabel)
        self._ax.set_ylabel(ylabel)

    def log_y(self):
        self._ax.set_yscale("log")

    def plot_line(self, x, y, label=None, color_i=0, zorder=2):
        self._ax.plot(
            x,
            y,
            color=DEFAULT_COLORS[color_i % len(DEFAULT_COLORS)],
            label=label,
            linewidth=1.5,
            zorder=zorder,
        )

    def marker(self, x, y, gid, label=None, color_i=0, zorder=3):
        """A single point, with `gid` as the id of its group in the SVG."""
        (artist,) = self._ax.plot(
            [x],
            [y],
            marker="o",
            markersize=8,
            linestyle="none",
            markerfacecolor="none",
            markeredgecolor=DEFAULT_COLORS[color_i % len(DEFAULT_COLORS)],
            label=label,
            zorder=zorder,
        )
        artist.set_gid(gid)

    def bars(
        self,
        categories: t.Sequence[str],
        heights: t.Sequence[t.Sequence[float]],
        series_labels: t.Sequence[str],
        rotate_labels=False,
    ):
        """Grouped bar chart: one group per category, one bar per series."""
        n_series = len(heights)
        width = 0.8 / n_series
        x = np.arange(len(categories))
        for i, (series, label) in enumerate(zip(heights, series_labels)):
            self._ax.bar(
                x + (i - (n_series - 1) / 2) * width,
                series,
                width=width,
                color=DEFAULT_COLORS[i % len(DEFAULT_COLORS)],
                label=label,
            )
        self._ax.set_xticks(x)
        self._ax.set_xticklabels(
            categories,
            rotation=45 if rotate_labels else 0,
            horizontalalignment="right" if rotate_labels else "center",
        )

    def scatter(self, x, y, groups, group_labels):
        for i, label in enumerate(group_labels):
            members = np.asarray(groups) == i
            self._ax.scatter(
                np.asarray(x)[members],
                np.asarray(y)[members],
                s=12,
                color=DEFAULT_COLORS[i % len(DEFAULT_COLORS)],
                label=label,
            )
