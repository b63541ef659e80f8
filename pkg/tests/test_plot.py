import numpy as np
import pytest

from storyarcs import plot
from storyarcs.cluster import distance_matrix, ward_linkage


def test_arc_plot_is_deterministic(rng):
    y = rng.random(40)
    a, b = plot.arc_plot(y, "t"), plot.arc_plot(y.copy(), "t")
    assert a == b
    assert a.startswith("<svg") and 'width="800"' in a


def test_nan_points_split_the_line():
    svg = plot.arc_plot(np.array([0.1, 0.2, np.nan, 0.4, 0.5]))
    assert svg.count("<polyline") == 2


def test_empty_inputs_rejected():
    with pytest.raises(ValueError, match="empty"):
        plot.arc_plot(np.array([]))
    with pytest.raises(ValueError, match="linkage"):
        plot.PlotSpec(kind="dendrogram")
    with pytest.raises(ValueError, match="kind"):
        plot.PlotSpec(kind="pie", series=[np.ones(3)])


def test_cluster_mean_lengths_must_agree():
    with pytest.raises(ValueError, match="length"):
        plot.cluster_mean_plot([np.ones(3), np.ones(4)], np.ones(3))


def test_title_is_escaped():
    assert "&lt;b&gt;" in plot.arc_plot(np.ones(3), "<b>")


def test_dendrogram_plot_and_truncation(rng):
    X = rng.normal(size=(80, 10))
    link = ward_linkage(distance_matrix(X))
    labels = [f"doc{i}" for i in range(80)]
    full = plot.dendrogram_plot(link, labels)
    short = plot.dendrogram_plot(link, labels, truncate=10)
    assert full == plot.dendrogram_plot(link, labels)
    # too many leaves to label; the truncated view labels its 11 subtrees
    assert ">doc0<" not in full
    assert short.count('font-size="9"') == 11
    assert len(short) < len(full)
