"""Per-pixel features and unsupervised text/non-text pixel labeling.

The feature pair for every pixel is the local standard deviation of the
combined coefficient map over a sliding 3x3 window and the coefficient
magnitude itself.  Two-cluster Lloyd iteration splits the pixels; the
cluster with the larger mean magnitude is taken as text.
"""

from dataclasses import dataclass

import numpy as np

SD_WINDOW = 3
MAX_SWEEPS = 100


@dataclass
class FeatureMap:
    """Per-pixel clustering features: local deviation and magnitude planes."""

    sigma: np.ndarray
    combined: np.ndarray

    def points(self):
        return np.column_stack([self.sigma.ravel(), self.combined.ravel()])


def sd_map(values):
    """Local standard deviation over a sliding 3x3 window, replicate-padded.

    Follows the two-pass definition (window mean first, then mean squared
    deviation) rather than the E[x^2]-m^2 shortcut, which keeps the result
    bit-comparable with a naive nested-loop evaluation.
    """
    values = np.asarray(values, dtype=np.float64)
    padded = np.pad(values, 1, mode="edge")
    h, w = values.shape

    total = np.zeros_like(values)
    for i in range(SD_WINDOW):
        for j in range(SD_WINDOW):
            total += padded[i : i + h, j : j + w]
    mean = total / (SD_WINDOW * SD_WINDOW)

    sq = np.zeros_like(values)
    for i in range(SD_WINDOW):
        for j in range(SD_WINDOW):
            dev = padded[i : i + h, j : j + w] - mean
            sq += dev * dev
    return np.sqrt(sq / (SD_WINDOW * SD_WINDOW))


def lloyd_two_means(points, max_sweeps=MAX_SWEEPS):
    """Two-cluster Lloyd iteration with deterministic seeding.

    Centers start at the lexicographically smallest and largest points
    under the key (magnitude, deviation, raster index), so identical
    inputs always produce identical labels.  Returns ``(labels, centers,
    wcss_history)`` where the history holds the within-cluster sum of
    squares after each sweep.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]

    order = np.lexsort((np.arange(n), points[:, 0], points[:, 1]))
    lo, hi = points[order[0]], points[order[-1]]
    if np.array_equal(lo, hi):
        # every feature point identical: one degenerate cluster
        return np.zeros(n, dtype=np.int64), np.stack([lo, hi]), [0.0]

    centers = np.stack([lo, hi])
    labels = np.full(n, -1, dtype=np.int64)
    history = []
    for _ in range(max_sweeps):
        d0 = np.sum((points - centers[0]) ** 2, axis=1)
        d1 = np.sum((points - centers[1]) ** 2, axis=1)
        new_labels = (d1 < d0).astype(np.int64)
        for c in (0, 1):
            members = points[new_labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
        history.append(float(np.sum((points - centers[new_labels]) ** 2)))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, centers, history


def kmeans2(features, max_sweeps=MAX_SWEEPS):
    """Cluster ids (0/1) for every pixel of a FeatureMap."""
    labels, _, _ = lloyd_two_means(features.points(), max_sweeps=max_sweeps)
    return labels.reshape(features.combined.shape)


def select_text_cluster(labels, combined):
    """Boolean text mask: the cluster with the larger mean magnitude wins.

    Ties go to the smaller cluster (text pixels are the minority); a
    single-cluster degenerate labeling yields an empty mask.
    """
    labels = np.asarray(labels)
    combined = np.asarray(combined, dtype=np.float64)
    ids = np.unique(labels)
    if len(ids) < 2:
        return np.zeros(labels.shape, dtype=bool)
    in1 = labels == ids[1]
    mean0 = combined[~in1].mean()
    mean1 = combined[in1].mean()
    if mean1 > mean0:
        text_id = ids[1]
    elif mean0 > mean1:
        text_id = ids[0]
    else:
        text_id = ids[1] if in1.sum() < (~in1).sum() else ids[0]
    return labels == text_id


def text_pixel_mask(combined_magnitudes, max_sweeps=MAX_SWEEPS):
    """Full feature -> cluster -> mask step on a combined coefficient map."""
    features = FeatureMap(sigma=sd_map(combined_magnitudes), combined=combined_magnitudes)
    labels = kmeans2(features, max_sweeps=max_sweeps)
    return select_text_cluster(labels, features.combined)
