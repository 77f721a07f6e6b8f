import numpy as np


def open_grid(a, b, samples):
    """
    Cell midpoints of the open interval (a, b): a + (k + 1/2)(b - a)/N.
    Endpoints are never sampled.
    """
    k = np.arange(samples, dtype=float)
    return a + (k + 0.5) * (b - a) / samples


def rotate(vectors):
    """
    Anti-clockwise rotation by pi/2, J(x, y) = (-y, x), row-wise.
    """
    vectors = np.asarray(vectors, dtype=float)
    return np.stack((-vectors[..., 1], vectors[..., 0]), axis=-1)


def dot(u, v):
    return np.einsum('...i,...i->...', u, v)


def norm(vectors):
    return np.hypot(vectors[..., 0], vectors[..., 1])


def derivative(values, t):
    """
    Central differences along the grid (second order inside, one-sided
    second order at the ends).
    """
    edge_order = 2 if len(t) > 2 else 1
    return np.gradient(values, t, axis=0, edge_order=edge_order)


def window_index(t, a, b, windows):
    index = np.floor((np.asarray(t) - a) / (b - a) * windows).astype(int)
    return np.clip(index, 0, windows - 1)


def fit_order(epsilons, distances, floor=0.0):
    """
    Slope of log(distance) against log|epsilon|. Points at or below the floor
    are ignored; NaN when fewer than two points remain.
    """
    epsilons = np.abs(np.asarray(epsilons, dtype=float))
    distances = np.asarray(distances, dtype=float)
    keep = distances > floor
    if keep.sum() < 2:
        return float('nan')
    slope, _ = np.polyfit(np.log(epsilons[keep]), np.log(distances[keep]), 1)
    return float(slope)


def true_runs(mask):
    """
    Returns (start, stop) index pairs of maximal runs of True in a boolean array.
    """
    mask = np.asarray(mask, dtype=bool)
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(int)))
    return list(zip(edges[::2], edges[1::2]))
