"""Synthetic multi-view Gaussian blobs for smoke tests and demos."""

import numpy as np


def multiview_blobs(n=300, c=3, n_views=3, dim=10, separation=6.0, sigma=1.0, bridge=0.0, seed=0):
    """Draw ``n`` samples in ``c`` balanced clusters, observed in ``n_views`` views.

    In every view the cluster centres sit on mutually orthogonal random
    directions with pairwise distance ``separation * sigma``; samples add
    isotropic noise of scale ``sigma``.

    ``bridge`` is the fraction of samples that, independently in each view,
    are pulled to the midpoint between their own centre and another
    cluster's centre. Such samples look ambiguous in that view only, so only
    the views jointly recover their label.

    Returns ``(views, labels)`` with 1-based labels.
    """
    if c > dim:
        raise ValueError("need dim >= c for orthogonal cluster centres")
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(c), int(np.ceil(n / c)))[:n]
    rng.shuffle(labels)
    radius = separation * sigma / np.sqrt(2.0)
    views = []
    for _ in range(n_views):
        basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        centres = radius * basis[:, :c].T
        x = centres[labels] + sigma * rng.standard_normal((n, dim))
        if bridge > 0 and c > 1:
            k = int(round(bridge * n))
            idx = rng.choice(n, size=k, replace=False)
            other = (labels[idx] + rng.integers(1, c, size=k)) % c
            x[idx] = 0.5 * (centres[labels[idx]] + centres[other]) + sigma * rng.standard_normal((k, dim))
        views.append(x)
    return views, labels + 1
