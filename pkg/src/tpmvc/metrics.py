"""External clustering quality scores: accuracy, NMI and purity."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import EmptyTable


def _relabel(labels):
    labels = np.asarray(labels).ravel()
    if labels.size == 0:
        raise ValueError("label vector is empty")
    uniq, inv = np.unique(labels, return_inverse=True)
    return uniq, inv


def contingency(pred, truth):
    """Counts table with predicted clusters as rows and true classes as columns."""
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"label vectors differ in length: {pred.size} vs {truth.size}")
    _, pi = _relabel(pred)
    _, ti = _relabel(truth)
    table = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(table, (pi, ti), 1)
    return table


def hungarian_match(table):
    """Optimal one-to-one pairing of predicted clusters with true classes.

    Returns ``(mapping, matched)`` where ``mapping[i]`` is the class matched
    to predicted cluster ``i`` (``-1`` if the table has more clusters than
    classes and ``i`` is left over) and ``matched`` is the total count on the
    matched cells.
    """
    table = np.asarray(table)
    if table.size == 0:
        raise EmptyTable("contingency table is empty")
    rows, cols = linear_sum_assignment(table, maximize=True)
    mapping = np.full(table.shape[0], -1, dtype=int)
    mapping[rows] = cols
    return mapping, int(table[rows, cols].sum())


def acc(pred, truth):
    table = contingency(pred, truth)
    _, matched = hungarian_match(table)
    return matched / table.sum()


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth):
    """Mutual information over the geometric mean of the two entropies (natural log).

    When either partition has zero entropy the score is 1 if both consist of
    a single cluster and 0 otherwise.
    """
    table = contingency(pred, truth)
    n = table.sum()
    hp = _entropy(table.sum(axis=1), n)
    ht = _entropy(table.sum(axis=0), n)
    if hp == 0.0 or ht == 0.0:
        return 1.0 if table.shape == (1, 1) else 0.0
    pij = table / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0)) / n**2
    nz = pij > 0
    mi = float(np.sum(pij[nz] * np.log(pij[nz] / outer[nz])))
    return min(max(mi / np.sqrt(hp * ht), 0.0), 1.0)


def purity(pred, truth):
    table = contingency(pred, truth)
    return table.max(axis=1).sum() / table.sum()


def evaluate(pred, truth):
    return {"acc": float(acc(pred, truth)), "nmi": float(nmi(pred, truth)), "purity": float(purity(pred, truth))}
