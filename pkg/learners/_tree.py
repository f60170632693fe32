"""Second-order regression trees grown level by level with exact greedy splits.

Columns are sorted once per fit; each tree keeps, per feature, the training
rows in value order grouped by their current node, so every level evaluates
all split candidates of all nodes with a handful of array operations.
NaN feature values sort last and are routed by a learned default direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class TreeParams:
    max_depth: int
    learning_rate: float
    min_child_weight: float
    reg_lambda: float
    gamma: float


@dataclass
class Tree:
    """Array-encoded binary tree; feature == -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    default_left: np.ndarray
    value: np.ndarray
    gains: dict[int, float] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            internal = self.feature[node] >= 0
            if not internal.any():
                break
            idx = rows[internal]
            cur = node[idx]
            x = X[idx, self.feature[cur]]
            go_left = np.where(np.isnan(x), self.default_left[cur], x < self.threshold[cur])
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
        return self.value[node]

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "default_left": self.default_left.astype(bool).tolist(),
            "value": self.value.tolist(),
            "gains": {str(k): v for k, v in sorted(self.gains.items())},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Tree":
        return cls(
            feature=np.asarray(data["feature"], dtype=np.int64),
            threshold=np.asarray(data["threshold"], dtype=np.float64),
            left=np.asarray(data["left"], dtype=np.int64),
            right=np.asarray(data["right"], dtype=np.int64),
            default_left=np.asarray(data["default_left"], dtype=bool),
            value=np.asarray(data["value"], dtype=np.float64),
            gains={int(k): float(v) for k, v in data.get("gains", {}).items()},
        )


def presort(X: np.ndarray) -> np.ndarray:
    """Per-feature row order (F x n), NaN last; computed once per fit."""
    return np.argsort(X, axis=0, kind="stable").T.copy()


def _score(G: np.ndarray, H: np.ndarray, lam: float) -> np.ndarray:
    return G * G / (H + lam)


class _Builder:
    def __init__(self, params: TreeParams) -> None:
        self.p = params
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.default_left: list[bool] = []
        self.value: list[float] = []
        self.gains: dict[int, float] = {}

    def new_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.default_left.append(True)
        self.value.append(0.0)
        return len(self.feature) - 1

    def set_leaf(self, node: int, G: float, H: float) -> None:
        self.value[node] = -G / (H + self.p.reg_lambda) * self.p.learning_rate

    def tree(self) -> Tree:
        return Tree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            default_left=np.asarray(self.default_left, dtype=bool),
            value=np.asarray(self.value, dtype=np.float64),
            gains=self.gains,
        )


def build_tree(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    order: np.ndarray,
    params: TreeParams,
    rows: np.ndarray | None = None,
) -> Tree:
    """Grow one tree on gradients g and hessians h.

    `order` comes from presort(X); `rows` restricts the tree to a subsample.
    Splits require gain - gamma > 0 and hessian mass >= min_child_weight on
    both sides. Ties go to the lowest feature index, then the lowest value.
    """
    n, n_features = X.shape
    lam = params.reg_lambda
    mcw = params.min_child_weight
    builder = _Builder(params)
    root = builder.new_node()

    in_tree = np.zeros(n, dtype=bool)
    if rows is None:
        in_tree[:] = True
    else:
        in_tree[rows] = True
    n_rows = int(in_tree.sum())
    # S[f] lists this tree's rows in ascending X[:, f] order
    S = order[in_tree[order]].reshape(n_features, n_rows)
    node_of = np.full(n, -1, dtype=np.int64)
    node_of[in_tree] = root
    active = [root]

    for depth in range(params.max_depth + 1):
        local = {node: i for i, node in enumerate(active)}
        k = len(active)
        lookup = np.full(len(builder.feature), -1, dtype=np.int64)
        for node, i in local.items():
            lookup[node] = i

        row_nodes = node_of[S[0]]
        G_tot = np.bincount(lookup[row_nodes], weights=g[S[0]], minlength=k)
        H_tot = np.bincount(lookup[row_nodes], weights=h[S[0]], minlength=k)
        if depth == params.max_depth or S.shape[1] == 0:
            for node, i in local.items():
                builder.set_leaf(node, G_tot[i], H_tot[i])
            break

        key = lookup[node_of[S]]
        regroup = np.argsort(key, axis=1, kind="stable")
        S = np.take_along_axis(S, regroup, axis=1)
        key = np.take_along_axis(key, regroup, axis=1)
        seg = key[0]
        counts = np.bincount(seg, minlength=k)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])

        Xs = np.take_along_axis(X.T, S, axis=1)
        missing = np.isnan(Xs)
        Gs = np.where(missing, 0.0, g[S])
        Hs = np.where(missing, 0.0, h[S])
        CG = np.cumsum(Gs, axis=1)
        CH = np.cumsum(Hs, axis=1)
        pad_G = np.concatenate([np.zeros((n_features, 1)), CG], axis=1)
        pad_H = np.concatenate([np.zeros((n_features, 1)), CH], axis=1)
        ends = starts + counts
        seg_start = starts[seg]
        seg_end = ends[seg]
        GL = CG - pad_G[:, seg_start]
        HL = CH - pad_H[:, seg_start]
        G_seg = pad_G[:, seg_end] - pad_G[:, seg_start]
        H_seg = pad_H[:, seg_end] - pad_H[:, seg_start]
        GR = G_seg - GL
        HR = H_seg - HL
        G_node = G_tot[seg][None, :]
        H_node = H_tot[seg][None, :]
        present = np.cumsum(~missing, axis=1)
        pad_n = np.concatenate([np.zeros((n_features, 1), dtype=present.dtype), present], axis=1)
        has_missing = (pad_n[:, seg_end] - pad_n[:, seg_start]) < counts[seg][None, :]
        G_miss = np.where(has_missing, G_node - G_seg, 0.0)
        H_miss = np.where(has_missing, H_node - H_seg, 0.0)

        nxt = np.empty_like(Xs)
        nxt[:, :-1] = Xs[:, 1:]
        nxt[:, -1] = np.nan
        same_seg = np.zeros(Xs.shape[1], dtype=bool)
        same_seg[:-1] = seg[:-1] == seg[1:]
        with np.errstate(invalid="ignore"):
            valid = same_seg[None, :] & ~missing & ~np.isnan(nxt) & (nxt > Xs)

        parent = _score(G_node, H_node, lam)
        gain_l = 0.5 * (_score(GL + G_miss, HL + H_miss, lam) + _score(GR, HR, lam) - parent)
        gain_r = 0.5 * (_score(GL, HL, lam) + _score(GR + G_miss, HR + H_miss, lam) - parent)
        ok_l = valid & (HL + H_miss >= mcw) & (HR >= mcw)
        ok_r = valid & (HL >= mcw) & (HR + H_miss >= mcw)
        gain_l = np.where(ok_l, gain_l, -np.inf)
        gain_r = np.where(ok_r, gain_r, -np.inf)
        pick_left = gain_l >= gain_r
        gain = np.where(pick_left, gain_l, gain_r)

        next_active: list[int] = []
        split_info: dict[int, tuple[int, float, bool, int, int]] = {}
        for node, i in local.items():
            s, e = starts[i], ends[i]
            if e - s < 2:
                builder.set_leaf(node, G_tot[i], H_tot[i])
                continue
            block = gain[:, s:e]
            flat = int(np.argmax(block))
            f, pos = divmod(flat, e - s)
            best = float(block[f, pos])
            if not np.isfinite(best) or best - params.gamma <= 0:
                builder.set_leaf(node, G_tot[i], H_tot[i])
                continue
            lo = float(Xs[f, s + pos])
            hi = float(Xs[f, s + pos + 1])
            thr = lo + (hi - lo) / 2.0
            if not lo < thr <= hi:
                thr = hi
            default_left = bool(pick_left[f, s + pos]) if has_missing[f, s + pos] else True
            left, right = builder.new_node(), builder.new_node()
            builder.feature[node] = int(f)
            builder.threshold[node] = thr
            builder.default_left[node] = default_left
            builder.left[node] = left
            builder.right[node] = right
            builder.gains[int(f)] = builder.gains.get(int(f), 0.0) + best
            split_info[node] = (int(f), thr, default_left, left, right)
            next_active += [left, right]

        if not split_info:
            break
        for node, (f, thr, default_left, left, right) in split_info.items():
            members = np.flatnonzero(node_of == node)
            x = X[members, f]
            go_left = np.where(np.isnan(x), default_left, x < thr)
            node_of[members] = np.where(go_left, left, right)
        finished = ~np.isin(node_of, next_active)
        node_of[finished] = -1
        keep = node_of[S] >= 0
        S = S[keep].reshape(n_features, -1)
        active = next_active
    return builder.tree()
