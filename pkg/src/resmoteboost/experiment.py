"""Replicated experiment harness behind the `rebalance run` command.

Each replication derives its own seed from the base seed with a splitmix64
mix, splits the data, applies the configured resampling or boosting method to
the training side only, and evaluates on the untouched test split. Metrics
are aggregated across replications with mean and sample standard deviation.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boosting import BoostConfig, fit_boosted, heuristic_tmax, make_learner_factory
from .data import (Dataset, RandomSource, SplitSpec, mix_seed,
                   partition_by_class, split_indices)
from .metrics import binary_metrics, confusion, replication_stats, roc_auc
from .pruning import PruningConfig
from . import samplers

DATA_LEVEL_METHODS = ("none", "smote", "borderline_smote", "adasyn", "tomek_links",
                      "random_under")
BOOSTING_METHODS = ("smoteboost", "rusboost", "re_smoteboost", "plain_boost")
METHODS = DATA_LEVEL_METHODS + BOOSTING_METHODS

_REBALANCER_FOR = {"smoteboost": "smote", "rusboost": "random_under",
                   "re_smoteboost": "double_pruning", "plain_boost": "none"}


@dataclass
class ExperimentConfig:
    method: str = "none"
    base_learner: str = "stump"
    k: int | None = None                 # default: close the gap in ~10 rounds
    k_neighbors: int = 5
    t_max: int | str = "heuristic"
    test_fraction: float = 0.2
    stratified: bool = True
    replications: int = 100
    seed: int = 42
    fresh_pools: bool = False
    cv_folds: int | None = None          # k-fold alternative to repeated splits

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")

    def to_json(self) -> dict:
        return {
            "method": self.method, "base_learner": self.base_learner, "k": self.k,
            "k_neighbors": self.k_neighbors, "t_max": self.t_max,
            "test_fraction": self.test_fraction, "stratified": self.stratified,
            "replications": self.replications, "seed": self.seed,
            "fresh_pools": self.fresh_pools, "cv_folds": self.cv_folds,
        }


def default_k(n_majority: int, n_minority: int) -> int:
    """Per-iteration sample count targeting roughly 10 boosting rounds."""
    return max(1, round((n_majority - n_minority) / 20))


def resample_train(train: Dataset, cfg: ExperimentConfig, rng: RandomSource) -> Dataset:
    """Apply a data-level method to the training set; returns the new train set."""
    if cfg.method == "none":
        return train
    part = partition_by_class(train)
    gap = len(part.majority) - len(part.minority)
    if cfg.method == "smote":
        new_min = samplers.smote(part, gap, cfg.k_neighbors, rng)
        return part.majority.concat(new_min)
    if cfg.method == "borderline_smote":
        new_min = samplers.borderline_smote(part, gap, cfg.k_neighbors, rng)
        return part.majority.concat(new_min)
    if cfg.method == "adasyn":
        new_min = samplers.adasyn(part, gap, cfg.k_neighbors, rng)
        return part.majority.concat(new_min)
    if cfg.method == "tomek_links":
        return samplers.tomek_links(part)
    if cfg.method == "random_under":
        new_maj = samplers.random_under(part, gap, rng)
        return new_maj.concat(part.minority)
    raise ValueError(f"not a data-level method: {cfg.method}")


def _boost_config(train: Dataset, cfg: ExperimentConfig) -> BoostConfig:
    part = partition_by_class(train)
    n_maj, n_min = len(part.majority), len(part.minority)
    k = cfg.k if cfg.k is not None else default_k(n_maj, n_min)
    if cfg.t_max == "heuristic":
        t_max = heuristic_tmax(n_maj, n_min, k)
    else:
        t_max = int(cfg.t_max)
    return BoostConfig(
        t_max=t_max,
        k=k,
        rebalancer=_REBALANCER_FOR[cfg.method],
        pruning=PruningConfig(k=k, k_neighbors=cfg.k_neighbors),
        fresh_pools=cfg.fresh_pools,
    )


def train_and_score(train: Dataset, test: Dataset, cfg: ExperimentConfig,
                    rng: RandomSource, capture: dict | None = None):
    """Fit the configured method and return (predictions, scores, model_info)."""
    factory = make_learner_factory(cfg.base_learner)
    if cfg.method in BOOSTING_METHODS:
        bcfg = _boost_config(train, cfg)
        ensemble = fit_boosted(train, bcfg, factory, rng, capture=capture)
        pred = ensemble.predict(test.X)
        scores = ensemble.decision_function(test.X)
        info = {"t_max": bcfg.t_max, "k": bcfg.k,
                "training_log": ensemble.training_log}
        return pred, scores, info
    resampled = resample_train(train, cfg, rng)
    if capture is not None:
        capture["X"] = resampled.X
        capture["y"] = resampled.y
        capture.setdefault("synthetics", [])
    learner = factory()
    learner.fit(resampled.X, resampled.y, np.full(len(resampled), 1.0 / len(resampled)))
    return learner.predict(test.X), learner.score(test.X), {
        "train_size_before_resampling": len(train),
        "train_size_after_resampling": len(resampled)}


def run_replication(data: Dataset, cfg: ExperimentConfig, index: int,
                    capture: dict | None = None):
    """One replication: derived seed, split, resample/train, evaluate.

    Test indices are recorded before any resampling runs, so the audit trail
    shows the test split was never touched by a resampler.
    """
    seed_i = mix_seed(cfg.seed, index)
    rng = RandomSource(seed_i)
    spec = SplitSpec(train_fraction=1.0 - cfg.test_fraction,
                     stratified=cfg.stratified, seed=seed_i)
    train_idx, test_idx = split_indices(data, spec, rng)
    train, test = data.subset(train_idx), data.subset(test_idx)
    pred, scores, info = train_and_score(train, test, cfg, rng, capture=capture)
    report = binary_metrics(confusion(pred, test.y))
    report.auc = roc_auc(scores, test.y)
    return {"replication": index, "seed": seed_i, "metrics": report.to_json(),
            "model": info, "test_indices": [int(i) for i in test_idx]}


def _cv_split_pairs(data: Dataset, folds: int, rng: RandomSource):
    """Stratified k-fold index pairs (train, test), in fold order."""
    pairs = []
    fold_of = np.empty(len(data), dtype=int)
    for cls in (-1, 1):
        idx = np.flatnonzero(data.y == cls)
        idx = idx[rng.permutation(len(idx))]
        for pos, i in enumerate(idx):
            fold_of[i] = pos % folds
    for f in range(folds):
        test_idx = np.flatnonzero(fold_of == f)
        train_idx = np.flatnonzero(fold_of != f)
        pairs.append((data.subset(train_idx), data.subset(test_idx)))
    return pairs


def run_experiment(data: Dataset, cfg: ExperimentConfig) -> dict:
    """Full replicated run; returns the report as a JSON-ready dict."""
    t0 = time.perf_counter()
    if cfg.cv_folds:
        rng = RandomSource(cfg.seed)
        pairs = _cv_split_pairs(data, cfg.cv_folds, rng)
        replications = []
        for i, (train, test) in enumerate(pairs):
            rep_rng = RandomSource(mix_seed(cfg.seed, i))
            pred, scores, info = train_and_score(train, test, cfg, rep_rng)
            report = binary_metrics(confusion(pred, test.y))
            report.auc = roc_auc(scores, test.y)
            replications.append({"replication": i, "seed": cfg.seed,
                                 "metrics": report.to_json(), "model": info})
    else:
        workers = int(os.environ.get("REBALANCE_THREADS", "1"))
        indices = range(cfg.replications)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                replications = list(pool.map(
                    lambda i: run_replication(data, cfg, i), indices))
        else:
            replications = [run_replication(data, cfg, i) for i in indices]
    elapsed = time.perf_counter() - t0

    summaries = {}
    for variant in ("positive_class", "macro"):
        for name in ("accuracy", "precision", "recall", "f1", "g_means"):
            values = [r["metrics"][variant][name] for r in replications]
            key = f"{variant}.{name}"
            if len(values) >= 2:
                summaries[key] = replication_stats(values, key).to_json()
            else:
                summaries[key] = {"metric": key, "mean": values[0], "std_dev": None, "n": 1}
    auc_values = [r["metrics"]["auc"] for r in replications]
    if len(auc_values) >= 2:
        summaries["auc"] = replication_stats(auc_values, "auc").to_json()
    else:
        summaries["auc"] = {"metric": "auc", "mean": auc_values[0], "std_dev": None, "n": 1}

    return {
        "config": cfg.to_json(),
        "replications": replications,
        "summaries": summaries,
        "timing": {"total_seconds": elapsed},
    }
