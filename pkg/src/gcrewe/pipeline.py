"""
End-to-end alignment: features -> embedding -> guiding lists -> MERGE x2 ->
alignment -> scoring, plus problem construction and the noise grid.
"""
from __future__ import annotations

import dataclasses
import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .align import AlignmentResult, STAGES, align_compressed, score
from .compress import make_guiding_lists, merge, write_supernode_table
from .embed import embed_graphs, write_embedding_csv
from .features import extract_features, write_features_csv
from .graph import Graph, load_attributes, load_edge_list
from .synth import (GroundTruth, add_attribute_noise, add_edge_noise, load_truth, permute,
                    preferential_attachment, random_attributes)

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunConfig:
    # inputs
    edgelist1: Optional[str] = None
    edgelist2: Optional[str] = None
    attrs1: Optional[str] = None
    attrs2: Optional[str] = None
    truth: Optional[str] = None
    synth_permute: bool = False
    synth_nodes: Optional[int] = None
    synth_m: int = 3
    synth_attrs: int = 0
    edge_noise: float = 0.0
    attr_noise: float = 0.0
    # features / embedding
    K: int = 2
    gamma: float = 0.01
    hidden: int = 16
    dim: Optional[int] = None
    layers: int = 2
    activation: str = "tanh"
    # compression
    phi: float = 0.2
    eta: int = 15
    lam: int = 100
    omega: float = 0.98
    # alignment
    gamma1: float = 1.0
    gamma2: float = 1.0
    alphas: tuple = (1, 5, 10)
    beta: int = 1
    kdtree: Optional[bool] = None
    # seeds and bookkeeping
    seed_graph: int = 0
    seed_weights: int = 0
    seed_perm: int = 0
    seed_noise: int = 0
    trials: int = 1
    out: Optional[str] = None

    def validate(self) -> "RunConfig":
        if not 0.0 <= self.phi < 1.0:
            raise ValueError("phi must lie in [0, 1)")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if not 0.0 < self.omega <= 1.0:
            raise ValueError("omega must lie in (0, 1]")
        if self.K < 1 or self.layers < 1 or self.beta < 1 or self.trials < 1:
            raise ValueError("K, layers, beta and trials must be >= 1")
        if not self.alphas or min(self.alphas) < 1:
            raise ValueError("alphas must be positive integers")
        for p in (self.edge_noise, self.attr_noise):
            if not 0.0 <= p <= 1.0:
                raise ValueError("noise probabilities must lie in [0, 1]")
        if self.edgelist1 is None and self.synth_nodes is None:
            raise ValueError("need --edgelist1 or --synth-nodes")
        if not self.synth_permute and self.edgelist2 is None:
            raise ValueError("need --edgelist2 or --synth-permute")
        return self

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["alphas"] = list(self.alphas)
        return d


@dataclass
class Problem:
    g1: Graph
    g2: Graph
    truth: Optional[GroundTruth] = None
    categories: Optional[list] = None


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def base_graph(cfg: RunConfig) -> tuple:
    """G1 (with attributes if configured) and the attribute category sets."""
    if cfg.edgelist1 is not None:
        g1 = load_edge_list(cfg.edgelist1)
    else:
        g1 = preferential_attachment(cfg.synth_nodes, cfg.synth_m, seed=cfg.seed_graph)
    categories = None
    if cfg.attrs1 is not None:
        g1 = load_attributes(cfg.attrs1, g1)
    elif cfg.synth_attrs > 0:
        g1 = random_attributes(g1, cfg.synth_attrs, 2, seed=[cfg.seed_graph, 1])
        categories = [["0", "1"]] * cfg.synth_attrs
    return g1, categories


def build_problem(cfg: RunConfig, trial: int = 0) -> Problem:
    """Load or synthesise the graph pair for one trial; seeds are offset by ``trial``."""
    g1, cats = _stage("load", base_graph, cfg)
    if not cfg.synth_permute:
        g2 = _stage("load", load_edge_list, cfg.edgelist2)
        if cfg.attrs2 is not None:
            g2 = _stage("load", load_attributes, cfg.attrs2, g2)
        truth = _stage("load", load_truth, cfg.truth, g1, g2) if cfg.truth else None
        return Problem(g1, g2, truth, cats)
    g2, truth = permute(g1, seed=cfg.seed_perm + trial)
    if cfg.edge_noise > 0:
        g2, truth = _stage("noise", add_edge_noise, g2, truth, cfg.edge_noise, seed=cfg.seed_noise + trial)
    if cfg.attr_noise > 0 and g2.attributes is not None:
        g2 = _stage("noise", add_attribute_noise, g2, cfg.attr_noise, cats, seed=[cfg.seed_noise + trial, 1])
    return Problem(g1, g2, truth, cats)


def use_kdtree(cfg: RunConfig, attributed: bool) -> bool:
    return (not attributed) if cfg.kdtree is None else cfg.kdtree


def align_graphs(g1: Graph, g2: Graph, cfg: RunConfig, truth: Optional[GroundTruth] = None,
                 trial: int = 0) -> tuple:
    """Run the full pipeline on a graph pair.

    Returns ``(AlignmentResult, info)``; ``info`` carries the intermediate
    objects (features, embedding, guiding lists, compressed graphs) and sizes.
    """
    timings = {}
    t_total = time.perf_counter()

    t = time.perf_counter()
    fm = _stage("features", extract_features, g1, g2, cfg.K, cfg.gamma)
    timings["features"] = time.perf_counter() - t

    t = time.perf_counter()
    emb, weights = _stage("embed", embed_graphs, g1, g2, fm.structural, cfg.hidden, cfg.dim,
                          cfg.layers, cfg.seed_weights + trial, cfg.activation)
    timings["embed"] = time.perf_counter() - t

    t = time.perf_counter()
    if cfg.phi > 0:
        Q1, Q2 = _stage("guiding", make_guiding_lists, g1, g2, emb.z1, emb.z2, cfg.eta, cfg.omega, cfg.lam)
    else:
        Q1, Q2 = [], []
    timings["guiding"] = time.perf_counter() - t

    t = time.perf_counter()
    cg1 = _stage("compress", merge, g1, Q1, cfg.phi)
    cg2 = _stage("compress", merge, g2, Q2, cfg.phi)
    timings["compress"] = time.perf_counter() - t

    t = time.perf_counter()
    y1 = y2 = None
    if fm.attribute is not None:
        y1, y2 = fm.split(fm.attribute)
    mode = "kdtree" if use_kdtree(cfg, y1 is not None) else "exhaustive"
    result = _stage("align", align_compressed, cg1, cg2, emb.z1, emb.z2, y1, y2, cfg.gamma1, cfg.gamma2,
                    max(cfg.alphas), cfg.beta, mode)
    timings["align"] = time.perf_counter() - t

    t = time.perf_counter()
    if truth is not None:
        result.metrics = _stage("score", score, result, truth, cfg.alphas)
    timings["score"] = time.perf_counter() - t

    timings["total"] = time.perf_counter() - t_total
    timings["align_breakdown"] = result.timings
    result.timings = timings
    info = {
        "features": fm, "embedding": emb, "weights": weights, "guides": (Q1, Q2),
        "compressed": (cg1, cg2), "mode": mode,
    }
    return result, info


def compression_summary(cg) -> dict:
    return {
        "nodes": cg.n,
        "compressed_nodes": cg.node_count,
        "uncompressed": len(cg.uncompressed()),
        "supernodes": len(cg.supernodes()),
        "ratio": round(cg.ratio, 12),
        "merge_steps": cg.steps,
        "under_compressed": cg.under_compressed,
    }


def make_report(problem: Problem, result: AlignmentResult, info: dict, cfg: RunConfig) -> dict:
    """JSON-ready report; everything except ``timings`` is deterministic."""
    g1, g2 = problem.g1, problem.g2
    cg1, cg2 = info["compressed"]
    cands = {}
    for v, lab in enumerate(g1.labels):
        row = []
        for u, s in zip(result.candidates[v], result.scores[v]):
            if u >= 0:
                row.append([g2.labels[u], float(s)])
        cands[lab] = row
    stage_counts = {name: int((result.stage == i).sum()) for i, name in enumerate(STAGES)}
    emb = info["embedding"]
    return {
        "config": cfg.to_dict(),
        "graphs": {
            "g1": {"nodes": g1.node_count, "edges": g1.edge_count, "attributes": g1.attribute_arity},
            "g2": {"nodes": g2.node_count, "edges": g2.edge_count, "attributes": g2.attribute_arity},
        },
        "embedding": {"m": info["features"].m, "p": emb.p, "layers": info["weights"].layers,
                      "seed": info["weights"].seed},
        "guiding_list_size": len(info["guides"][0]),
        "compression": {"g1": compression_summary(cg1), "g2": compression_summary(cg2)},
        "alignment_mode": info["mode"],
        "stage_counts": stage_counts,
        "notes": list(result.notes),
        "warnings": [f"{tag}: under-compressed (ratio {cg.ratio:.4f} < phi {cfg.phi})"
                     for tag, cg in (("g1", cg1), ("g2", cg2)) if cg.under_compressed],
        "metrics": result.metrics,
        "candidates": cands,
        "timings": result.timings,
    }


def write_dumps(problem: Problem, info: dict, dumps: dict) -> None:
    """Debug dumps keyed ``features`` / ``embeddings`` / ``supernodes`` -> path."""
    if dumps.get("features"):
        write_features_csv(info["features"], problem.g1, problem.g2, dumps["features"])
    if dumps.get("embeddings"):
        write_embedding_csv(info["embedding"], problem.g1, problem.g2, dumps["embeddings"])
    if dumps.get("supernodes"):
        base = str(dumps["supernodes"])
        for tag, cg in zip(("1", "2"), info["compressed"]):
            write_supernode_table(cg, f"{base}.g{tag}")


def run_align(cfg: RunConfig, dumps: Optional[dict] = None) -> dict:
    """Run ``cfg.trials`` trials; the report holds the first trial's candidates
    plus per-trial and mean metrics."""
    cfg.validate()
    report = None
    per_trial = []
    for trial in range(cfg.trials):
        problem = build_problem(cfg, trial)
        result, info = align_graphs(problem.g1, problem.g2, cfg, problem.truth, trial)
        per_trial.append(dict(result.metrics, runtime=result.timings["total"]))
        if report is None:
            report = make_report(problem, result, info, cfg)
            if dumps:
                write_dumps(problem, info, dumps)
    if cfg.trials > 1 and per_trial[0].get("accuracy") is not None:
        keys = [k for k in per_trial[0] if k not in ("runtime",)]
        report["trials"] = {
            "metrics": [{k: m[k] for k in keys} for m in per_trial],
            "mean": {k: float(np.mean([m[k] for m in per_trial])) for k in keys},
        }
    return report


def incremental_noise(levels: Sequence[float]) -> list:
    """Per-step removal probabilities whose cumulative effect reaches each level.

    An edge survives every step with probability ``1 - level``.
    """
    out, prev = [], 0.0
    for lv in levels:
        if lv < prev:
            raise ValueError("noise levels must be nondecreasing")
        if lv > 1.0:
            raise ValueError("noise levels must lie in [0, 1]")
        out.append(0.0 if lv == prev else (1.0 if prev == 1.0 or lv == 1.0 else 1.0 - (1.0 - lv) / (1.0 - prev)))
        prev = lv
    return out


def run_grid(cfg: RunConfig, levels: Sequence[float], trials: Optional[int] = None) -> list:
    """Edge-noise sweep on a permuted graph; noise accumulates across levels.

    Returns one dict per level with metrics averaged over trials.
    """
    if not cfg.synth_permute:
        raise ValueError("the noise grid needs --synth-permute")
    steps = incremental_noise(levels)
    trials = cfg.trials if trials is None else trials
    base = dataclasses.replace(cfg, edge_noise=0.0)
    base.validate()
    acc = [[] for _ in levels]
    for trial in range(trials):
        problem = build_problem(base, trial)
        g2, truth = problem.g2, problem.truth
        for i, q in enumerate(steps):
            if q > 0:
                g2, truth = add_edge_noise(g2, truth, q, seed=[cfg.seed_noise + trial, i])
            g2n = g2
            if cfg.attr_noise > 0 and g2.attributes is not None:
                g2n = add_attribute_noise(g2, cfg.attr_noise, problem.categories, seed=[cfg.seed_noise + trial, i, 1])
            result, _ = align_graphs(problem.g1, g2n, cfg, truth, trial)
            acc[i].append(dict(result.metrics, runtime=result.timings["total"]))
    rows = []
    for lv, ms in zip(levels, acc):
        row = {"noise": lv}
        for k in ms[0]:
            if k != "evaluated":
                row[k] = float(np.mean([m[k] for m in ms]))
        row["trials"] = len(ms)
        rows.append(row)
    return rows
