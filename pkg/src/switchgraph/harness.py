"""Experiment orchestration: planted switching streams, ensembles of
spine-based predictors, majority voting, and CSV/metadata emission.

Protocol per run: a labeling of the graph is planted and replaced every
`switch_every` trials; each trial queries a uniformly random vertex; every
algorithm predicts, then the true label is revealed to every ensemble
member.  Members of the spine algorithms each draw their own independent
spanning tree/spine; predictions are aggregated by unweighted majority
vote over an odd number of members.

Seed discipline: all randomness derives from the config seed through
``numpy.random.SeedSequence([seed, tag])`` with documented tags --
0 for labelings, 1 for the query stream, 100+i for ensemble member i's
spine (shared by all spine algorithms so members see comparable trees).
Identical config => byte-identical results.csv.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._version import __version__
from .bases import BinaryTreeBasis, FullBasis
from .bounds import SegmentStats, bound_majority, scs_alpha_experiment
from .graphs import load_features, load_graph, knn_union_mst_graph
from .qbayes import QBayes
from .scs import ScsEngine
from .sgp import SgpEngine, sgp_gamma_oracle, sgp_kernel
from .spine import position_cut, sample_spine

ALGOS = ("scs-f", "scs-b", "qbay", "sgp")
SPINE_ALGOS = ("scs-f", "scs-b", "qbay")

CSV_HEADER = "trial,algo,ensemble,cum_mistakes,usec"


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed plain-text config; see parse_config for the schema."""

    graph: str  # "file:<edge-list path>" or "knn:<feature csv path>:k=<int>"
    algos: tuple
    ensembles: tuple
    T: int
    switch_every: int
    labels: str  # "classes" (needs feature classes) or "random"
    seed: int
    out: str
    allow_quadratic: bool = False

    def validate(self):
        for a in self.algos:
            if a not in ALGOS:
                raise ConfigError(f"unknown algorithm {a!r}; known: {ALGOS}")
        for r in self.ensembles:
            if r < 1 or r % 2 == 0:
                raise ConfigError(f"ensemble sizes must be odd, got {r}")
        if self.T < 1:
            raise ConfigError("T must be positive")
        if self.switch_every < 1 or self.T % self.switch_every:
            raise ConfigError("switch_every must divide T")
        if self.labels not in ("classes", "random"):
            raise ConfigError(f"unknown labels mode {self.labels!r}")
        if not (
            self.graph.startswith("file:") or self.graph.startswith("knn:")
        ):
            raise ConfigError("graph must be 'file:<path>' or 'knn:<path>:k=<int>'")
        return self


def parse_config(text):
    """Parse a ``key = value`` document ('#' comments allowed).

    Keys: graph, algos (comma list), ensembles (comma list of odd ints),
    T, switch_every, labels, seed, out, allow_quadratic (0/1, optional).
    """
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    required = {"graph", "algos", "ensembles", "T", "switch_every", "labels", "seed", "out"}
    missing = sorted(required - fields.keys())
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")
    unknown = sorted(fields.keys() - required - {"allow_quadratic"})
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        cfg = ExperimentConfig(
            graph=fields["graph"],
            algos=tuple(a.strip() for a in fields["algos"].split(",") if a.strip()),
            ensembles=tuple(int(r) for r in fields["ensembles"].split(",")),
            T=int(fields["T"]),
            switch_every=int(fields["switch_every"]),
            labels=fields["labels"],
            seed=int(fields["seed"]),
            out=fields["out"],
            allow_quadratic=bool(int(fields.get("allow_quadratic", "0"))),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config value: {exc}")
    return cfg.validate()


@dataclass(frozen=True)
class Stream:
    """T queried vertices with their true labels, plus the planted
    ground truth (one labeling per segment, by vertex)."""

    vertices: np.ndarray  # (T,) int, 1..n
    labels: np.ndarray  # (T,) in {-1, +1}
    starts: tuple  # segment-start trials
    labelings: tuple  # per-segment by-vertex labelings

    @property
    def T(self):
        return self.vertices.size


def gen_class_split_labelings(features, segments, seed):
    """Per segment, assign a uniformly random half of the class ids to +1
    and the rest to -1."""
    if features.classes is None:
        raise ConfigError("feature file has no class column")
    classes = np.unique(features.classes)
    if classes.size % 2:
        raise ConfigError(f"need an even class count, got {classes.size}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(segments):
        perm = rng.permutation(classes)
        plus = set(perm[: classes.size // 2].tolist())
        out.append(
            np.array([1 if c in plus else -1 for c in features.classes], dtype=np.int64)
        )
    return out


def gen_random_labelings(n, segments, seed):
    """Per segment, a uniformly random +/-1 labeling of n vertices."""
    rng = np.random.default_rng(seed)
    return [rng.choice(np.array([-1, 1], dtype=np.int64), size=n) for _ in range(segments)]


def gen_planted_stream(labelings, T, switch_every, seed):
    """Uniform i.i.d. vertex queries labeled by the active segment."""
    if T % switch_every:
        raise ValueError("switch_every must divide T")
    segments = T // switch_every
    if len(labelings) != segments:
        raise ValueError(f"need {segments} labelings, got {len(labelings)}")
    n = np.asarray(labelings[0]).size
    rng = np.random.default_rng(seed)
    vertices = rng.integers(0, n, size=T).astype(np.int64) + 1
    labels = np.empty(T, dtype=np.int64)
    for t in range(T):
        labels[t] = labelings[t // switch_every][vertices[t] - 1]
    starts = tuple(1 + s * switch_every for s in range(segments))
    return Stream(
        vertices=vertices,
        labels=labels,
        starts=starts,
        labelings=tuple(np.asarray(u, dtype=np.int64) for u in labelings),
    )


def majority_vote(predictions):
    """Sign of the sum of an odd number of +/-1 votes."""
    preds = list(predictions)
    if len(preds) % 2 == 0:
        raise ValueError(f"vote count must be odd, got {len(preds)}")
    return 1 if sum(preds) > 0 else -1


def _member_seed(seed, member):
    return np.random.SeedSequence([seed, 100 + member])


def _clamped_theta(phi_bar, denom):
    """Cut-rate estimate phi_bar/denom forced into the model's open
    interval (0, 0.5); zero mean cut uses the floor 1/(2*denom)."""
    theta = phi_bar / denom if phi_bar > 0 else 0.5 / denom
    return float(min(max(theta, 1e-9), 0.499))


def _run_member_stream(engine, stream, pos_of=None):
    T = stream.T
    preds = np.empty(T, dtype=np.int64)
    usec = np.empty(T, dtype=np.int64)
    for t in range(T):
        v = int(stream.vertices[t])
        q = int(pos_of[v - 1]) if pos_of is not None else v
        t0 = time.perf_counter()
        out = engine.predict(q)
        pred = out[0] if isinstance(out, tuple) else out
        engine.update(q, int(stream.labels[t]))
        usec[t] = int((time.perf_counter() - t0) * 1e6)
        preds[t] = pred
    return preds, usec


def _segment_stats(spine, stream):
    phis = tuple(
        position_cut(spine.to_positions(u)) for u in stream.labelings
    )
    return SegmentStats(
        starts=stream.starts, phis=phis, T=stream.T, n=spine.n
    )


def _spine_member_engine(algo, g, spine, stream, allow_quadratic):
    stats = _segment_stats(spine, stream)
    k = len(stream.starts)
    if algo == "scs-f":
        return ScsEngine(
            FullBasis(g.n, allow_quadratic=allow_quadratic),
            scs_alpha_experiment(stats),
        )
    if algo == "scs-b":
        return ScsEngine(BinaryTreeBasis(g.n), scs_alpha_experiment(stats))
    if algo == "qbay":
        alpha = (k - 1) / (stream.T - 1) if stream.T > 1 else 0.0
        theta = _clamped_theta(stats.phi_bar, len(g.edges))
        return QBayes(g.n, theta=theta, alpha=alpha)
    raise ValueError(f"not a spine algorithm: {algo}")


def load_config_graph(config):
    """Materialize the graph named by a config's graph field; returns
    (graph, features-or-None)."""
    kind, _, rest = config.graph.partition(":")
    if kind == "file":
        return load_graph(Path(rest).read_text()), None
    path, _, kspec = rest.partition(":")
    if not kspec.startswith("k="):
        raise ConfigError("knn graph spec must end with ':k=<int>'")
    features = load_features(Path(path).read_text())
    return knn_union_mst_graph(features, int(kspec[2:])), features


def build_stream(config, g, features):
    segments = config.T // config.switch_every
    label_seed = np.random.SeedSequence([config.seed, 0])
    if config.labels == "classes":
        labelings = gen_class_split_labelings(features, segments, label_seed)
    else:
        labelings = gen_random_labelings(g.n, segments, label_seed)
    return gen_planted_stream(
        labelings, config.T, config.switch_every,
        np.random.SeedSequence([config.seed, 1]),
    )


def run_experiment(config, g=None, features=None, stream=None):
    """Run every (algorithm, ensemble size) in the config over one planted
    stream; returns (rows, meta) where rows follow the results.csv schema
    (trial, algo, ensemble, cum_mistakes, usec).

    Ensemble r reuses members 0..r-1, so nested ensemble sizes share
    members.  Every member receives the true label every trial.  The
    majority-vote mistake bound is asserted on every run.
    """
    config.validate()
    if g is None:
        g, features = load_config_graph(config)
    if stream is None:
        stream = build_stream(config, g, features)
    r_max = max(config.ensembles)
    rows = []
    meta = {
        "version": __version__,
        "numpy": np.__version__,
        "n": g.n,
        "edges": len(g.edges),
        "T": stream.T,
        "segments": len(stream.starts),
        "seed": config.seed,
        "algos": ",".join(config.algos),
        "ensembles": ",".join(str(r) for r in config.ensembles),
        "final": {},
    }
    truth = stream.labels
    for algo in config.algos:
        if algo == "sgp":
            # deterministic given the graph: one run serves every ensemble size
            kernel = sgp_kernel(g)
            gamma = sgp_gamma_oracle(stream.labelings, kernel)
            preds, usec = _run_member_stream(SgpEngine(kernel, gamma), stream)
            member_preds = [preds] * r_max
            member_usec = [usec] * r_max
        else:
            member_preds, member_usec = [], []
            for i in range(r_max):
                rng = np.random.default_rng(_member_seed(config.seed, i))
                _, spine = sample_spine(g, rng)
                engine = _spine_member_engine(
                    algo, g, spine, stream, config.allow_quadratic
                )
                preds, usec = _run_member_stream(engine, stream, pos_of=spine.pos)
                member_preds.append(preds)
                member_usec.append(usec)
        for r in config.ensembles:
            votes = np.sum(np.stack(member_preds[:r]), axis=0)
            agg = np.where(votes > 0, 1, -1)
            mistakes = (agg != truth).astype(np.int64)
            cum = np.cumsum(mistakes)
            members_m = [int(np.sum(p != truth)) for p in member_preds[:r]]
            if int(cum[-1]) > bound_majority(members_m):
                raise RuntimeError(
                    f"majority-vote bound violated for {algo} r={r}: "
                    f"{int(cum[-1])} > {bound_majority(members_m)}"
                )
            usec_r = np.sum(np.stack(member_usec[:r]), axis=0)
            for t in range(stream.T):
                rows.append((t + 1, algo, r, int(cum[t]), int(usec_r[t])))
            meta["final"][f"{algo}/r={r}"] = int(cum[-1])
    return rows, meta


def format_results(rows):
    lines = [CSV_HEADER]
    lines.extend(
        f"{t},{algo},{r},{cum},{usec}" for t, algo, r, cum, usec in rows
    )
    return "\n".join(lines) + "\n"


def format_meta(config, meta):
    lines = ["[config]"]
    for key in (
        "graph", "algos", "ensembles", "T", "switch_every", "labels", "seed", "out",
    ):
        value = getattr(config, key)
        if isinstance(value, tuple):
            value = ",".join(str(x) for x in value)
        lines.append(f"{key} = {value}")
    lines.append("")
    lines.append("[run]")
    for key, value in meta.items():
        if key == "final":
            continue
        lines.append(f"{key} = {value}")
    lines.append("")
    lines.append("[final mistakes]")
    for key, value in sorted(meta["final"].items()):
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def write_outputs(config, rows, meta):
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(format_results(rows))
    (out / "meta.txt").write_text(format_meta(config, meta))
    return out / "results.csv", out / "meta.txt"
