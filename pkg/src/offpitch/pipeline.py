"""Stage runner: file contracts, config, manifest, locking.

Stages communicate only through files under the output directory, so
any stage can be rerun standalone once its prerequisites exist, and a
whole run is reproducible byte for byte from (inputs, config, seed).
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from importlib import metadata, resources

from . import scenario
from .communities import (
    Partition,
    community_composition,
    engagement_profile,
    louvain,
    ward_cluster,
)
from .graph import WeightedGraph, read_edge_csv, write_edge_csv, format_weight
from .influence import (
    DetectorConfig,
    HijackConfig,
    ActivismConfig,
    MegaphoneConfig,
    detect_activist_clusters,
    detect_hijacks,
    detect_megaphones,
)
from .ingest import extract_political_subset, load_lexicon, parse_stream, summarize
from .metrics import (
    CentralityTable,
    betweenness,
    filter_by_edge_weight,
    global_properties,
    k_core,
    pagerank,
    top_influencers,
    weighted_in_degree,
)
from .networks import (
    BipartiteMatrix,
    ConfigError,
    INTERACTION_KINDS,
    ProjectionConfig,
    build_hashtag_cooccurrence,
    build_interaction_network,
    build_user_hashtag_matrix,
    project_similarity,
)
from .records import parse_profile, serialize_profile, serialize_record
from .synth import generate_corpus

logger = logging.getLogger(__name__)

STAGES = (
    "synth",
    "extract",
    "networks",
    "metrics",
    "communities",
    "themes",
    "influence",
    "report",
)

LOCK_NAME = ".offpitch.lock"
MANIFEST_NAME = "manifest.json"

INTERACTION_NETWORKS = ("interaction_union",) + tuple(
    f"interaction_{k}" for k in INTERACTION_KINDS
)


class PrerequisiteError(RuntimeError):
    """A stage input that an earlier stage should have produced is missing."""


class LockError(RuntimeError):
    """Another run holds the output directory."""


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

@dataclass
class PipelineConfig:
    out_dir: Path = Path("out")
    seed: int = 0
    corpus: Path | None = None
    lexicon: Path | None = None
    profiles: Path | None = None
    annotations: Path | None = None
    affiliations: Path | None = None
    top_hashtags: int = 15
    min_hashtag_uses: int = 20
    min_user_tweets: int = 2
    alpha: float = 0.05
    permutations: int = 1000
    binary_projection: bool = False
    user_min_similarity: float = 0.45
    hashtag_min_similarity: float = 0.1
    projection_seed: int | None = None
    cooc_min_edge_weight: float = 25.0
    cooc_kcore_k: int = 25
    resolution: float = 1.0
    min_community_size: int = 10
    themes_k: int = 4
    top_k: int = 20
    detectors: DetectorConfig = field(default_factory=DetectorConfig)
    synth_n_tweets: int = 10000
    synth_n_users: int = 3000
    synth_campaigns: tuple[str, ...] = ("hijack", "activism", "megaphone")
    synth_scale: float = 1.0

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        for name in ("corpus", "lexicon", "profiles", "annotations", "affiliations"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, Path(value))
        if self.permutations < 1:
            raise ConfigError("projection permutations must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha out of (0, 1): {self.alpha}")
        for key in ("top_hashtags", "min_hashtag_uses", "min_user_tweets", "themes_k", "top_k"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1")
        if self.min_community_size < 1:
            raise ConfigError("min_community_size must be >= 1")
        if self.resolution <= 0:
            raise ConfigError("resolution must be positive")
        unknown = set(self.synth_campaigns) - {"hijack", "activism", "megaphone"}
        if unknown:
            raise ConfigError(f"unknown synth campaigns: {sorted(unknown)}")

    def to_hash_dict(self) -> dict:
        det = self.detectors
        return {
            "seed": self.seed,
            "paths": {
                name: str(getattr(self, name)) if getattr(self, name) else None
                for name in ("corpus", "lexicon", "profiles", "annotations", "affiliations")
            },
            "extract": {"top_hashtags": self.top_hashtags},
            "matrix": {
                "min_hashtag_uses": self.min_hashtag_uses,
                "min_user_tweets": self.min_user_tweets,
            },
            "projection": {
                "alpha": self.alpha,
                "permutations": self.permutations,
                "binary": self.binary_projection,
                "user_min_similarity": self.user_min_similarity,
                "hashtag_min_similarity": self.hashtag_min_similarity,
                "seed": self.projection_seed,
            },
            "cooccurrence": {
                "min_edge_weight": self.cooc_min_edge_weight,
                "kcore_k": self.cooc_kcore_k,
            },
            "communities": {
                "resolution": self.resolution,
                "min_community_size": self.min_community_size,
                "themes_k": self.themes_k,
            },
            "metrics": {"top_k": self.top_k},
            "detectors": {
                "hijack": {
                    "min_engagement": det.hijack.min_engagement,
                    "max_affiliation_ratio": det.hijack.max_affiliation_ratio,
                },
                "activism": {
                    "min_cluster_size": det.activism.min_cluster_size,
                    "min_retweet_rate_lift": det.activism.min_retweet_rate_lift,
                    "min_source_posts": det.activism.min_source_posts,
                },
                "megaphone": {
                    "top_k_in_degree": det.megaphone.top_k_in_degree,
                    "max_topical_posts": det.megaphone.max_topical_posts,
                    "min_in_degree": det.megaphone.min_in_degree,
                },
            },
            "synth": {
                "n_tweets": self.synth_n_tweets,
                "n_users": self.synth_n_users,
                "campaigns": list(self.synth_campaigns),
                "scale": self.synth_scale,
            },
        }

    def config_hash(self) -> str:
        payload = json.dumps(self.to_hash_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


_SCHEMA = {
    "paths": {"corpus", "lexicon", "profiles", "annotations", "affiliations", "out"},
    "extract": {"top_hashtags"},
    "matrix": {"min_hashtag_uses", "min_user_tweets"},
    "projection": {
        "alpha", "permutations", "binary",
        "user_min_similarity", "hashtag_min_similarity", "seed",
    },
    "cooccurrence": {"min_edge_weight", "kcore_k"},
    "communities": {"resolution", "min_community_size", "themes_k"},
    "metrics": {"top_k"},
    "detectors": {"hijack", "activism", "megaphone"},
    "synth": {"seed", "n_tweets", "n_users", "campaigns", "scale"},
}
_DETECTOR_SCHEMA = {
    "hijack": {"min_engagement", "max_affiliation_ratio"},
    "activism": {"min_cluster_size", "min_retweet_rate_lift", "min_source_posts"},
    "megaphone": {"top_k_in_degree", "max_topical_posts", "min_in_degree"},
}


def load_config(
    path=None,
    out_dir=None,
    seed=None,
) -> PipelineConfig:
    """Build a PipelineConfig from an optional TOML file plus overrides.

    Precedence for the output directory: --out override, OFFPITCH_OUT,
    config file, default "out". Relative data paths in the file resolve
    against the file's directory. Unknown keys are rejected.
    """
    data: dict = {}
    base = Path(".")
    if path is not None:
        path = Path(path)
        try:
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"bad TOML in {path}: {exc}") from None
        base = path.parent

    for section, keys in data.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(keys, dict):
            raise ConfigError(f"[{section}] must be a table")
        if section == "detectors":
            for sub, subkeys in keys.items():
                if sub not in _DETECTOR_SCHEMA:
                    raise ConfigError(f"unknown config section [detectors.{sub}]")
                extra = set(subkeys) - _DETECTOR_SCHEMA[sub]
                if extra:
                    raise ConfigError(
                        f"unknown keys in [detectors.{sub}]: {sorted(extra)}"
                    )
        else:
            extra = set(keys) - _SCHEMA[section]
            if extra:
                raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")

    def sect(name) -> dict:
        return data.get(name, {})

    def data_path(key):
        value = sect("paths").get(key)
        return (base / value) if value else None

    try:
        detectors = DetectorConfig(
            hijack=HijackConfig(**sect("detectors").get("hijack", {})),
            activism=ActivismConfig(**sect("detectors").get("activism", {})),
            megaphone=MegaphoneConfig(**sect("detectors").get("megaphone", {})),
        )
    except TypeError as exc:
        raise ConfigError(f"bad detector config: {exc}") from None

    env_out = os.environ.get("OFFPITCH_OUT")
    config_out = sect("paths").get("out")
    if out_dir is not None:
        resolved_out = Path(out_dir)
    elif env_out:
        resolved_out = Path(env_out)
    elif config_out:
        resolved_out = base / config_out
    else:
        resolved_out = Path("out")

    try:
        config = PipelineConfig(
            out_dir=resolved_out,
            seed=seed if seed is not None else int(sect("synth").get("seed", 0) or 0),
            corpus=data_path("corpus"),
            lexicon=data_path("lexicon"),
            profiles=data_path("profiles"),
            annotations=data_path("annotations"),
            affiliations=data_path("affiliations"),
            top_hashtags=int(sect("extract").get("top_hashtags", 15)),
            min_hashtag_uses=int(sect("matrix").get("min_hashtag_uses", 20)),
            min_user_tweets=int(sect("matrix").get("min_user_tweets", 2)),
            alpha=float(sect("projection").get("alpha", 0.05)),
            permutations=int(sect("projection").get("permutations", 1000)),
            binary_projection=bool(sect("projection").get("binary", False)),
            user_min_similarity=float(sect("projection").get("user_min_similarity", 0.45)),
            hashtag_min_similarity=float(
                sect("projection").get("hashtag_min_similarity", 0.1)
            ),
            projection_seed=(
                int(sect("projection")["seed"]) if "seed" in sect("projection") else None
            ),
            cooc_min_edge_weight=float(sect("cooccurrence").get("min_edge_weight", 25.0)),
            cooc_kcore_k=int(sect("cooccurrence").get("kcore_k", 25)),
            resolution=float(sect("communities").get("resolution", 1.0)),
            min_community_size=int(sect("communities").get("min_community_size", 10)),
            themes_k=int(sect("communities").get("themes_k", 4)),
            top_k=int(sect("metrics").get("top_k", 20)),
            detectors=detectors,
            synth_n_tweets=int(sect("synth").get("n_tweets", 10000)),
            synth_n_users=int(sect("synth").get("n_users", 3000)),
            synth_campaigns=tuple(
                sect("synth").get("campaigns", ["hijack", "activism", "megaphone"])
            ),
            synth_scale=float(sect("synth").get("scale", 1.0)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config value: {exc}") from None
    return config


# ---------------------------------------------------------------------------
# IO helpers
# ---------------------------------------------------------------------------

def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _write_json(path: Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _read_json(path: Path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _write_lines(path: Path, lines) -> None:
    _atomic_write(path, "".join(line + "\n" for line in lines))


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _package_version() -> str:
    try:
        return metadata.version("offpitch")
    except metadata.PackageNotFoundError:  # pragma: no cover - dev checkouts
        return "0.0.0"


def _require(path: Path, stage: str, hint: str) -> Path:
    if not path.exists():
        raise PrerequisiteError(
            f"stage '{stage}' needs {path} ({hint}); run the earlier stage first"
        )
    return path


class _Lock:
    """Exclusive marker file in the output directory."""

    def __init__(self, out_dir: Path):
        self.path = out_dir / LOCK_NAME

    def __enter__(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise LockError(
                f"{self.path} exists; another run may be active "
                "(delete the lock file if it is stale)"
            ) from None
        with os.fdopen(fd, "w") as handle:
            handle.write(str(os.getpid()))
        return self

    def __exit__(self, *exc_info):
        try:
            self.path.unlink()
        except OSError:  # pragma: no cover - nothing sane to do
            pass
        return False


def _update_manifest(config: PipelineConfig, stage: str, inputs: dict, artifacts: list) -> None:
    path = config.out_dir / MANIFEST_NAME
    manifest = _read_json(path) if path.exists() else {
        "package": "offpitch",
        "version": _package_version(),
        "stages": {},
    }

    def rel(key: str) -> str:
        # Inputs under the output tree are recorded relative to it so two
        # runs into different directories produce identical manifests.
        try:
            return str(Path(key).relative_to(config.out_dir))
        except ValueError:
            return key

    manifest["version"] = _package_version()
    manifest["stages"][stage] = {
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "inputs": {rel(str(k)): v for k, v in sorted(inputs.items())},
        "artifacts": sorted(artifacts),
    }
    _write_json(path, manifest)


# ---------------------------------------------------------------------------
# Input resolution
# ---------------------------------------------------------------------------

def _corpus_path(config: PipelineConfig) -> Path:
    return config.corpus if config.corpus else config.out_dir / "synth" / "corpus.ndjson"

def _profiles_path(config: PipelineConfig) -> Path:
    return config.profiles if config.profiles else config.out_dir / "synth" / "profiles.ndjson"

def _annotations_path(config: PipelineConfig) -> Path:
    return (
        config.annotations
        if config.annotations
        else config.out_dir / "synth" / "annotations.json"
    )

def _affiliations_path(config: PipelineConfig) -> Path:
    return (
        config.affiliations
        if config.affiliations
        else config.out_dir / "synth" / "affiliations.json"
    )


def _lexicon_for(config: PipelineConfig):
    if config.lexicon:
        return load_lexicon(config.lexicon), str(config.lexicon)
    with resources.as_file(resources.files("offpitch.data") / "lexicon.json") as path:
        return load_lexicon(path), "offpitch.data/lexicon.json"


def _load_corpus(path: Path):
    records, stats = parse_stream(path)
    if stats.malformed:
        logger.warning("%s: %d malformed lines skipped", path, stats.malformed)
    return records


def _load_profiles(path: Path) -> dict:
    profiles = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                profile = parse_profile(json.loads(line))
                profiles[profile.user_id] = profile
    return profiles


def _read_partition(config: PipelineConfig, name: str, stage: str) -> Partition:
    part_path = _require(
        config.out_dir / "communities" / f"partition_{name}.csv",
        stage,
        f"{name} partition",
    )
    mod_path = _require(
        config.out_dir / "communities" / "modularity.json", stage, "modularity summary"
    )
    assignment = {}
    with open(part_path, encoding="utf-8") as handle:
        header = handle.readline()
        if header.strip() != "node,community":
            raise PrerequisiteError(f"unexpected partition header in {part_path}")
        for line in handle:
            line = line.strip()
            if not line:
                continue
            node, comm = line.rsplit(",", 1)
            assignment[node] = int(comm)
    info = _read_json(mod_path)[name]
    return Partition(
        assignment=assignment,
        modularity=info["modularity"],
        resolution=info["resolution"],
        seed=info["seed"],
        pass_modularity=list(info["passes"]),
    )


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def _stage_synth(config: PipelineConfig) -> tuple[dict, list]:
    synth_config = scenario.default_synth_config(
        seed=config.seed,
        n_tweets=config.synth_n_tweets,
        n_users=config.synth_n_users,
        campaigns=tuple(config.synth_campaigns),
        scale=config.synth_scale,
    )
    records, profiles, truth = generate_corpus(synth_config)
    out = config.out_dir / "synth"
    _write_lines(out / "corpus.ndjson", [serialize_record(r) for r in records])
    _write_lines(out / "profiles.ndjson", [serialize_profile(p) for p in profiles])
    _write_json(out / "ground_truth.json", truth.to_json_dict())
    _write_json(
        out / "annotations.json",
        scenario.annotations_to_json(scenario.scenario_annotations()),
    )
    _write_json(
        out / "affiliations.json",
        scenario.affiliations_to_json(scenario.scenario_affiliations()),
    )
    artifacts = [
        "synth/corpus.ndjson",
        "synth/profiles.ndjson",
        "synth/ground_truth.json",
        "synth/annotations.json",
        "synth/affiliations.json",
    ]
    return {}, artifacts


def _stage_extract(config: PipelineConfig) -> tuple[dict, list]:
    corpus_path = _require(_corpus_path(config), "extract", "corpus NDJSON")
    lexicon, lexicon_name = _lexicon_for(config)
    records = _load_corpus(corpus_path)
    subset = extract_political_subset(records, lexicon)
    out = config.out_dir / "extract"
    _write_lines(out / "political.ndjson", [serialize_record(r) for r in subset])
    _write_json(
        out / "summary.json",
        {
            "corpus": summarize(records, config.top_hashtags).to_json_dict(),
            "subset": summarize(subset, config.top_hashtags).to_json_dict(),
            "lexicon": {
                "hashtags": sorted(lexicon.hashtags),
                "keywords": sorted(lexicon.keywords),
                "excluded": sorted(lexicon.excluded),
            },
        },
    )
    inputs = {str(corpus_path): _sha256(corpus_path), lexicon_name: ""}
    if config.lexicon:
        inputs[lexicon_name] = _sha256(config.lexicon)
    return inputs, ["extract/political.ndjson", "extract/summary.json"]


def _subset_records(config: PipelineConfig, stage: str):
    path = _require(
        config.out_dir / "extract" / "political.ndjson", stage, "political subset"
    )
    return _load_corpus(path), path


def _stage_networks(config: PipelineConfig) -> tuple[dict, list]:
    records, subset_path = _subset_records(config, "networks")
    out = config.out_dir / "networks"
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []

    cooc = build_hashtag_cooccurrence(records)
    write_edge_csv(cooc, out / "cooccurrence.csv")
    artifacts.append("networks/cooccurrence.csv")

    union = build_interaction_network(records)
    write_edge_csv(union, out / "interaction_union.csv")
    artifacts.append("networks/interaction_union.csv")
    for kind in INTERACTION_KINDS:
        net = build_interaction_network(records, kinds=[kind])
        write_edge_csv(net, out / f"interaction_{kind}.csv")
        artifacts.append(f"networks/interaction_{kind}.csv")

    matrix = build_user_hashtag_matrix(
        records,
        min_hashtag_uses=config.min_hashtag_uses,
        min_user_tweets=config.min_user_tweets,
    )
    _write_json(out / "matrix.json", matrix.to_json_dict())
    artifacts.append("networks/matrix.json")

    seed = config.projection_seed if config.projection_seed is not None else config.seed
    for axis, floor, name in (
        ("user", config.user_min_similarity, "user_similarity"),
        ("hashtag", config.hashtag_min_similarity, "hashtag_similarity"),
    ):
        projection = project_similarity(
            matrix,
            ProjectionConfig(
                axis=axis,
                min_similarity=floor,
                alpha=config.alpha,
                permutations=config.permutations,
                seed=seed,
                binary=config.binary_projection,
            ),
        )
        write_edge_csv(projection, out / f"{name}.csv")
        artifacts.append(f"networks/{name}.csv")

    return {str(subset_path): _sha256(subset_path)}, artifacts


def _interaction_graphs(config: PipelineConfig, stage: str) -> dict[str, WeightedGraph]:
    graphs = {}
    base = config.out_dir / "networks"
    path = _require(base / "interaction_union.csv", stage, "interaction networks")
    graphs["interaction_union"] = read_edge_csv(path, directed=True)
    for kind in INTERACTION_KINDS:
        path = _require(base / f"interaction_{kind}.csv", stage, "interaction networks")
        graphs[f"interaction_{kind}"] = read_edge_csv(path, directed=True)
    return graphs


def _similarity_graphs(config: PipelineConfig, stage: str) -> dict[str, WeightedGraph]:
    base = config.out_dir / "networks"
    out = {}
    for name in ("user_similarity", "hashtag_similarity"):
        path = _require(base / f"{name}.csv", stage, "similarity projections")
        out[name] = read_edge_csv(path, directed=False)
    return out


def _stage_metrics(config: PipelineConfig) -> tuple[dict, list]:
    base = config.out_dir / "networks"
    cooc_path = _require(base / "cooccurrence.csv", "metrics", "co-occurrence network")
    cooc = read_edge_csv(cooc_path, directed=False)
    graphs = _interaction_graphs(config, "metrics")
    sims = _similarity_graphs(config, "metrics")

    out = config.out_dir / "metrics"
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []

    cooc_filtered = filter_by_edge_weight(cooc, config.cooc_min_edge_weight)
    cooc_core = k_core(cooc, config.cooc_kcore_k)
    write_edge_csv(cooc_filtered, out / "cooccurrence_filtered.csv")
    write_edge_csv(cooc_core, out / "cooccurrence_core.csv")
    artifacts += ["metrics/cooccurrence_filtered.csv", "metrics/cooccurrence_core.csv"]

    global_metrics = {
        "cooccurrence": global_properties(cooc).to_json_dict(),
        "cooccurrence_filtered": global_properties(cooc_filtered).to_json_dict(),
        "cooccurrence_core": global_properties(cooc_core).to_json_dict(),
    }
    for name, graph in list(graphs.items()) + list(sims.items()):
        global_metrics[name] = global_properties(graph).to_json_dict()
    _write_json(out / "global.json", global_metrics)
    artifacts.append("metrics/global.json")

    profiles_path = _profiles_path(config)
    profiles = _load_profiles(profiles_path) if profiles_path.exists() else {}

    def dump_scores(name: str, metric: str, scores: dict) -> None:
        lines = ["node,score"]
        for node, score in sorted(scores.items(), key=lambda kv: (-kv[1], str(kv[0]))):
            lines.append(f"{node},{format_weight(score)}")
        _write_lines(out / f"centrality_{name}_{metric}.csv", lines)
        artifacts.append(f"metrics/centrality_{name}_{metric}.csv")
        table = CentralityTable(metric=metric, scores=scores, network=name)
        ranked = top_influencers(table, profiles, k=config.top_k)
        top_lines = ["rank,node,score,actor_type"]
        for row in ranked:
            top_lines.append(
                f"{row.rank},{row.node_id},{format_weight(row.score)},{row.actor_type.value}"
            )
        _write_lines(out / f"top_{name}_{metric}.csv", top_lines)
        artifacts.append(f"metrics/top_{name}_{metric}.csv")

    for name, graph in graphs.items():
        if graph.node_count == 0:
            continue
        dump_scores(name, "in_degree", weighted_in_degree(graph))
        dump_scores(name, "pagerank", pagerank(graph))
        dump_scores(name, "betweenness", betweenness(graph))
    for name, graph in sims.items():
        strength = {node: graph.degree(node, weighted=True) for node in graph.nodes()}
        dump_scores(name, "strength", strength)

    inputs = {str(cooc_path): _sha256(cooc_path)}
    if profiles_path.exists():
        inputs[str(profiles_path)] = _sha256(profiles_path)
    return inputs, artifacts


def _stage_communities(config: PipelineConfig) -> tuple[dict, list]:
    sims = _similarity_graphs(config, "communities")
    retweet_path = _require(
        config.out_dir / "networks" / "interaction_retweet.csv",
        "communities",
        "retweet network",
    )
    nets = dict(sims)
    nets["retweet"] = read_edge_csv(retweet_path, directed=True)

    out = config.out_dir / "communities"
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []
    mod_summary = {}
    annotations = {}
    ann_path = _annotations_path(config)
    if ann_path.exists():
        annotations = scenario.load_annotations(ann_path)

    for name, graph in nets.items():
        if graph.node_count == 0:
            # Nothing to partition; write an empty table for downstream reads.
            _write_lines(out / f"partition_{name}.csv", ["node,community"])
            mod_summary[name] = {
                "modularity": 0.0,
                "resolution": config.resolution,
                "seed": config.seed,
                "n_communities": 0,
                "passes": [],
            }
            artifacts.append(f"communities/partition_{name}.csv")
            continue
        partition = louvain(graph, resolution=config.resolution, seed=config.seed)
        lines = ["node,community"]
        for node in sorted(partition.assignment, key=str):
            lines.append(f"{node},{partition.assignment[node]}")
        _write_lines(out / f"partition_{name}.csv", lines)
        artifacts.append(f"communities/partition_{name}.csv")
        mod_summary[name] = {
            "modularity": partition.modularity,
            "resolution": partition.resolution,
            "seed": partition.seed,
            "n_communities": partition.n_communities,
            "passes": partition.pass_modularity,
        }
        # Node attribute table for rendering: category for hashtag nodes,
        # community from this partition.
        node_lines = ["id,label,category,community"]
        for node in sorted(partition.assignment, key=str):
            category = annotations.get(node).value if node in annotations else ""
            node_lines.append(f"{node},{node},{category},{partition.assignment[node]}")
        _write_lines(out / f"nodes_{name}.csv", node_lines)
        artifacts.append(f"communities/nodes_{name}.csv")

    _write_json(out / "modularity.json", mod_summary)
    artifacts.append("communities/modularity.json")
    inputs = {str(retweet_path): _sha256(retweet_path)}
    return inputs, artifacts


def _stage_themes(config: PipelineConfig) -> tuple[dict, list]:
    hashtag_partition = _read_partition(config, "hashtag_similarity", "themes")
    user_partition = _read_partition(config, "user_similarity", "themes")
    matrix_path = _require(
        config.out_dir / "networks" / "matrix.json", "themes", "user-hashtag matrix"
    )
    matrix = BipartiteMatrix.from_json_dict(_read_json(matrix_path))
    ann_path = _require(_annotations_path(config), "themes", "hashtag annotations")
    annotations = scenario.load_annotations(ann_path)

    out = config.out_dir / "themes"
    composition = community_composition(hashtag_partition, annotations)
    _write_json(out / "composition.json", [c.to_json_dict() for c in composition])
    themes = ward_cluster(composition, k=config.themes_k)
    _write_json(out / "themes.json", themes.to_json_dict())
    profiles = engagement_profile(
        user_partition,
        hashtag_partition,
        matrix,
        min_community_size=config.min_community_size,
        themes=themes,
    )
    _write_json(out / "engagement_profiles.json", [p.to_json_dict() for p in profiles])
    inputs = {str(ann_path): _sha256(ann_path), str(matrix_path): _sha256(matrix_path)}
    return inputs, [
        "themes/composition.json",
        "themes/themes.json",
        "themes/engagement_profiles.json",
    ]


def _stage_influence(config: PipelineConfig) -> tuple[dict, list]:
    records, subset_path = _subset_records(config, "influence")
    ann_path = _require(_annotations_path(config), "influence", "hashtag annotations")
    annotations = scenario.load_annotations(ann_path)
    profiles_path = _require(_profiles_path(config), "influence", "user profiles")
    profiles = _load_profiles(profiles_path)
    aff_path = _affiliations_path(config)
    affiliations = scenario.load_affiliations(aff_path) if aff_path.exists() else {}
    if not affiliations:
        logger.warning("no affiliation baselines; hijack affiliation checks unevaluated")

    base = config.out_dir / "networks"
    retweet_graph = read_edge_csv(
        _require(base / "interaction_retweet.csv", "influence", "retweet network"),
        directed=True,
    )
    subnets = {
        kind: read_edge_csv(
            _require(base / f"interaction_{kind}.csv", "influence", "interaction networks"),
            directed=True,
        )
        for kind in ("quote", "reply", "mention")
    }
    retweet_partition = _read_partition(config, "retweet", "influence")

    findings = []
    findings += detect_hijacks(records, annotations, profiles, affiliations, config.detectors)
    findings += detect_activist_clusters(
        retweet_graph, retweet_partition, records, config.detectors
    )
    findings += detect_megaphones(
        subnets, records, annotations, config.detectors, user_partition=retweet_partition
    )
    findings.sort(key=lambda f: (f.kind, -f.score, f.subject))

    out = config.out_dir / "influence"
    _write_lines(
        out / "findings.ndjson",
        [
            json.dumps(f.to_json_dict(), sort_keys=True, separators=(",", ":"))
            for f in findings
        ],
    )
    inputs = {
        str(subset_path): _sha256(subset_path),
        str(ann_path): _sha256(ann_path),
        str(profiles_path): _sha256(profiles_path),
    }
    return inputs, ["influence/findings.ndjson"]


def _stage_report(config: PipelineConfig) -> tuple[dict, list]:
    needed = {
        "summary": config.out_dir / "extract" / "summary.json",
        "global": config.out_dir / "metrics" / "global.json",
        "modularity": config.out_dir / "communities" / "modularity.json",
        "themes": config.out_dir / "themes" / "themes.json",
        "profiles": config.out_dir / "themes" / "engagement_profiles.json",
        "findings": config.out_dir / "influence" / "findings.ndjson",
    }
    for hint, path in needed.items():
        _require(path, "report", hint)

    findings = []
    with open(needed["findings"], encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                findings.append(json.loads(line))
    by_kind: dict[str, list] = {}
    for finding in findings:
        by_kind.setdefault(finding["kind"], []).append(
            {"subject": finding["subject"], "score": finding["score"]}
        )

    report = {
        "summary": _read_json(needed["summary"]),
        "networks": _read_json(needed["global"]),
        "communities": _read_json(needed["modularity"]),
        "themes": _read_json(needed["themes"]),
        "engagement_profiles": _read_json(needed["profiles"]),
        "findings": {
            "total": len(findings),
            "by_kind": {k: sorted(v, key=lambda f: (-f["score"], f["subject"]))
                        for k, v in sorted(by_kind.items())},
        },
    }
    _write_json(config.out_dir / "report" / "report.json", report)
    inputs = {str(path): _sha256(path) for path in needed.values()}
    return inputs, ["report/report.json"]


_STAGE_FUNCS = {
    "synth": _stage_synth,
    "extract": _stage_extract,
    "networks": _stage_networks,
    "metrics": _stage_metrics,
    "communities": _stage_communities,
    "themes": _stage_themes,
    "influence": _stage_influence,
    "report": _stage_report,
}


def run_stage(stage: str, config: PipelineConfig) -> list[str]:
    """Run one stage under the output lock; returns artifact paths.

    Artifacts are written atomically and the manifest entry for the
    stage is replaced on success.
    """
    if stage not in _STAGE_FUNCS:
        raise ConfigError(f"unknown stage {stage!r}; expected one of {STAGES}")
    with _Lock(config.out_dir):
        logger.info("running stage %s -> %s", stage, config.out_dir)
        inputs, artifacts = _STAGE_FUNCS[stage](config)
        _update_manifest(config, stage, inputs, artifacts)
    return artifacts


def run_all(config: PipelineConfig, only: list[str] | None = None) -> list[str]:
    """Run the full pipeline (or a subset) in stage order.

    Without a configured corpus path the run starts at synth; with one,
    synth is skipped. `only` restricts to the named stages, still in
    pipeline order.
    """
    stages = list(STAGES)
    if config.corpus is not None:
        stages.remove("synth")
    if only:
        unknown = set(only) - set(STAGES)
        if unknown:
            raise ConfigError(f"unknown stages in --stage-only: {sorted(unknown)}")
        stages = [s for s in stages if s in set(only)]
    artifacts = []
    for stage in stages:
        artifacts += run_stage(stage, config)
    return artifacts
