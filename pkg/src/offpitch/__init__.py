"""Toolkit for measuring political content inside fan community corpora.

The package splits into record handling (`records`, `ingest`), network
construction (`graph`, `networks`), structure and influence analysis
(`metrics`, `communities`, `influence`), synthetic corpora with planted
campaigns (`synth`, `scenario`), and a file based stage runner
(`pipeline`, `cli`).
"""
from .records import (
    ActorType,
    Category,
    CorpusFormatError,
    CorpusSummary,
    Kind,
    Theme,
    TweetRecord,
    UserProfile,
    normalize_hashtag,
    parse_profile,
    parse_record,
    record_to_dict,
    serialize_profile,
    serialize_record,
)
from .ingest import (
    Lexicon,
    LexiconError,
    ParseStats,
    classify_political,
    extract_political_subset,
    load_lexicon,
    parse_stream,
    summarize,
)
from .graph import NodeAnnotation, WeightedGraph, read_edge_csv, write_edge_csv
from .networks import (
    BipartiteMatrix,
    ConfigError,
    ProjectionConfig,
    UndefinedSimilarityError,
    build_hashtag_cooccurrence,
    build_interaction_network,
    build_user_hashtag_matrix,
    cosine_similarity,
    project_similarity,
)
from .metrics import (
    CentralityTable,
    ConvergenceError,
    GlobalMetrics,
    RankedInfluencer,
    betweenness,
    filter_by_edge_weight,
    global_properties,
    k_core,
    pagerank,
    top_influencers,
    weighted_in_degree,
    weighted_out_degree,
)
from .communities import (
    CompositionVector,
    EngagementProfile,
    Partition,
    Sector,
    ThemeAssignment,
    community_composition,
    engagement_profile,
    louvain,
    modularity,
    ward_cluster,
)
from .influence import (
    ActivismConfig,
    AffiliationProfile,
    DetectorConfig,
    HijackConfig,
    InfluenceFinding,
    MegaphoneConfig,
    UndefinedRateError,
    audience_affiliation,
    detect_activist_clusters,
    detect_hijacks,
    detect_megaphones,
)
from .synth import (
    ActivismParams,
    CampaignSpec,
    CampaignTruth,
    CommunitySpec,
    GroundTruth,
    HijackParams,
    MegaphoneParams,
    SynthConfig,
    SynthConfigError,
    generate_corpus,
    plant_campaign,
)
from .scenario import (
    annotations_from_json,
    annotations_to_json,
    affiliations_from_json,
    affiliations_to_json,
    default_campaign_params,
    default_synth_config,
    load_affiliations,
    load_annotations,
    scenario_affiliations,
    scenario_annotations,
    starter_lexicon,
)
from .pipeline import (
    LockError,
    PipelineConfig,
    PrerequisiteError,
    STAGES,
    load_config,
    run_all,
    run_stage,
)

__all__ = [
    "ActivismConfig",
    "ActivismParams",
    "ActorType",
    "AffiliationProfile",
    "BipartiteMatrix",
    "CampaignSpec",
    "CampaignTruth",
    "Category",
    "CentralityTable",
    "CommunitySpec",
    "CompositionVector",
    "ConfigError",
    "ConvergenceError",
    "CorpusFormatError",
    "CorpusSummary",
    "DetectorConfig",
    "EngagementProfile",
    "GlobalMetrics",
    "GroundTruth",
    "HijackConfig",
    "HijackParams",
    "InfluenceFinding",
    "Kind",
    "Lexicon",
    "LexiconError",
    "LockError",
    "MegaphoneConfig",
    "MegaphoneParams",
    "NodeAnnotation",
    "ParseStats",
    "Partition",
    "PipelineConfig",
    "PrerequisiteError",
    "ProjectionConfig",
    "RankedInfluencer",
    "STAGES",
    "Sector",
    "SynthConfig",
    "SynthConfigError",
    "Theme",
    "ThemeAssignment",
    "TweetRecord",
    "UndefinedRateError",
    "UndefinedSimilarityError",
    "UserProfile",
    "WeightedGraph",
    "affiliations_from_json",
    "affiliations_to_json",
    "annotations_from_json",
    "annotations_to_json",
    "audience_affiliation",
    "betweenness",
    "build_hashtag_cooccurrence",
    "build_interaction_network",
    "build_user_hashtag_matrix",
    "classify_political",
    "community_composition",
    "cosine_similarity",
    "default_campaign_params",
    "default_synth_config",
    "detect_activist_clusters",
    "detect_hijacks",
    "detect_megaphones",
    "engagement_profile",
    "extract_political_subset",
    "filter_by_edge_weight",
    "generate_corpus",
    "global_properties",
    "k_core",
    "load_affiliations",
    "load_annotations",
    "load_config",
    "load_lexicon",
    "louvain",
    "modularity",
    "normalize_hashtag",
    "pagerank",
    "parse_profile",
    "parse_record",
    "parse_stream",
    "plant_campaign",
    "project_similarity",
    "read_edge_csv",
    "record_to_dict",
    "run_all",
    "run_stage",
    "scenario_affiliations",
    "scenario_annotations",
    "serialize_profile",
    "serialize_record",
    "starter_lexicon",
    "summarize",
    "top_influencers",
    "ward_cluster",
    "weighted_in_degree",
    "weighted_out_degree",
    "write_edge_csv",
]
