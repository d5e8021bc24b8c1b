"""Bundled synthetic scenario: two club fanbases, a politics crowd, a
regional community, and background chatter.

The scenario supplies everything the pipeline needs to run end to end
on generated data: community specs, hashtag annotations, audience
affiliation baselines, and paper-scale campaign parameter sets.
"""
from __future__ import annotations

import json
from importlib import resources

from .ingest import Lexicon, load_lexicon
from .influence import AffiliationProfile
from .records import Category
from .synth import (
    ActivismParams,
    CampaignSpec,
    CommunitySpec,
    HijackParams,
    MegaphoneParams,
    SynthConfig,
)

# Lexicon-matching tags the generator puts on political tweets.
POLITICAL_TAGS = [
    "brexit", "ukip", "trump", "edl", "nhs", "bnp", "maga", "ge2017",
    "ira", "indyref2", "putin", "euref", "snp", "labour", "donaldtrump",
]

CLUB_RED_VOCAB = [
    "redfc", "redsmatch", "derbyday", "awaydays", "kitlaunch",
    "fanzone", "redsfamily", "matchday", "reds1892", "trebletalk",
]
CLUB_BLUE_VOCAB = [
    "bluefc", "bluesmatch", "bluearmy", "cupnight", "derbyblue",
    "bluefamily", "matchnight", "transferwatch", "blues1894", "fortressblue",
]
POLITICS_VOCAB = [
    "talkradio", "phonein", "panelshow", "bigdebate", "newsnightly",
    "opinionhour", "pollwatch", "wonkchat", "commentdesk", "leafleting",
]
LOCATION_VOCAB = [
    "northtown", "millbridge", "ferrycross", "oldharbour", "granitecity",
    "moorside", "valleyend", "stonegate", "northquay", "hillfort",
]
BACKGROUND_VOCAB = [
    "teatime", "weekendvibes", "mondaymood", "banter", "memes",
    "telly", "traffic", "weathermoan", "chipshop", "quizclub",
    "gigs", "boxsets", "parkrun", "catsofweb", "dogsofweb",
]

# Club supporters retweet club content; bios mention the club at the
# same rate the hijack detector uses as its affiliation baseline.
CLUB_BIO_RATE = 0.22

DEFAULT_KIND_MIX = {"original": 0.44, "retweet": 0.35, "quote": 0.14, "reply": 0.07}


def starter_lexicon() -> Lexicon:
    """The lexicon shipped with the package."""
    with resources.as_file(resources.files("offpitch.data") / "lexicon.json") as path:
        return load_lexicon(path)


def default_communities(scale: float = 1.0) -> list[CommunitySpec]:
    def n(base):
        return max(2, round(base * scale))

    return [
        CommunitySpec(
            name="club_red",
            size=n(400),
            vocabulary=CLUB_RED_VOCAB,
            political_fraction=0.02,
            profile_keywords=["redfc"],
            profile_keyword_rate=CLUB_BIO_RATE,
        ),
        CommunitySpec(
            name="club_blue",
            size=n(350),
            vocabulary=CLUB_BLUE_VOCAB,
            political_fraction=0.02,
            profile_keywords=["bluefc"],
            profile_keyword_rate=CLUB_BIO_RATE,
        ),
        CommunitySpec(
            name="politics_corner",
            size=n(250),
            vocabulary=POLITICS_VOCAB,
            political_fraction=0.85,
        ),
        CommunitySpec(
            name="north_towns",
            size=n(200),
            vocabulary=LOCATION_VOCAB,
            political_fraction=0.05,
        ),
    ]


def default_campaign_params(kind: str):
    if kind == "hijack":
        return HijackParams(
            domain_hashtag="redfc",
            political_hashtags=["maga", "trump", "donaldtrump"],
            affiliation_keywords=["redfc"],
        )
    if kind == "activism":
        return ActivismParams(political_hashtags=["labour", "ge2017", "snp"])
    if kind == "megaphone":
        return MegaphoneParams(
            political_hashtags=["labour", "ge2017", "brexit"],
            football_hashtags=["redfc"],
        )
    raise ValueError(f"unknown campaign kind {kind!r}")


def default_synth_config(
    seed: int,
    n_tweets: int = 10000,
    n_users: int = 3000,
    campaigns: tuple[str, ...] = ("hijack", "activism", "megaphone"),
    scale: float = 1.0,
) -> SynthConfig:
    return SynthConfig(
        seed=seed,
        n_tweets=n_tweets,
        n_users=n_users,
        communities=default_communities(scale),
        kind_mix=dict(DEFAULT_KIND_MIX),
        political_hashtags=list(POLITICAL_TAGS),
        background_vocabulary=list(BACKGROUND_VOCAB),
        campaigns=[
            CampaignSpec(kind=k, params=default_campaign_params(k)) for k in campaigns
        ],
    )


def scenario_annotations() -> dict[str, Category]:
    """Hashtag -> category map covering every tag the scenario can emit."""
    out: dict[str, Category] = {}
    for tag in POLITICAL_TAGS + POLITICS_VOCAB:
        out[tag] = Category.POLITICAL
    for tag in CLUB_RED_VOCAB + CLUB_BLUE_VOCAB:
        out[tag] = Category.FOOTBALL
    for tag in LOCATION_VOCAB:
        out[tag] = Category.LOCATION
    for tag in BACKGROUND_VOCAB:
        out[tag] = Category.OTHER
    return out


def scenario_affiliations() -> dict[str, AffiliationProfile]:
    return {
        "redfc": AffiliationProfile(
            domain="redfc", keywords=["redfc"], baseline_rate=CLUB_BIO_RATE
        ),
        "bluefc": AffiliationProfile(
            domain="bluefc", keywords=["bluefc"], baseline_rate=CLUB_BIO_RATE
        ),
    }


def annotations_to_json(annotations: dict[str, Category]) -> dict:
    return {tag: cat.value for tag, cat in sorted(annotations.items())}


def annotations_from_json(payload: dict) -> dict[str, Category]:
    return {tag: Category(value) for tag, value in payload.items()}


def affiliations_to_json(affiliations: dict[str, AffiliationProfile]) -> dict:
    return {
        domain: {
            "keywords": list(p.keywords),
            "baseline_rate": p.baseline_rate,
        }
        for domain, p in sorted(affiliations.items())
    }


def affiliations_from_json(payload: dict) -> dict[str, AffiliationProfile]:
    return {
        domain: AffiliationProfile(
            domain=domain,
            keywords=list(spec["keywords"]),
            baseline_rate=float(spec["baseline_rate"]),
        )
        for domain, spec in payload.items()
    }


def load_annotations(path) -> dict[str, Category]:
    with open(path, encoding="utf-8") as handle:
        return annotations_from_json(json.load(handle))


def load_affiliations(path) -> dict[str, AffiliationProfile]:
    with open(path, encoding="utf-8") as handle:
        return affiliations_from_json(json.load(handle))
