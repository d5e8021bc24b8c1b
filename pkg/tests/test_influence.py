from datetime import datetime, timezone

import pytest

from offpitch import (
    ActivismConfig,
    AffiliationProfile,
    Category,
    DetectorConfig,
    HijackConfig,
    Kind,
    MegaphoneConfig,
    TweetRecord,
    UndefinedRateError,
    UserProfile,
    WeightedGraph,
    audience_affiliation,
    detect_activist_clusters,
    detect_hijacks,
    detect_megaphones,
)
from offpitch.communities import Partition

TS = datetime(2017, 6, 1, tzinfo=timezone.utc)


def tweet(tid, uid, kind=Kind.ORIGINAL, tags=(), target_tweet=None, target_user=None,
          mentions=()):
    return TweetRecord(
        tweet_id=tid,
        user_id=uid,
        timestamp=TS,
        text="",
        hashtags=list(tags),
        kind=kind,
        target_tweet_id=target_tweet,
        target_user_id=target_user,
        mentioned_user_ids=list(mentions),
    )


ANNOTATIONS = {"mufc": Category.FOOTBALL, "brexit": Category.POLITICAL}
MUFC_PROFILE = AffiliationProfile(
    domain="mufc", keywords=["united", "old trafford"], baseline_rate=0.8
)


def hijack_corpus(n_retweets, retweeter_bio="", n_quotes=0):
    records = [tweet("t1", "author", tags=["mufc", "brexit"])]
    profiles = {}
    for i in range(n_retweets):
        uid = f"rt{i}"
        records.append(tweet(f"r{i}", uid, Kind.RETWEET, target_tweet="t1",
                             target_user="author"))
        profiles[uid] = UserProfile(user_id=uid, description=retweeter_bio)
    for i in range(n_quotes):
        records.append(tweet(f"q{i}", f"qu{i}", Kind.QUOTE, target_tweet="t1",
                             target_user="author"))
    return records, profiles


class TestAudienceAffiliation:
    def test_rate_over_profiled_retweeters(self):
        records, profiles = hijack_corpus(4, retweeter_bio="lifelong united fan")
        profiles["rt0"] = UserProfile(user_id="rt0", description="politics only")
        assert audience_affiliation("t1", records, profiles, MUFC_PROFILE) == 0.75

    def test_unprofiled_retweeters_excluded(self):
        records, profiles = hijack_corpus(4, retweeter_bio="united till i die")
        del profiles["rt0"]
        del profiles["rt1"]
        assert audience_affiliation("t1", records, profiles, MUFC_PROFILE) == 1.0

    def test_no_profiled_retweeters_raises(self):
        records, _ = hijack_corpus(3)
        with pytest.raises(UndefinedRateError):
            audience_affiliation("t1", records, {}, MUFC_PROFILE)

    def test_repeat_retweeter_counted_once(self):
        records, profiles = hijack_corpus(2, retweeter_bio="united")
        records.append(tweet("r9", "rt0", Kind.RETWEET, target_tweet="t1"))
        assert audience_affiliation("t1", records, profiles, MUFC_PROFILE) == 1.0

    def test_keyword_match_is_word_bounded(self):
        profile = AffiliationProfile(domain="mufc", keywords=["united"],
                                     baseline_rate=0.5)
        assert profile.matches("I support United FC")
        assert not profile.matches("reunited with friends")

    def test_baseline_rate_validated(self):
        with pytest.raises(ValueError):
            AffiliationProfile(domain="x", keywords=[], baseline_rate=1.5)


class TestDetectHijacks:
    def config(self, **kw):
        return DetectorConfig(hijack=HijackConfig(**kw))

    def test_flags_low_affiliation_high_engagement(self):
        records, profiles = hijack_corpus(10, retweeter_bio="brexit now")
        cfg = self.config(min_engagement=10, max_affiliation_ratio=0.25)
        found = detect_hijacks(records, ANNOTATIONS, profiles,
                               {"mufc": MUFC_PROFILE}, cfg)
        assert [f.subject for f in found] == ["t1"]
        f = found[0]
        assert f.kind == "hijack"
        assert f.evidence["affiliation_rate"] == 0.0
        assert f.evidence["affiliation_evaluated"] is True
        assert f.score == 10.0

    def test_affiliated_audience_not_flagged(self):
        records, profiles = hijack_corpus(10, retweeter_bio="united forever")
        cfg = self.config(min_engagement=10, max_affiliation_ratio=0.25)
        assert detect_hijacks(records, ANNOTATIONS, profiles,
                              {"mufc": MUFC_PROFILE}, cfg) == []

    def test_engagement_threshold_monotone(self):
        records, profiles = hijack_corpus(9, retweeter_bio="brexit")
        loose = detect_hijacks(records, ANNOTATIONS, profiles, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=9))
        tight = detect_hijacks(records, ANNOTATIONS, profiles, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=10))
        assert [f.subject for f in loose] == ["t1"]
        assert tight == []

    def test_quotes_count_toward_engagement(self):
        records, profiles = hijack_corpus(5, retweeter_bio="brexit", n_quotes=5)
        found = detect_hijacks(records, ANNOTATIONS, profiles, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=10))
        assert [f.subject for f in found] == ["t1"]
        assert found[0].evidence["quotes"] == 5

    def test_quote_only_engagement_never_qualifies(self):
        records, profiles = hijack_corpus(0, n_quotes=12)
        found = detect_hijacks(records, ANNOTATIONS, profiles, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=10))
        assert found == []

    def test_needs_both_hashtag_families(self):
        records, profiles = hijack_corpus(10, retweeter_bio="brexit")
        records[0] = tweet("t1", "author", tags=["brexit"])
        cfg = self.config(min_engagement=5)
        assert detect_hijacks(records, ANNOTATIONS, profiles,
                              {"mufc": MUFC_PROFILE}, cfg) == []

    def test_unevaluated_when_no_profiled_retweeters(self):
        records, _ = hijack_corpus(10)
        found = detect_hijacks(records, ANNOTATIONS, {}, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=10))
        assert [f.subject for f in found] == ["t1"]
        assert found[0].evidence["affiliation_evaluated"] is False
        assert found[0].evidence["affiliation_rate"] is None

    def test_unevaluated_when_no_baseline_for_domain(self):
        records, profiles = hijack_corpus(10, retweeter_bio="united")
        found = detect_hijacks(records, ANNOTATIONS, profiles, {},
                               self.config(min_engagement=10))
        assert [f.subject for f in found] == ["t1"]
        assert found[0].evidence["affiliation_evaluated"] is False

    def test_repeat_retweeters_in_evidence(self):
        records, profiles = hijack_corpus(10, retweeter_bio="brexit")
        records.append(tweet("rx", "rt0", Kind.RETWEET, target_tweet="t1"))
        records.append(tweet("ry", "rt0", Kind.RETWEET, target_tweet="t1"))
        found = detect_hijacks(records, ANNOTATIONS, profiles, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=10))
        assert found[0].evidence["repeat_retweeters"] == {"rt0": 3}

    def test_findings_sorted_by_engagement(self):
        records, profiles = hijack_corpus(12, retweeter_bio="brexit")
        records.append(tweet("t2", "author2", tags=["mufc", "brexit"]))
        for i in range(15):
            records.append(tweet(f"s{i}", f"rt{i}", Kind.RETWEET, target_tweet="t2"))
        found = detect_hijacks(records, ANNOTATIONS, profiles, {"mufc": MUFC_PROFILE},
                               self.config(min_engagement=10))
        assert [f.subject for f in found] == ["t2", "t1"]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            HijackConfig(min_engagement=0)
        with pytest.raises(ValueError):
            HijackConfig(max_affiliation_ratio=0.0)


def activism_fixture(cluster_size=12, source_posts=2, outsiders=40):
    """Cluster members retweet their roots' posts; outsiders post originals."""
    records = []
    members = [f"m{i}" for i in range(cluster_size)]
    roots = members[:source_posts]
    for j, root in enumerate(roots):
        records.append(tweet(f"post{j}", root))
    for i, member in enumerate(members[source_posts:]):
        j = i % source_posts
        records.append(tweet(f"rt{i}", member, Kind.RETWEET,
                             target_tweet=f"post{j}", target_user=roots[j]))
    for i in range(outsiders):
        records.append(tweet(f"o{i}", f"out{i}"))

    graph = WeightedGraph(directed=True)
    for r in records:
        if r.kind is Kind.RETWEET:
            graph.add_edge(r.user_id, r.target_user_id, 1.0)
    assignment = {m: 0 for m in members} | {f"out{i}": 1 for i in range(outsiders)}
    partition = Partition(assignment=assignment, modularity=0.5, resolution=1.0,
                          seed=0, pass_modularity=[0.5])
    return records, graph, partition


class TestDetectActivistClusters:
    def config(self, **kw):
        return ActivismConfig(**kw)

    def test_flags_amplifying_community(self):
        records, graph, partition = activism_fixture()
        found = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_cluster_size=10)))
        assert [f.subject for f in found] == ["0"]
        f = found[0]
        assert f.kind == "activist_cluster"
        assert f.evidence["size"] == 12
        assert f.evidence["community_retweet_rate"] == pytest.approx(10 / 12)
        assert f.evidence["rest_retweet_rate"] == 0.0
        assert f.evidence["source_posts"] == 2

    def test_small_community_skipped(self):
        records, graph, partition = activism_fixture(cluster_size=12)
        found = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_cluster_size=13)))
        assert found == []

    def test_lift_threshold_monotone(self):
        records, graph, partition = activism_fixture()
        lift = 10 / 12
        passing = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_retweet_rate_lift=lift - 0.01)))
        failing = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_retweet_rate_lift=lift + 0.01)))
        assert len(passing) == 1
        assert failing == []

    def test_single_source_wave_skipped(self):
        records, graph, partition = activism_fixture(source_posts=1)
        found = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_source_posts=2)))
        assert found == []
        relaxed = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_source_posts=1)))
        assert len(relaxed) == 1

    def test_baseline_excludes_community(self):
        # Outsiders retweet heavily too: lift over the rest collapses.
        records, graph, partition = activism_fixture(outsiders=40)
        records.append(tweet("op", "out0"))
        for i in range(1, 40):
            records.append(tweet(f"ort{i}", f"out{i}", Kind.RETWEET,
                                 target_tweet="op", target_user="out0"))
        found = detect_activist_clusters(
            graph, partition, records,
            DetectorConfig(activism=self.config(min_retweet_rate_lift=0.6)))
        assert found == []

    def test_cascade_roots_ranked_by_in_degree(self):
        records, graph, partition = activism_fixture(cluster_size=13, source_posts=2)
        # 11 retweeters split round-robin over 2 roots: m0 gets 6, m1 gets 5.
        found = detect_activist_clusters(graph, partition, records, DetectorConfig())
        roots = found[0].evidence["cascade_roots"]
        assert roots[0] == ["m0", 6.0]
        assert roots[1] == ["m1", 5.0]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ActivismConfig(min_cluster_size=0)
        with pytest.raises(ValueError):
            ActivismConfig(min_retweet_rate_lift=0.0)
        with pytest.raises(ValueError):
            ActivismConfig(min_source_posts=0)


def megaphone_fixture(n_quote=12, n_reply=12, n_mention=0, topical_posts=0):
    """Many accounts direct quotes/replies/mentions at a silent target."""
    records = []
    quote = WeightedGraph(directed=True)
    reply = WeightedGraph(directed=True)
    mention = WeightedGraph(directed=True)
    for i in range(n_quote):
        quote.add_edge(f"q{i}", "target", 1.0)
    for i in range(n_reply):
        reply.add_edge(f"p{i}", "target", 1.0)
    for i in range(n_mention):
        mention.add_edge(f"m{i}", "target", 1.0)
    for i in range(topical_posts):
        records.append(tweet(f"tp{i}", "target", tags=["mufc"]))
    # Background traffic so top-k lists are not all the target.
    for i in range(5):
        quote.add_edge(f"bg{i}", f"bh{i}", 1.0)
        reply.add_edge(f"bg{i}", f"bh{i}", 1.0)
    subnets = {"quote": quote, "reply": reply, "mention": mention}
    return records, subnets


class TestDetectMegaphones:
    def test_flags_silent_target_in_two_networks(self):
        records, subnets = megaphone_fixture()
        found = detect_megaphones(subnets, records, ANNOTATIONS, DetectorConfig())
        assert [f.subject for f in found] == ["target"]
        f = found[0]
        assert f.kind == "megaphone"
        assert set(f.evidence["networks_top"]) == {"quote", "reply"}
        assert f.score == 24.0

    def test_one_network_not_enough(self):
        records, subnets = megaphone_fixture(n_reply=0)
        del subnets["reply"]
        del subnets["mention"]
        assert detect_megaphones(subnets, records, ANNOTATIONS, DetectorConfig()) == []

    def test_topical_output_disqualifies(self):
        records, subnets = megaphone_fixture(topical_posts=6)
        cfg = DetectorConfig(megaphone=MegaphoneConfig(max_topical_posts=5))
        assert detect_megaphones(subnets, records, ANNOTATIONS, cfg) == []
        relaxed = DetectorConfig(megaphone=MegaphoneConfig(max_topical_posts=6))
        assert len(detect_megaphones(subnets, records, ANNOTATIONS, relaxed)) == 1

    def test_retweets_not_topical_output(self):
        records, subnets = megaphone_fixture()
        for i in range(8):
            records.append(tweet(f"rt{i}", "target", Kind.RETWEET,
                                 tags=["mufc"], target_tweet="x"))
        found = detect_megaphones(subnets, records, ANNOTATIONS, DetectorConfig())
        assert len(found) == 1
        assert found[0].evidence["topical_posts"] == 0

    def test_min_in_degree_floors_summed_weight(self):
        records, subnets = megaphone_fixture(n_quote=5, n_reply=4)
        cfg = DetectorConfig(megaphone=MegaphoneConfig(min_in_degree=10.0))
        assert detect_megaphones(subnets, records, ANNOTATIONS, cfg) == []
        relaxed = DetectorConfig(megaphone=MegaphoneConfig(min_in_degree=9.0))
        assert len(detect_megaphones(subnets, records, ANNOTATIONS, relaxed)) == 1

    def test_mention_concentration_with_partition(self):
        records, subnets = megaphone_fixture(n_mention=6)
        assignment = {f"m{i}": 0 for i in range(4)} | {"m4": 1, "m5": 1}
        partition = Partition(assignment=assignment, modularity=0.0, resolution=1.0,
                              seed=0, pass_modularity=[0.0])
        found = detect_megaphones(subnets, records, ANNOTATIONS, DetectorConfig(),
                                  user_partition=partition)
        conc = found[0].evidence["mention_concentration"]
        assert conc == {"0": 4, "1": 2}

    def test_top_k_restricts_candidates(self):
        records, subnets = megaphone_fixture()
        # With k=1 both top lists are just the target; a second-tier node
        # appearing in one list only cannot qualify.
        cfg = DetectorConfig(megaphone=MegaphoneConfig(top_k_in_degree=1))
        found = detect_megaphones(subnets, records, ANNOTATIONS, cfg)
        assert [f.subject for f in found] == ["target"]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MegaphoneConfig(top_k_in_degree=0)
        with pytest.raises(ValueError):
            MegaphoneConfig(max_topical_posts=-1)
        with pytest.raises(ValueError):
            MegaphoneConfig(min_in_degree=-0.1)
