import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from perskey.analyzer import AnalyzerConfig
from perskey.dom import EmphasisSpan, ImageInfo, LinkInfo, Segment
from perskey.profile import Profile
from perskey.scoring import DIMENSIONS, saturate, score_dimension, score_segment


def segment(text="", links=(), images=(), emphasis=()):
    return Segment(0, (("div", 0),), text, tuple(links), tuple(images), tuple(emphasis))


@pytest.mark.parametrize("m, expected", [(0, 0.0), (1, 0.5), (3, 0.75)])
def test_saturate(m, expected):
    assert saturate(m) == expected


def test_saturate_rejects_negative():
    with pytest.raises(ValueError):
        saturate(-1)


class TestDimensions:
    def test_mixed_sources(self, small_cfg):
        s = segment("we like rust here", links=[LinkInfo("rust tutorial", "/t")])
        p = Profile("u", (("rust",), ("parser",)))
        got = {k: score_dimension(k, s, p, small_cfg) for k in DIMENSIONS}
        assert got == {"theme": 0.5, "link": 0.5, "image": 0.0, "visual": 0.0}
        assert score_segment(s, p, small_cfg).total == 1.0

    def test_empty_profile(self, small_cfg):
        s = segment("rust", links=[LinkInfo("rust", "")], images=[ImageInfo("rust", "", "")])
        scores = score_segment(s, Profile("u"), small_cfg)
        assert (scores.link, scores.image, scores.visual, scores.theme, scores.total) == (0, 0, 0, 0, 0)

    def test_four_terms(self, small_cfg):
        s = segment("rust web parser data")
        p = Profile("u", (("rust",), ("web",), ("parser",), ("data",)))
        assert score_dimension("theme", s, p, small_cfg) == 0.8

    def test_image_reads_alt_and_title(self, small_cfg):
        s = segment("x", images=[ImageInfo("", "rust logo", "a.png"), ImageInfo("web", "", "b.png")])
        p = Profile("u", (("rust",), ("web",), ("data",)))
        assert score_dimension("image", s, p, small_cfg) == saturate(2)

    def test_phrase_not_matched_across_elements(self, small_cfg):
        s = segment("x", links=[LinkInfo("web", ""), LinkInfo("parser", "")])
        assert score_dimension("link", s, Profile("u", (("web", "parser"),)), small_cfg) == 0.0

    def test_visual_from_emphasis(self, small_cfg):
        s = segment("x", emphasis=[EmphasisSpan("Rust Parsers", "h2")])
        assert score_dimension("visual", s, Profile("u", (("rust", "parsers"),)), small_cfg) == 0.5

    def test_unknown_dimension(self, small_cfg):
        with pytest.raises(ValueError):
            score_dimension("colour", segment("x"), Profile("u", (("x",),)), small_cfg)


def _brute(s, profile, stop):
    def toks(text):
        out, cur = [], ""
        for ch in text.lower() + " ":
            if ch.isalnum():
                cur += ch
            else:
                if len(cur) >= 2 and cur not in stop:
                    out.append(cur)
                cur = ""
        return out

    def has(term, lst):
        return any(tuple(lst[i:i + len(term)]) == term for i in range(len(lst)))

    sources = {
        "link": [l.anchor_text for l in s.links],
        "image": [t for i in s.images for t in (i.alt_text, i.title_text)],
        "visual": [e.text for e in s.emphasis],
        "theme": [s.text],
    }
    out = {}
    for k, texts in sources.items():
        m = 0
        for term in profile:
            if any(has(term, toks(t)) for t in texts):
                m += 1
        out[k] = m / (m + 1)
    return out


words = st.sampled_from(["rust", "web", "parser", "the", "data", "x"])
phrase = st.lists(words, min_size=1, max_size=4).map(" ".join)
terms = st.lists(st.sampled_from(["rust", "web", "parser", "data"]), min_size=1, max_size=2).map(tuple)


@given(phrase, st.lists(phrase, max_size=3), st.lists(phrase, max_size=2), st.lists(phrase, max_size=2),
       st.lists(terms, max_size=4, unique=True), st.lists(terms, max_size=3))
def test_against_brute_force(text, anchors, alts, emph, profile_terms, extra):
    small_cfg = AnalyzerConfig(stopwords=frozenset({"the", "and", "of", "a", "is"}))
    s = segment(text, [LinkInfo(a, "") for a in anchors], [ImageInfo(a, "", "") for a in alts],
                [EmphasisSpan(e, "b") for e in emph])
    p = Profile("u", tuple(profile_terms))
    got = score_segment(s, p, small_cfg)
    exp = _brute(s, p.terms, small_cfg.stopwords)
    assert (got.link, got.image, got.visual, got.theme) == (exp["link"], exp["image"], exp["visual"], exp["theme"])
    assert got.total == got.link + got.image + got.visual + got.theme
    assert 0 <= got.total < 4
    # a larger profile never scores lower
    bigger = score_segment(s, p.union(extra), small_cfg)
    for k in ("link", "image", "visual", "theme", "total"):
        assert getattr(bigger, k) >= getattr(got, k)
    # adding links touches only the link dimension
    more_links = segment(text, [LinkInfo(a, "") for a in anchors + ["rust web"]], s.images, s.emphasis)
    again = score_segment(more_links, p, small_cfg)
    assert (again.image, again.visual, again.theme) == (got.image, got.visual, got.theme)


def test_randomized_bounds(small_cfg):
    rng = random.Random(3)
    vocab = ["rust", "web", "parser", "data"]
    for _ in range(200):
        text = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 20)))
        p = Profile("u", tuple({(rng.choice(vocab),) for _ in range(rng.randint(0, 6))}))
        sc = score_segment(segment(text), p, small_cfg)
        m = round(sc.theme / (1 - sc.theme))
        assert sc.theme == m / (1 + m)
