import random

import pytest

from perskey.analyzer import AnalyzerConfig
from perskey.dom import read_document
from perskey.evaluation import (
    EmptyStats,
    GroupStats,
    MalformedRow,
    ManifestRow,
    RowError,
    aggregate_means,
    load_manifest,
    read_stats_csv,
    run_eval,
    write_stats_csv,
)
from perskey.fusion import ExtractionConfig, extract_keywords
from perskey.profile import read_profile

PAGE = (
    "<body><div>rust compilers produce fast binaries for systems</div>"
    "<div>gardening tips for tomatoes and peppers in summer</div>"
    "<div>weather forecast shows rain across the region</div></body>"
)
CFG = ExtractionConfig(analyzer=AnalyzerConfig(top_k=1))


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestManifest:
    def test_one_row(self):
        assert load_manifest("g1\tu1\tp.txt\ta.html\n") == [ManifestRow("g1", "u1", "p.txt", "a.html")]

    def test_comments_only(self):
        assert load_manifest("# c\n\n") == []

    def test_malformed(self):
        with pytest.raises(MalformedRow) as info:
            load_manifest("g1\tu1\tp.txt\n")
        assert info.value.lineno == 1


class TestRunEval:
    def test_single_row(self, tmp_path):
        write(tmp_path, "p.txt", "rust\ntomatoes\nparser\nmusic\n")
        write(tmp_path, "a.html", PAGE)
        stats = run_eval(load_manifest("g1\tu1\tp.txt\ta.html\n"), CFG, base_dir=str(tmp_path))
        assert stats == [GroupStats("g1", 4.0, 3.0, 2.0)]

    def test_single_row_equals_direct_call(self, tmp_path):
        prof = write(tmp_path, "p.txt", "rust\nweather\n")
        page = write(tmp_path, "a.html", PAGE)
        (stats,) = run_eval([ManifestRow("g", "u", prof, page)], CFG)
        direct = extract_keywords(read_document(page), read_profile(prof, "u"), cfg=CFG)
        assert stats.mean_keywords == len(direct.keywords)
        assert stats.mean_segments == len(direct.segments)

    def test_group_mean(self, tmp_path):
        write(tmp_path, "p1.txt", "rust\n")  # 1 keyword
        write(tmp_path, "p2.txt", "rust\ntomatoes\nweather\n")  # 3 keywords
        write(tmp_path, "a.html", PAGE)
        rows = load_manifest("g\tu1\tp1.txt\ta.html\ng\tu2\tp2.txt\ta.html\n")
        (stats,) = run_eval(rows, CFG, base_dir=str(tmp_path))
        assert stats.mean_keywords == 2.0
        assert stats.mean_profile_terms == 2.0

    def test_missing_file_reports_row(self, tmp_path):
        write(tmp_path, "p.txt", "rust\n")
        rows = [ManifestRow("g", "u", "p.txt", "a.html"), ManifestRow("g", "u", "p.txt", "missing.html")]
        write(tmp_path, "a.html", PAGE)
        with pytest.raises(RowError) as info:
            run_eval(rows, CFG, base_dir=str(tmp_path))
        assert info.value.index == 1

    def test_thirty_rows_against_manual_aggregation(self, tmp_path, corpus_paths):
        rng = random.Random(11)
        vocab = ["rust", "web", "parser", "music", "travel", "search", "index", "block", "token", "page"]
        rows = []
        for i in range(30):
            terms = rng.sample(vocab, rng.randint(1, 6))
            prof = write(tmp_path, f"p{i}.txt", "\n".join(terms) + "\n")
            rows.append(ManifestRow(f"g{rng.randint(0, 3)}", f"u{i}", prof, rng.choice(corpus_paths)))
        stats = run_eval(rows, ExtractionConfig(threshold=0.5))
        per = {}
        order = []
        for row in rows:
            r = extract_keywords(read_document(row.page_path, row.page_path),
                                 read_profile(row.profile_path, row.user_id), cfg=ExtractionConfig(threshold=0.5))
            if row.group_id not in per:
                per[row.group_id] = []
                order.append(row.group_id)
            per[row.group_id].append((len(read_profile(row.profile_path).terms), len(r.segments), len(r.keywords)))
        expected = []
        for g in order:
            vals = per[g]
            n = len(vals)
            expected.append(GroupStats(g, sum(v[0] for v in vals) / n, sum(v[1] for v in vals) / n,
                                       sum(v[2] for v in vals) / n))
        assert [s.group_id for s in stats] == order
        for s, e in zip(stats, expected):
            assert s.group_id == e.group_id
            assert s.mean_profile_terms == pytest.approx(e.mean_profile_terms, abs=1e-12)
            assert s.mean_segments == pytest.approx(e.mean_segments, abs=1e-12)
            assert s.mean_keywords == pytest.approx(e.mean_keywords, abs=1e-12)
        # permuting rows within groups leaves the stats unchanged
        shuffled = rows[:]
        rng.shuffle(shuffled)
        again = {s.group_id: s for s in run_eval(shuffled, ExtractionConfig(threshold=0.5))}
        for s in stats:
            assert again[s.group_id] == s


class TestAggregate:
    def test_single_group(self):
        assert aggregate_means([GroupStats("g", 4.0, 3.0, 2.0)]) == (4.0, 2.0)

    def test_empty(self):
        with pytest.raises(EmptyStats):
            aggregate_means([])


class TestStatsCsv:
    def test_one_group(self):
        text = write_stats_csv([GroupStats("1", 4.0, 3.0, 2.0)])
        assert text == (
            "group_id,mean_initial_profile_terms,mean_segment_count,mean_personalized_keywords\n"
            "1,4.00,3.00,2.00\n"
        )

    def test_header_only(self):
        assert write_stats_csv([]).count("\n") == 1

    def test_table1_round_trip(self, table1_text):
        stats = read_stats_csv(table1_text)
        assert len(stats) == 15
        assert write_stats_csv(stats) == table1_text
        assert read_stats_csv(write_stats_csv(stats)) == stats

    def test_bad_header(self):
        with pytest.raises(MalformedRow):
            read_stats_csv("a,b,c,d\n")
