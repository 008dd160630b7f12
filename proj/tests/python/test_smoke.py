"""Smoke tests for the cca python bindings."""

import json

import pytest

import cca


@pytest.fixture()
def corpus_path(tmp_path):
    records = [
        {
            "id": "r1",
            "year": 1999,
            "fos": ["Psychology", "Sociology"],
            "citations": [{"work": "kuhn", "citance": "the paradigm may shift"}],
        },
        {
            "id": "r2",
            "year": 2007,
            "fos": ["psychology"],
            "citations": [
                {"work": "kuhn", "citance": "a crisis; normal science"},
                {"work": "kuhn", "citance": "the structure of scientific revolutions"},
            ],
        },
        {
            "id": "r3",
            "year": 2015,
            "fos": ["sociology"],
            "citations": [{"work": "kuhn", "citance": "paradigms everywhere"}],
        },
        {
            "id": "r4",
            "year": 2015,
            "fos": ["sociology"],
            "citations": [{"work": "popper", "citance": "falsified claims"}],
        },
    ]
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n")
    return str(path)


def test_normalize():
    assert cca.normalize("Kuhn's paradigm, as noted: shifts.") == [
        "kuhn's",
        "paradigm",
        "as",
        "noted",
        "shifts",
    ]
    assert cca.normalize("Falsification; INDUKTION") == ["falsification", "induktion"]
    assert cca.normalize("a-b", "-") == ["a", "b"]


def test_word_frequency():
    ranked = cca.word_frequency(["a b", "b"])
    assert ranked == [("b", 2), ("a", 1)]


def test_builtin_lexicons():
    kuhn = cca.builtin_lexicon("kuhn")
    assert kuhn.work_id == "kuhn"
    assert len(kuhn.concepts) == 7
    assert len(cca.builtin_lexicon("popper").concepts) == 5
    assert len(cca.builtin_lexicon("popper-report").concepts) == 4
    assert len(cca.builtin_hedges().terms) == 10
    with pytest.raises(ValueError):
        cca.builtin_lexicon("latour")


def test_pipeline(corpus_path):
    corpus, report = cca.load_corpus(corpus_path)
    assert report["total_records"] == 4
    assert report["per_work"]["kuhn"]["with_context"] == 3

    matrix = cca.build_matrix(corpus, cca.builtin_lexicon("kuhn"))
    # r1 contributes two cases (two fields of study).
    assert len(matrix) == 4

    table = cca.tabulate(matrix, group_by="fos")
    assert table.groups == ["psychology", "sociology"]
    paradigm = table.concepts.index("paradigm")
    assert table.concept_total(paradigm) == 3
    assert table.total_cases() == 4

    tests = cca.per_item_tests(table)
    assert len(tests) == 7
    for test in tests:
        assert 0.0 <= test.p_raw <= 1.0
        assert test.p_adjusted == pytest.approx(min(1.0, 7 * test.p_raw))

    overall = cca.overall_test(matrix, group_by="fos", mode="mc", iterations=200, seed=1)
    again = cca.overall_test(matrix, group_by="fos", mode="mc", iterations=200, seed=1)
    assert overall.p_raw == again.p_raw
    assert overall.method == "monte-carlo"


def test_title_exclusion(corpus_path):
    corpus, _ = cca.load_corpus(corpus_path)
    matrix = cca.build_matrix(corpus, cca.builtin_lexicon("kuhn"))
    table = cca.tabulate(matrix, group_by="fos")
    # r2 cites the book title itself: "structure" must not count from it.
    structure = table.concepts.index("structure")
    assert table.concept_total(structure) == 0


def test_uncertainty_and_render(corpus_path):
    corpus, _ = cca.load_corpus(corpus_path)
    matrix = cca.build_matrix(corpus, cca.builtin_lexicon("kuhn"))
    table, test = cca.uncertainty(matrix, group_by="none", min_total=0)
    paradigm = table.concepts.index("paradigm")
    assert table.concept_total_mentions[paradigm] == 3
    assert table.concept_total_hedged[paradigm] == 2  # "may" co-occurs, two cases
    assert cca.UncertaintyTable.rate(1, 40) == pytest.approx(2.5)

    rendered = cca.render_uncertainty(table, test, "csv")
    assert "concept,measure" in rendered

    full = cca.render(cca.tabulate(matrix, group_by="fos"), [], "structured")
    parsed = cca.parse_multi_response(full)
    assert parsed.total_cases() == 4


def test_periods():
    labels, assignment = cca.bin_periods([1999, 2005, 2006, 2018], [2000, 2006, 2011])
    assert labels == ["<2000", "2000-2005", "2006-2010", "2011-2018"]
    assert assignment == [0, 1, 2, 3]


def test_chi2_survival():
    assert cca.chi2_survival(3.841458820694124, 1) == pytest.approx(0.05, abs=1e-6)


def test_compare(corpus_path):
    corpus, _ = cca.load_corpus(corpus_path)
    kuhn_table = cca.tabulate(cca.build_matrix(corpus, cca.builtin_lexicon("kuhn")), "fos")
    popper_table = cca.tabulate(
        cca.build_matrix(corpus, cca.builtin_lexicon("popper-report")), "fos"
    )
    table, test = cca.compare(kuhn_table, popper_table, "K", "P")
    assert table.left_total == 5
    assert table.right_total == 1
    assert test.method == "pearson-2xG"
    rendered = cca.render_comparison(table, test, "markdown")
    assert "| group |" in rendered
