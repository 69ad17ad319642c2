import json
import pathlib
import warnings

import pytest

import qgen

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def load_pairs(name):
    return [json.loads(line) for line in (FIXTURES / name).read_text().splitlines() if line.strip()]


@pytest.fixture(scope="module")
def annotator():
    return qgen.Annotator(fixtures=[str(FIXTURES / "worked_example.tsv")])


@pytest.fixture(scope="module")
def store(annotator):
    store, failures = qgen.train(load_pairs("worked_example_pairs.jsonl"), annotator)
    assert failures == []
    return store


def test_annotate(annotator):
    s = annotator.annotate("Peter Sagan comes from Slovakia.")
    assert s.tokens == ["Peter", "Sagan", "comes", "from", "Slovakia", "."]
    d = s.to_dict()
    assert d["layers"]["pos"][2] == ["VBZ"]
    assert d["layers"]["ner"][4] == ["location"]


def test_layer_similarity():
    a, b = qgen.load_annotations(str(FIXTURES / "similarity_pair.tsv"))
    assert qgen.layer_match(a, b, "lemma") == (3, 6)
    assert qgen.layer_match(a, b, "sst") == (1, 3)
    assert qgen.similarity(a, b) == pytest.approx(17 / 25)
    with pytest.raises(ValueError):
        qgen.layer_match(a, b, "nope")


def test_worked_example(store, annotator):
    assert len(store) == 4
    out = qgen.generate("Bhumibol Adulyadej was the king of Thailand.", store, annotator, min_score=0.0)
    assert out[0]["question"] == "Who was the king of Thailand?"
    assert out[0]["answer"] == "Bhumibol Adulyadej"
    assert out[0]["id"] == "q1"


def test_training_failures_are_reported(annotator):
    store, failures = qgen.train(load_pairs("ten_pairs.jsonl"), annotator)
    assert len(store) == 9
    assert failures == [("10", "unalignable pair")]


def test_feedback_and_persistence(store, tmp_path):
    copy = qgen.RuleStore.from_json(store.to_json())
    qgen.rate(copy, 1, 0.0, 0.0)
    assert copy.success_rate(1) == pytest.approx(0.5)
    path = tmp_path / "store.json"
    copy.save(str(path))
    assert qgen.RuleStore.load(str(path)).success_rate(1) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        qgen.rate(copy, 1, 0.3, 1.0)


def test_empty_store_is_an_input_error(annotator):
    with pytest.raises(qgen.InputError):
        qgen.generate("Peter Sagan comes from Slovakia.", qgen.RuleStore(), annotator)


def test_metrics():
    g = "Is Egypt situated in the north?"
    r = "Is Egypt situated in the north of Africa?"
    assert qgen.metrics.rouge_l(g, r) == pytest.approx(0.875)
    assert abs(qgen.metrics.bleu_average(g, r) - 0.72) <= 0.05
    assert qgen.metrics.bleu(r, r, 4) == 1.0
    assert qgen.metrics.irr_binary({"q": [1.0, 1.0, 0.5]}) == pytest.approx(100 / 3)
    assert qgen.metrics.irr_numeric({"q": [1.0, 1.0, 0.5]}) == pytest.approx(250 / 3)


def test_warnings_reach_python():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        qgen.metrics.irr_binary({"q": [1.0]})
    assert any("fewer than 2 ratings" in str(w.message) for w in caught)
